#include "comptra/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "comptra/error.hpp"
#include "comptra/text.hpp"
#include "http_util.hpp"

namespace comptra {

std::vector<std::string> tokenize_retrieval(std::string_view text) {
  return text::tokenize_words(text, /*lowercase=*/true);
}

std::vector<ScoredCandidate> rank_top_k(std::vector<ScoredCandidate> scored,
                                        const std::vector<bool>& eligible, std::size_t k) {
  std::erase_if(scored, [&](const ScoredCandidate& c) {
    return c.pool_id < eligible.size() && !eligible[c.pool_id];
  });
  auto by_rank = [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.pool_id < b.pool_id;
  };
  if (scored.size() > k) {
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), by_rank);
    scored.resize(k);
  } else {
    std::sort(scored.begin(), scored.end(), by_rank);
  }
  return scored;
}

namespace {

std::vector<bool> eligibility(const ParallelCorpus& corpus) {
  std::vector<bool> eligible(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) eligible[i] = !corpus[i].target.empty();
  return eligible;
}

}  // namespace

double RetrievalIndex::idf(const std::string& term) const {
  auto it = doc_freq.find(term);
  if (it == doc_freq.end()) return 0.0;
  const double n = static_cast<double>(n_docs);
  const double df = static_cast<double>(it->second);
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double RetrievalIndex::score(std::size_t doc, const std::vector<std::string>& query_terms) const {
  const auto& tf_map = term_freq_[doc];
  const double len_norm =
      1.0 - params.b + params.b * static_cast<double>(doc_tokens[doc].size()) / avg_doc_len;
  double total = 0.0;
  for (const auto& term : query_terms) {
    auto it = tf_map.find(term);
    if (it == tf_map.end()) continue;
    const double tf = static_cast<double>(it->second);
    total += idf(term) * (tf * (params.k1 + 1.0)) / (tf + params.k1 * len_norm);
  }
  return total;
}

RetrievalIndex build_bm25_index(const ParallelCorpus& corpus, Bm25Params params) {
  if (corpus.empty()) throw Error(ErrorKind::EmptyPool, "selection pool has no sentences");
  RetrievalIndex index;
  index.params = params;
  index.n_docs = corpus.size();
  index.eligible = eligibility(corpus);
  index.doc_tokens.reserve(corpus.size());
  index.term_freq_.reserve(corpus.size());
  std::size_t total_len = 0;
  for (const auto& pair : corpus.pairs) {
    auto tokens = tokenize_retrieval(pair.source);
    std::unordered_map<std::string, std::size_t> tf;
    for (const auto& t : tokens) ++tf[t];
    for (const auto& [term, _] : tf) ++index.doc_freq[term];
    total_len += tokens.size();
    index.doc_tokens.push_back(std::move(tokens));
    index.term_freq_.push_back(std::move(tf));
  }
  index.avg_doc_len = static_cast<double>(total_len) / static_cast<double>(index.n_docs);
  // Pools of punctuation-only sentences have no tokens at all; any positive
  // value keeps the length normalisation finite.
  if (index.avg_doc_len <= 0.0) index.avg_doc_len = 1.0;
  return index;
}

std::vector<ScoredCandidate> bm25_top_k(const RetrievalIndex& index, std::string_view query,
                                        std::size_t k) {
  auto terms = tokenize_retrieval(query);
  if (terms.empty() || k == 0) return {};
  std::vector<ScoredCandidate> scored;
  scored.reserve(index.n_docs);
  for (std::size_t d = 0; d < index.n_docs; ++d) scored.push_back({d, index.score(d, terms)});
  return rank_top_k(std::move(scored), index.eligible, k);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  // Two-row DP over the shorter sequence.
  const auto& outer = a.size() >= b.size() ? a : b;
  const auto& inner = a.size() >= b.size() ? b : a;
  std::vector<std::size_t> prev(inner.size() + 1, 0), cur(inner.size() + 1, 0);
  for (const auto& x : outer) {
    for (std::size_t j = 1; j <= inner.size(); ++j)
      cur[j] = x == inner[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[inner.size()];
}

std::vector<ScoredCandidate> lcs_top_k(const ParallelCorpus& corpus, std::string_view query,
                                       std::size_t k) {
  auto q = tokenize_retrieval(query);
  if (q.empty() || k == 0) return {};
  std::vector<ScoredCandidate> scored;
  scored.reserve(corpus.size());
  for (const auto& pair : corpus.pairs)
    scored.push_back({pair.id, static_cast<double>(lcs_length(q, tokenize_retrieval(pair.source)))});
  return rank_top_k(std::move(scored), eligibility(corpus), k);
}

EmbeddingMatrix load_embedding_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, path);
  EmbeddingMatrix m;
  if (!(in >> m.rows >> m.dim) || m.dim == 0)
    throw Error(ErrorKind::MalformedRecord, path + ": expected header 'n_docs dim'");
  m.values.resize(m.rows * m.dim);
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (!(in >> m.values[i]))
      throw Error(ErrorKind::MalformedRecord,
                  path + ": row " + std::to_string(i / m.dim + 1) + " is short");
  }
  return m;
}

namespace {

double norm(const double* v, std::size_t dim) {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace

std::vector<ScoredCandidate> cosine_top_k(const EmbeddingMatrix& vectors,
                                          const std::vector<double>& query_vec, std::size_t k,
                                          const std::vector<bool>& eligible) {
  if (query_vec.size() != vectors.dim)
    throw Error(ErrorKind::DimensionMismatch, "query has dimension " + std::to_string(query_vec.size()) +
                                                  ", pool vectors " + std::to_string(vectors.dim));
  const double qn = norm(query_vec.data(), query_vec.size());
  if (qn == 0.0) throw Error(ErrorKind::ZeroVector, "query vector");
  std::vector<ScoredCandidate> scored;
  scored.reserve(vectors.rows);
  for (std::size_t r = 0; r < vectors.rows; ++r) {
    const double* row = vectors.values.data() + r * vectors.dim;
    const double rn = norm(row, vectors.dim);
    if (rn == 0.0) throw Error(ErrorKind::ZeroVector, "pool vector " + std::to_string(r));
    double dot = 0.0;
    for (std::size_t i = 0; i < vectors.dim; ++i) dot += row[i] * query_vec[i];
    scored.push_back({r, dot / (rn * qn)});
  }
  return rank_top_k(std::move(scored), eligible, k);
}

namespace {

class HttpEmbedder : public Embedder {
 public:
  HttpEmbedder(std::string url, double timeout_s) : url_(std::move(url)), timeout_s_(timeout_s) {}

  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override {
    detail::HttpPostOptions opts;
    opts.timeout_s = timeout_s_;
    auto res = detail::post_json(url_, {{"input", texts}}, opts);
    try {
      auto out = res.at("embeddings").get<std::vector<std::vector<double>>>();
      if (out.size() != texts.size())
        throw Error(ErrorKind::MalformedResponse, "embedding count does not match input count");
      return out;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::MalformedResponse, std::string("embedding response: ") + e.what());
    }
  }

 private:
  std::string url_;
  double timeout_s_;
};

class Bm25Retriever : public Retriever {
 public:
  Bm25Retriever(const ParallelCorpus& pool, Bm25Params params) : index_(build_bm25_index(pool, params)) {}
  std::vector<ScoredCandidate> top_k(std::string_view query, std::size_t k) const override {
    return bm25_top_k(index_, query, k);
  }

 private:
  RetrievalIndex index_;
};

class LcsRetriever : public Retriever {
 public:
  explicit LcsRetriever(const ParallelCorpus& pool) : eligible_(eligibility(pool)) {
    if (pool.empty()) throw Error(ErrorKind::EmptyPool, "selection pool has no sentences");
    docs_.reserve(pool.size());
    for (const auto& p : pool.pairs) docs_.push_back(tokenize_retrieval(p.source));
  }
  std::vector<ScoredCandidate> top_k(std::string_view query, std::size_t k) const override {
    auto q = tokenize_retrieval(query);
    if (q.empty() || k == 0) return {};
    std::vector<ScoredCandidate> scored;
    scored.reserve(docs_.size());
    for (std::size_t d = 0; d < docs_.size(); ++d)
      scored.push_back({d, static_cast<double>(lcs_length(q, docs_[d]))});
    return rank_top_k(std::move(scored), eligible_, k);
  }

 private:
  std::vector<std::vector<std::string>> docs_;
  std::vector<bool> eligible_;
};

class CosineRetriever : public Retriever {
 public:
  CosineRetriever(const ParallelCorpus& pool, EmbeddingMatrix vectors, Embedder& embedder)
      : vectors_(std::move(vectors)), eligible_(eligibility(pool)), embedder_(embedder) {
    if (pool.empty()) throw Error(ErrorKind::EmptyPool, "selection pool has no sentences");
    if (vectors_.rows != pool.size())
      throw Error(ErrorKind::DimensionMismatch, std::to_string(vectors_.rows) + " embedding rows for " +
                                                    std::to_string(pool.size()) + " pool sentences");
  }
  std::vector<ScoredCandidate> top_k(std::string_view query, std::size_t k) const override {
    if (tokenize_retrieval(query).empty() || k == 0) return {};
    auto vecs = embedder_.embed({std::string(query)});
    return cosine_top_k(vectors_, vecs.at(0), k, eligible_);
  }

 private:
  EmbeddingMatrix vectors_;
  std::vector<bool> eligible_;
  Embedder& embedder_;
};

}  // namespace

std::unique_ptr<Embedder> make_http_embedder(std::string url, double timeout_s) {
  return std::make_unique<HttpEmbedder>(std::move(url), timeout_s);
}

RetrieverKind retriever_kind_from_string(const std::string& name) {
  if (name == "bm25") return RetrieverKind::Bm25;
  if (name == "lcs") return RetrieverKind::Lcs;
  if (name == "cosine" || name == "sonar") return RetrieverKind::Cosine;
  throw Error(ErrorKind::InvalidConfig, "unknown retriever '" + name + "'");
}

std::string_view to_string(RetrieverKind kind) {
  switch (kind) {
    case RetrieverKind::Bm25: return "bm25";
    case RetrieverKind::Lcs: return "lcs";
    case RetrieverKind::Cosine: return "cosine";
  }
  return "bm25";
}

std::unique_ptr<Retriever> make_bm25_retriever(const ParallelCorpus& pool, Bm25Params params) {
  return std::make_unique<Bm25Retriever>(pool, params);
}

std::unique_ptr<Retriever> make_lcs_retriever(const ParallelCorpus& pool) {
  return std::make_unique<LcsRetriever>(pool);
}

std::unique_ptr<Retriever> make_cosine_retriever(const ParallelCorpus& pool, EmbeddingMatrix vectors,
                                                 Embedder& embedder) {
  return std::make_unique<CosineRetriever>(pool, std::move(vectors), embedder);
}

}  // namespace comptra
