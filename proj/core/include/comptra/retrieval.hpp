#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "comptra/corpus.hpp"

namespace comptra {

struct ScoredCandidate {
  std::size_t pool_id = 0;
  double score = 0.0;

  bool operator==(const ScoredCandidate&) const = default;
};

/// Lowercase, whitespace split, strip edge punctuation, drop empties.
std::vector<std::string> tokenize_retrieval(std::string_view text);

/// Sorts by descending score, ascending pool_id, and keeps the first k
/// candidates whose pool entry is eligible.
std::vector<ScoredCandidate> rank_top_k(std::vector<ScoredCandidate> scored,
                                        const std::vector<bool>& eligible,
                                        std::size_t k);

struct Bm25Params {
  double k1 = 1.5;
  double b = 0.75;
};

/// Okapi BM25 over the source side of a selection pool.
class RetrievalIndex {
 public:
  std::vector<std::vector<std::string>> doc_tokens;
  std::unordered_map<std::string, std::size_t> doc_freq;
  double avg_doc_len = 0.0;
  std::size_t n_docs = 0;
  Bm25Params params;
  std::vector<bool> eligible;

  double idf(const std::string& term) const;
  /// Score of one document against already-tokenized query terms.
  double score(std::size_t doc, const std::vector<std::string>& query_terms) const;

 private:
  friend RetrievalIndex build_bm25_index(const ParallelCorpus&, Bm25Params);
  std::vector<std::unordered_map<std::string, std::size_t>> term_freq_;
};

/// Throws Error(EmptyPool) for an empty corpus. Pool entries with an empty
/// target are indexed but never returned.
RetrievalIndex build_bm25_index(const ParallelCorpus& corpus, Bm25Params params = {});

std::vector<ScoredCandidate> bm25_top_k(const RetrievalIndex& index, std::string_view query,
                                        std::size_t k);

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

std::vector<ScoredCandidate> lcs_top_k(const ParallelCorpus& corpus, std::string_view query,
                                       std::size_t k);

/// Row-major n_docs x dim matrix.
struct EmbeddingMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  std::vector<double> row(std::size_t i) const {
    return {values.begin() + static_cast<std::ptrdiff_t>(i * dim),
            values.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim)};
  }
};

/// Text format: header line "n_docs dim", then one row of dim decimals per doc.
EmbeddingMatrix load_embedding_matrix(const std::string& path);

std::vector<ScoredCandidate> cosine_top_k(const EmbeddingMatrix& vectors,
                                          const std::vector<double>& query_vec, std::size_t k,
                                          const std::vector<bool>& eligible = {});

/// Turns texts into vectors for cosine retrieval.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
};

/// POST {url} with {"input": [texts]} and read {"embeddings": [[...]]}.
std::unique_ptr<Embedder> make_http_embedder(std::string url, double timeout_s = 120.0);

enum class RetrieverKind { Bm25, Lcs, Cosine };

RetrieverKind retriever_kind_from_string(const std::string& name);
std::string_view to_string(RetrieverKind kind);

/// Pool-bound retriever used by the pipeline. Safe for concurrent queries
/// provided the Embedder (cosine only) is.
class Retriever {
 public:
  virtual ~Retriever() = default;
  virtual std::vector<ScoredCandidate> top_k(std::string_view query, std::size_t k) const = 0;
};

std::unique_ptr<Retriever> make_bm25_retriever(const ParallelCorpus& pool, Bm25Params params = {});
std::unique_ptr<Retriever> make_lcs_retriever(const ParallelCorpus& pool);
/// `embedder` must outlive the retriever.
std::unique_ptr<Retriever> make_cosine_retriever(const ParallelCorpus& pool, EmbeddingMatrix vectors,
                                                 Embedder& embedder);

}  // namespace comptra
