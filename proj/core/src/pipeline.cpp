#include "comptra/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "comptra/digest.hpp"
#include "comptra/error.hpp"
#include "comptra/text.hpp"
#include "http_util.hpp"

namespace comptra {

std::string_view to_string(TranslationMode mode) {
  switch (mode) {
    case TranslationMode::ZeroShot: return "zero_shot";
    case TranslationMode::FewShot: return "few_shot";
    case TranslationMode::CompTra: return "comptra";
    case TranslationMode::Ensemble: return "ensemble";
  }
  return "zero_shot";
}

TranslationMode translation_mode_from_string(const std::string& name) {
  if (name == "zero" || name == "zero_shot") return TranslationMode::ZeroShot;
  if (name == "few" || name == "few_shot") return TranslationMode::FewShot;
  if (name == "comptra") return TranslationMode::CompTra;
  if (name == "ensemble") return TranslationMode::Ensemble;
  throw Error(ErrorKind::InvalidConfig, "unknown mode '" + name + "'");
}

std::string_view to_string(PhraseTranslatorKind kind) {
  return kind == PhraseTranslatorKind::LlmFewShot ? "llm_few_shot" : "external_mt";
}

PhraseTranslatorKind phrase_translator_from_string(const std::string& name) {
  if (name == "llm" || name == "llm_few_shot") return PhraseTranslatorKind::LlmFewShot;
  if (name == "external" || name == "external_mt") return PhraseTranslatorKind::ExternalMt;
  throw Error(ErrorKind::InvalidConfig, "unknown phrase translator '" + name + "'");
}

void PipelineConfig::validate() const {
  if (k < 0) throw Error(ErrorKind::InvalidConfig, "k must be >= 0");
  if (translate_max_tokens <= 0 || merge_max_tokens <= 0)
    throw Error(ErrorKind::InvalidConfig, "token budgets must be positive");
  if (parallelism < 1) throw Error(ErrorKind::InvalidConfig, "parallelism must be >= 1");
  if (strategy.repeat_count < 1) throw Error(ErrorKind::InvalidConfig, "repeat_count must be >= 1");
  if (phrase_translator == PhraseTranslatorKind::ExternalMt && external_mt_endpoint.empty())
    throw Error(ErrorKind::InvalidConfig, "external_mt phrase translator requires an endpoint");
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const auto threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run(i);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// --- phrase translators and scorers ------------------------------------------

namespace {

class ExternalMtTranslator : public PhraseTranslator {
 public:
  ExternalMtTranslator(std::string endpoint, LanguagePair langs, double timeout_s, int max_retries)
      : endpoint_(std::move(endpoint)), langs_(std::move(langs)) {
    opts_.timeout_s = timeout_s;
    opts_.max_retries = max_retries;
  }

  std::string translate(const std::string& phrase, const std::vector<Demonstration>&) override {
    auto res = detail::post_json(endpoint_, {{"text", phrase}, {"src", langs_.src.code}, {"tgt", langs_.tgt.code}},
                                 opts_);
    if (!res.is_object() || !res.contains("translation") || !res["translation"].is_string())
      throw Error(ErrorKind::MalformedResponse, "MT response lacks a \"translation\" string");
    return res["translation"].get<std::string>();
  }

  bool uses_demonstrations() const override { return false; }

 private:
  std::string endpoint_;
  LanguagePair langs_;
  detail::HttpPostOptions opts_;
};

class ConstantScorer : public QualityScorer {
 public:
  explicit ConstantScorer(double v) : value_(v) {}
  double score(const std::string&, const std::string&) override { return value_; }

 private:
  double value_;
};

class LexicalOverlapScorer : public QualityScorer {
 public:
  double score(const std::string& source, const std::string& translation) override {
    auto src = tokenize_retrieval(source);
    if (src.empty()) return 0.0;
    auto hyp = tokenize_retrieval(translation);
    std::set<std::string> vocab(hyp.begin(), hyp.end());
    std::size_t hits = 0;
    for (const auto& t : src) hits += vocab.contains(t) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(src.size());
  }
};

class HttpScorer : public QualityScorer {
 public:
  HttpScorer(std::string url, double timeout_s) : url_(std::move(url)) { opts_.timeout_s = timeout_s; }
  double score(const std::string& source, const std::string& translation) override {
    auto res = detail::post_json(url_, {{"source", source}, {"translation", translation}}, opts_);
    if (!res.is_object() || !res.contains("score") || !res["score"].is_number())
      throw Error(ErrorKind::MalformedResponse, "scorer response lacks a numeric \"score\"");
    return res["score"].get<double>();
  }

 private:
  std::string url_;
  detail::HttpPostOptions opts_;
};

class FunctionScorer : public QualityScorer {
 public:
  explicit FunctionScorer(std::function<double(const std::string&, const std::string&)> fn) : fn_(std::move(fn)) {}
  double score(const std::string& s, const std::string& t) override { return fn_(s, t); }

 private:
  std::function<double(const std::string&, const std::string&)> fn_;
};

}  // namespace

std::unique_ptr<PhraseTranslator> make_external_mt_translator(std::string endpoint, LanguagePair langs,
                                                              double timeout_s, int max_retries) {
  return std::make_unique<ExternalMtTranslator>(std::move(endpoint), std::move(langs), timeout_s, max_retries);
}

std::unique_ptr<QualityScorer> make_constant_scorer(double value) { return std::make_unique<ConstantScorer>(value); }

std::unique_ptr<QualityScorer> make_lexical_overlap_scorer() { return std::make_unique<LexicalOverlapScorer>(); }

std::unique_ptr<QualityScorer> make_http_scorer(std::string url, double timeout_s) {
  return std::make_unique<HttpScorer>(std::move(url), timeout_s);
}

std::unique_ptr<QualityScorer> make_function_scorer(
    std::function<double(const std::string&, const std::string&)> fn) {
  return std::make_unique<FunctionScorer>(std::move(fn));
}

EnsembleChoice ensemble_select(const std::vector<EnsembleCandidate>& candidates, const std::string& source,
                               QualityScorer& scorer) {
  if (candidates.size() < 2)
    throw Error(ErrorKind::PreconditionFailed, "ensembling needs at least two candidates");
  EnsembleChoice choice;
  for (const auto& c : candidates) {
    double s = 0.0;
    try {
      s = scorer.score(source, c.translation);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::ScorerFailure, "candidate '" + c.name + "': " + e.what());
    }
    if (std::isnan(s)) throw Error(ErrorKind::ScorerFailure, "candidate '" + c.name + "' scored NaN");
    choice.scores.push_back(s);
  }
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (choice.scores[i] > choice.scores[choice.chosen_index]) choice.chosen_index = i;
  choice.chosen_name = candidates[choice.chosen_index].name;
  return choice;
}

// --- pipeline ----------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_sentence(const std::string& sentence) {
  if (text::trim(sentence).empty()) throw Error(ErrorKind::PreconditionFailed, "sentence is empty");
}

constexpr const char* kZeroShotFallback = "zero_shot_fallback";

}  // namespace

Pipeline::Pipeline(LanguagePair langs, PipelineConfig config, PipelineResources resources)
    : langs_(std::move(langs)), config_(std::move(config)), res_(std::move(resources)) {
  config_.validate();
  if (res_.llm == nullptr) throw Error(ErrorKind::InvalidConfig, "pipeline needs an LLM client");
  if (res_.prompts == nullptr) res_.prompts = &PromptSet::builtin();
  if (res_.stopwords == nullptr) res_.stopwords = &builtin_stopwords();
  if (res_.phrase_translator == nullptr && config_.phrase_translator == PhraseTranslatorKind::ExternalMt) {
    default_translator_ = make_external_mt_translator(config_.external_mt_endpoint, langs_);
    res_.phrase_translator = default_translator_.get();
  }
  slots_ = std::make_unique<std::counting_semaphore<>>(config_.parallelism);
}

Pipeline::~Pipeline() = default;

template <typename F>
auto Pipeline::gated(F&& fn) {
  slots_->acquire();
  struct Release {
    std::counting_semaphore<>* s;
    ~Release() { s->release(); }
  } release{slots_.get()};
  return fn();
}

std::string Pipeline::call(const std::string& prompt, int max_tokens, std::size_t& counter) {
  auto out = gated([&] { return res_.llm->complete(ChatRequest::single_user(prompt, max_tokens)); });
  ++counter;
  return out;
}

std::vector<ScoredCandidate> Pipeline::retrieve(const std::string& query) const {
  if (config_.k == 0 || res_.retriever == nullptr) return {};
  // Prompt blocks follow retrieval rank: best match first.
  return res_.retriever->top_k(query, static_cast<std::size_t>(config_.k));
}

std::vector<Demonstration> Pipeline::to_demonstrations(const std::vector<ScoredCandidate>& ids) const {
  std::vector<Demonstration> demos;
  demos.reserve(ids.size());
  for (const auto& c : ids) {
    const auto& pair = res_.pool->pairs.at(c.pool_id);
    demos.push_back({pair.source, pair.target});
  }
  return demos;
}

TranslationRecord Pipeline::translate_zero_shot(const std::string& sentence, std::size_t sentence_id) {
  require_sentence(sentence);
  const auto start = Clock::now();
  TranslationRecord rec;
  rec.sentence_id = sentence_id;
  rec.source = sentence;
  rec.mode = TranslationMode::ZeroShot;
  auto prompt = render_translate_prompt(langs_.tgt, langs_.src, sentence, {}, *res_.prompts);
  rec.merge_prompt_digest = sha256_hex(prompt);
  rec.raw_output = call(prompt, config_.translate_max_tokens, rec.llm_calls);
  rec.final = truncate_repeating_bigrams(rec.raw_output);
  rec.wall_time_ms = elapsed_ms(start);
  return rec;
}

TranslationRecord Pipeline::translate_few_shot(const std::string& sentence, std::size_t sentence_id) {
  require_sentence(sentence);
  const auto start = Clock::now();
  TranslationRecord rec;
  rec.sentence_id = sentence_id;
  rec.source = sentence;
  rec.mode = TranslationMode::FewShot;
  rec.demos = retrieve(sentence);
  rec.k_effective = rec.demos.size();
  if (rec.demos.empty()) rec.fallbacks.push_back(kZeroShotFallback);
  auto prompt =
      render_translate_prompt(langs_.tgt, langs_.src, sentence, to_demonstrations(rec.demos), *res_.prompts);
  rec.merge_prompt_digest = sha256_hex(prompt);
  rec.raw_output = call(prompt, config_.translate_max_tokens, rec.llm_calls);
  rec.final = truncate_repeating_bigrams(rec.raw_output);
  rec.wall_time_ms = elapsed_ms(start);
  return rec;
}

TranslationRecord Pipeline::translate_comptra(const std::string& sentence, std::size_t sentence_id) {
  require_sentence(sentence);
  const auto start = Clock::now();
  TranslationRecord rec;
  rec.sentence_id = sentence_id;
  rec.source = sentence;
  rec.mode = TranslationMode::CompTra;

  DecomposeContext ctx;
  ctx.llm = res_.llm;
  ctx.trees = res_.trees;
  ctx.stopwords = res_.stopwords;
  ctx.prompts = res_.prompts;
  ctx.sentence_id = sentence_id;
  ctx.max_new_tokens = config_.translate_max_tokens;
  auto decomposition = gated([&] { return decompose(sentence, config_.strategy, ctx); });
  rec.llm_calls += decomposition.llm_calls;
  rec.fallbacks = decomposition.flags;
  const auto& phrases = decomposition.phrase_set.phrases;

  rec.per_phrase.resize(phrases.size());
  std::vector<std::size_t> phrase_calls(phrases.size(), 0);
  parallel_for(phrases.size(), config_.parallelism, [&](std::size_t i) {
    auto& trace = rec.per_phrase[i];
    trace.phrase = phrases[i];
    const bool use_demos = res_.phrase_translator == nullptr || res_.phrase_translator->uses_demonstrations();
    if (use_demos) trace.demos = retrieve(trace.phrase);
    auto demos = to_demonstrations(trace.demos);
    if (res_.phrase_translator == nullptr) {
      auto prompt = render_translate_prompt(langs_.tgt, langs_.src, trace.phrase, demos, *res_.prompts);
      trace.raw_translation = call(prompt, config_.translate_max_tokens, phrase_calls[i]);
    } else {
      trace.raw_translation = gated([&] { return res_.phrase_translator->translate(trace.phrase, demos); });
    }
  });
  for (auto c : phrase_calls) rec.llm_calls += c;

  std::vector<PhrasePair> pairs;
  pairs.reserve(phrases.size());
  for (const auto& t : rec.per_phrase) pairs.push_back({t.phrase, t.raw_translation});
  pairs = filter_phrase_pairs(std::move(pairs), langs_.tgt, res_.target_profile);

  std::vector<Demonstration> merge_demos;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    rec.per_phrase[i].cleaned = pairs[i];
    if (pairs[i].kept) merge_demos.push_back({pairs[i].phrase, pairs[i].translation});
  }
  rec.k_effective = merge_demos.size();

  std::string prompt;
  if (merge_demos.empty()) {
    rec.fallbacks.push_back(kZeroShotFallback);
    prompt = render_translate_prompt(langs_.tgt, langs_.src, sentence, {}, *res_.prompts);
  } else {
    prompt = render_merge_prompt(langs_.tgt, langs_.src, sentence, merge_demos, *res_.prompts);
  }
  rec.merge_prompt_digest = sha256_hex(prompt);
  rec.raw_output = call(prompt, config_.merge_max_tokens, rec.llm_calls);
  rec.final = truncate_repeating_bigrams(rec.raw_output);
  rec.phrase_set = std::move(decomposition.phrase_set);
  rec.wall_time_ms = elapsed_ms(start);
  return rec;
}

TranslationRecord Pipeline::translate_ensemble(const std::string& sentence, std::size_t sentence_id) {
  if (res_.scorer == nullptr) throw Error(ErrorKind::InvalidConfig, "ensemble mode needs a quality scorer");
  const auto start = Clock::now();
  auto few = translate_few_shot(sentence, sentence_id);
  auto rec = translate_comptra(sentence, sentence_id);
  rec.mode = TranslationMode::Ensemble;
  rec.candidates = {{"few_shot", few.final}, {"comptra", rec.final}};
  rec.ensemble = ensemble_select(rec.candidates, sentence, *res_.scorer);
  rec.llm_calls += few.llm_calls;
  for (const auto& f : few.fallbacks) rec.fallbacks.push_back("few_shot:" + f);
  if (rec.ensemble->chosen_index == 0) {
    rec.raw_output = few.raw_output;
    rec.final = few.final;
    rec.merge_prompt_digest = few.merge_prompt_digest;
  }
  rec.demos = few.demos;
  rec.wall_time_ms = elapsed_ms(start);
  return rec;
}

TranslationRecord Pipeline::translate(TranslationMode mode, const std::string& sentence,
                                      std::size_t sentence_id) {
  switch (mode) {
    case TranslationMode::ZeroShot: return translate_zero_shot(sentence, sentence_id);
    case TranslationMode::FewShot: return translate_few_shot(sentence, sentence_id);
    case TranslationMode::CompTra: return translate_comptra(sentence, sentence_id);
    case TranslationMode::Ensemble: return translate_ensemble(sentence, sentence_id);
  }
  return translate_zero_shot(sentence, sentence_id);
}

RunSummary run_corpus(const ParallelCorpus& eval, Pipeline& pipeline, TranslationMode mode,
                      const std::string& output_path) {
  const auto start = Clock::now();
  std::ofstream out(output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::MissingFile, output_path);

  RunSummary summary;
  summary.n = eval.size();
  std::vector<std::optional<TranslationRecord>> done(eval.size());
  std::size_t next_to_write = 0;
  std::mutex mutex;

  parallel_for(eval.size(), pipeline.config().parallelism, [&](std::size_t i) {
    const auto& pair = eval[i];
    TranslationRecord rec;
    const auto t0 = Clock::now();
    try {
      rec = pipeline.translate(mode, pair.source, pair.id);
    } catch (const std::exception& e) {
      rec = {};
      rec.sentence_id = pair.id;
      rec.source = pair.source;
      rec.mode = mode;
      rec.error = e.what();
      rec.wall_time_ms = elapsed_ms(t0);
    }
    // Records are written in corpus order as soon as their prefix is complete.
    std::lock_guard lock(mutex);
    done[i] = std::move(rec);
    while (next_to_write < done.size() && done[next_to_write]) {
      const auto& r = *done[next_to_write];
      out << to_json_line(r) << '\n';
      out.flush();
      if (!r.fallbacks.empty()) ++summary.n_fallbacks;
      if (r.error) ++summary.n_errors;
      summary.total_llm_calls += r.llm_calls;
      done[next_to_write].reset();
      ++next_to_write;
    }
  });
  summary.wall_time_ms = elapsed_ms(start);
  return summary;
}

}  // namespace comptra
