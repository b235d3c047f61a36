#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "comptra/cleaning.hpp"
#include "comptra/corpus.hpp"
#include "comptra/decompose.hpp"
#include "comptra/llm_client.hpp"
#include "comptra/prompts.hpp"
#include "comptra/retrieval.hpp"

namespace comptra {

struct LanguagePair {
  LanguageTag src;
  LanguageTag tgt;
};

enum class TranslationMode { ZeroShot, FewShot, CompTra, Ensemble };

std::string_view to_string(TranslationMode mode);
TranslationMode translation_mode_from_string(const std::string& name);

enum class PhraseTranslatorKind { LlmFewShot, ExternalMt };

std::string_view to_string(PhraseTranslatorKind kind);
PhraseTranslatorKind phrase_translator_from_string(const std::string& name);

struct PipelineConfig {
  DecompositionStrategy strategy;
  RetrieverKind retriever = RetrieverKind::Bm25;
  int k = 5;
  int translate_max_tokens = 500;
  int merge_max_tokens = 2000;
  PhraseTranslatorKind phrase_translator = PhraseTranslatorKind::LlmFewShot;
  std::string external_mt_endpoint;
  int parallelism = 1;

  void validate() const;
};

/// Translates one phrase given its retrieved demonstrations.
class PhraseTranslator {
 public:
  virtual ~PhraseTranslator() = default;
  virtual std::string translate(const std::string& phrase, const std::vector<Demonstration>& demos) = 0;
  /// Whether translate() needs demonstrations at all.
  virtual bool uses_demonstrations() const { return true; }
};

/// POSTs {"text", "src", "tgt"} and reads {"translation"}.
std::unique_ptr<PhraseTranslator> make_external_mt_translator(std::string endpoint,
                                                              LanguagePair langs,
                                                              double timeout_s = 120.0,
                                                              int max_retries = 3);

/// Reference-free quality estimate of a translation.
class QualityScorer {
 public:
  virtual ~QualityScorer() = default;
  virtual double score(const std::string& source, const std::string& translation) = 0;
};

std::unique_ptr<QualityScorer> make_constant_scorer(double value);
/// Fraction of source tokens that also occur in the translation.
std::unique_ptr<QualityScorer> make_lexical_overlap_scorer();
/// POST {"source", "translation"} and read {"score"}.
std::unique_ptr<QualityScorer> make_http_scorer(std::string url, double timeout_s = 120.0);
std::unique_ptr<QualityScorer> make_function_scorer(
    std::function<double(const std::string&, const std::string&)> fn);

struct EnsembleCandidate {
  std::string name;
  std::string translation;
};

struct EnsembleChoice {
  std::size_t chosen_index = 0;
  std::string chosen_name;
  std::vector<double> scores;
};

/// Argmax of the scorer; the earliest candidate wins ties. Needs at least two
/// candidates. Scorer exceptions and NaN scores raise Error(ScorerFailure).
EnsembleChoice ensemble_select(const std::vector<EnsembleCandidate>& candidates,
                               const std::string& source, QualityScorer& scorer);

struct PhraseTrace {
  std::string phrase;
  std::vector<ScoredCandidate> demos;
  std::string raw_translation;
  PhrasePair cleaned;
};

/// Full trace of one sentence.
struct TranslationRecord {
  std::size_t sentence_id = 0;
  std::string source;
  TranslationMode mode = TranslationMode::ZeroShot;
  std::optional<PhraseSet> phrase_set;
  std::vector<PhraseTrace> per_phrase;
  /// Demonstrations of the few-shot prompt (few-shot mode).
  std::vector<ScoredCandidate> demos;
  std::size_t k_effective = 0;
  /// SHA-256 of the prompt of the final call (the merge prompt for CompTra).
  std::string merge_prompt_digest;
  std::string raw_output;
  std::string final;
  std::vector<std::string> fallbacks;
  std::size_t llm_calls = 0;
  std::vector<EnsembleCandidate> candidates;
  std::optional<EnsembleChoice> ensemble;
  std::optional<std::string> error;
  double wall_time_ms = 0.0;
};

/// One JSON object, no trailing newline. Keys in declaration order.
std::string to_json_line(const TranslationRecord& record);

/// Everything a translation run reads. Non-owning; referents must outlive it.
struct PipelineResources {
  const ParallelCorpus* pool = nullptr;
  const Retriever* retriever = nullptr;
  LlmClient* llm = nullptr;
  const PromptSet* prompts = nullptr;
  const StopWords* stopwords = nullptr;
  const std::map<std::size_t, DependencyTree>* trees = nullptr;
  ScriptProfile target_profile;
  /// Defaults to few-shot translation through `llm`.
  PhraseTranslator* phrase_translator = nullptr;
  /// Required for ensemble mode.
  QualityScorer* scorer = nullptr;
};

class Pipeline {
 public:
  Pipeline(LanguagePair langs, PipelineConfig config, PipelineResources resources);
  ~Pipeline();

  TranslationRecord translate_zero_shot(const std::string& sentence, std::size_t sentence_id = 0);
  TranslationRecord translate_few_shot(const std::string& sentence, std::size_t sentence_id = 0);
  TranslationRecord translate_comptra(const std::string& sentence, std::size_t sentence_id = 0);
  /// Few-shot and CompTra candidates, picked by the quality scorer.
  TranslationRecord translate_ensemble(const std::string& sentence, std::size_t sentence_id = 0);

  TranslationRecord translate(TranslationMode mode, const std::string& sentence,
                              std::size_t sentence_id = 0);

  /// Demonstrations for a query in prompt order (descending score).
  std::vector<ScoredCandidate> retrieve(const std::string& query) const;

  const LanguagePair& langs() const { return langs_; }
  const PipelineConfig& config() const { return config_; }

 private:
  std::string call(const std::string& prompt, int max_tokens, std::size_t& counter);
  template <typename F>
  auto gated(F&& fn);
  std::vector<Demonstration> to_demonstrations(const std::vector<ScoredCandidate>& ids) const;

  LanguagePair langs_;
  PipelineConfig config_;
  PipelineResources res_;
  std::unique_ptr<PhraseTranslator> default_translator_;
  /// Shared bound on in-flight backend work across sentences and phrases.
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

struct RunSummary {
  std::size_t n = 0;
  std::size_t n_fallbacks = 0;
  std::size_t n_errors = 0;
  std::size_t total_llm_calls = 0;
  double wall_time_ms = 0.0;
};

/// Translates every sentence of `eval` (up to config.parallelism at once) and
/// streams one JSON line per sentence, in corpus order, to `output_path`.
/// Sentence-level failures become records with an "error" field.
RunSummary run_corpus(const ParallelCorpus& eval, Pipeline& pipeline, TranslationMode mode,
                      const std::string& output_path);

/// Calls fn(i) for i in [0, n) on up to `workers` threads. Exceptions are
/// rethrown after all work finishes, lowest index first.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace comptra
