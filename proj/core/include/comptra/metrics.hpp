#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace comptra {

enum class MetricKind { Bleu, ChrfPP };

MetricKind metric_kind_from_string(const std::string& name);
std::string_view to_string(MetricKind kind);

enum class BleuTokenizer {
  /// Whitespace split with edge punctuation stripped, case kept.
  WhitespacePunct,
  /// Input lines are already tokenized by an external tool; split on whitespace only.
  External,
};

struct BleuConfig {
  int max_n = 4;
  BleuTokenizer tokenizer = BleuTokenizer::WhitespacePunct;
};

struct ChrfConfig {
  int char_n = 6;
  int word_n = 2;
  double beta = 2.0;
};

struct MetricConfig {
  MetricKind metric = MetricKind::ChrfPP;
  BleuConfig bleu;
  ChrfConfig chrf;

  void validate() const;
};

/// Corpus-level BLEU with its components.
struct BleuScore {
  double score = 0.0;
  double brevity_penalty = 1.0;
  std::vector<double> precisions;  // percentages, smoothed
  std::size_t sys_len = 0;
  std::size_t ref_len = 0;
};

/// Additive per-sentence counts; corpus scores are computed from their sum.
using SufficientStats = std::vector<std::int64_t>;

SufficientStats bleu_sentence_stats(const std::string& hyp, const std::string& ref,
                                    const BleuConfig& cfg = {});
BleuScore bleu_from_stats(const SufficientStats& stats, const BleuConfig& cfg = {});
BleuScore bleu_corpus_detail(const std::vector<std::string>& hyps,
                             const std::vector<std::string>& refs, const BleuConfig& cfg = {});
/// BLEU in [0, 100] with exponential smoothing. Throws Error(LengthMismatch).
double bleu_corpus(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                   const BleuConfig& cfg = {});

SufficientStats chrf_sentence_stats(const std::string& hyp, const std::string& ref,
                                    const ChrfConfig& cfg = {});
double chrf_from_stats(const SufficientStats& stats, const ChrfConfig& cfg = {});
/// chrF++ in [0, 100]. Throws Error(LengthMismatch).
double chrfpp_corpus(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                     const ChrfConfig& cfg = {});

double corpus_score(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                    const MetricConfig& cfg);

/// splitmix64; the bootstrap's documented generator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, bound) by rejection sampling.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

struct SignificanceResult {
  double score_a = 0.0;
  double score_b = 0.0;
  std::size_t wins_a = 0;
  std::size_t wins_b = 0;
  std::size_t ties = 0;
  std::size_t n_samples = 0;
  double p_value = 1.0;
  bool significant = false;

  bool operator==(const SignificanceResult&) const = default;
};

struct BootstrapOptions {
  std::size_t n_samples = 300;
  std::size_t sample_size = 500;
  double alpha = 0.05;
  std::uint64_t seed = 13;
};

/// Generic paired bootstrap over per-sentence sufficient statistics. Sample
/// i draws `sample_size` indices with replacement from SplitMix64(seed + i);
/// A wins a sample when its aggregate is strictly greater. p = 1 - wins_a/n.
SignificanceResult paired_bootstrap_stats(
    const std::vector<SufficientStats>& stats_a, const std::vector<SufficientStats>& stats_b,
    const std::function<double(const SufficientStats&)>& aggregate, const BootstrapOptions& opts);

/// Tests "A is better than B" under a corpus metric. Throws Error(LengthMismatch).
SignificanceResult paired_bootstrap(const std::vector<std::string>& hyps_a,
                                    const std::vector<std::string>& hyps_b,
                                    const std::vector<std::string>& refs,
                                    const MetricConfig& metric, const BootstrapOptions& opts = {});

}  // namespace comptra
