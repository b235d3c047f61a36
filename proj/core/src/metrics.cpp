#include "comptra/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "comptra/error.hpp"
#include "comptra/text.hpp"

namespace comptra {

MetricKind metric_kind_from_string(const std::string& name) {
  if (name == "bleu") return MetricKind::Bleu;
  if (name == "chrfpp" || name == "chrf++") return MetricKind::ChrfPP;
  throw Error(ErrorKind::InvalidConfig, "unknown metric '" + name + "'");
}

std::string_view to_string(MetricKind kind) { return kind == MetricKind::Bleu ? "bleu" : "chrfpp"; }

void MetricConfig::validate() const {
  if (chrf.char_n < 1) throw Error(ErrorKind::InvalidConfig, "char_n must be >= 1");
  if (chrf.word_n < 0) throw Error(ErrorKind::InvalidConfig, "word_n must be >= 0");
  if (!(chrf.beta > 0)) throw Error(ErrorKind::InvalidConfig, "beta must be positive");
  if (bleu.max_n < 1) throw Error(ErrorKind::InvalidConfig, "max_n must be >= 1");
}

namespace {

void check_lengths(std::size_t hyps, std::size_t refs) {
  if (hyps != refs)
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(hyps) + " hypotheses vs " + std::to_string(refs) + " references");
  if (hyps == 0) throw Error(ErrorKind::LengthMismatch, "empty corpus");
}

// n-gram keys are the tokens joined with a separator that cannot occur inside a token.
using Counts = std::unordered_map<std::string, std::int64_t>;

Counts word_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  Counts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t j = 1; j < n; ++j) {
      key += ' ';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

Counts char_ngrams(const std::u32string& chars, std::size_t n) {
  Counts counts;
  if (chars.size() < n) return counts;
  for (std::size_t i = 0; i + n <= chars.size(); ++i)
    ++counts[text::encode(std::u32string_view(chars).substr(i, n))];
  return counts;
}

// {hyp total (0 when the reference has none), ref total, clipped matches}
void match_stats(const Counts& hyp, const Counts& ref, SufficientStats& out) {
  std::int64_t hyp_total = 0, ref_total = 0, matches = 0;
  for (const auto& [ng, c] : hyp) {
    hyp_total += c;
    auto it = ref.find(ng);
    if (it != ref.end()) matches += std::min(c, it->second);
  }
  for (const auto& [ng, c] : ref) ref_total += c;
  out.push_back(ref.empty() ? 0 : hyp_total);
  out.push_back(ref_total);
  out.push_back(matches);
}

std::vector<std::string> bleu_tokens(const std::string& s, BleuTokenizer tok) {
  return tok == BleuTokenizer::External ? text::split_whitespace(s) : text::tokenize_words(s, false);
}

bool is_ascii_punct(char32_t c) {
  static constexpr std::u32string_view kPuncts = U"!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
  return kPuncts.find(c) != std::u32string_view::npos;
}

// Splits one punctuation mark off the end (or else the start) of each word.
std::vector<std::string> chrf_words(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& w : text::split_whitespace(s)) {
    auto cps = text::decode(w);
    if (cps.size() == 1) {
      out.push_back(w);
    } else if (is_ascii_punct(cps.back())) {
      out.push_back(text::encode(std::u32string_view(cps).substr(0, cps.size() - 1)));
      out.push_back(text::encode(std::u32string_view(cps).substr(cps.size() - 1)));
    } else if (is_ascii_punct(cps.front())) {
      out.push_back(text::encode(std::u32string_view(cps).substr(0, 1)));
      out.push_back(text::encode(std::u32string_view(cps).substr(1)));
    } else {
      out.push_back(w);
    }
  }
  return out;
}

std::u32string without_whitespace(const std::string& s) {
  std::u32string out;
  for (char32_t cp : text::decode(s))
    if (!text::is_whitespace(cp)) out.push_back(cp);
  return out;
}

double safe_log(double x) { return x == 0.0 ? -9999999999.0 : std::log(x); }

}  // namespace

SufficientStats bleu_sentence_stats(const std::string& hyp, const std::string& ref, const BleuConfig& cfg) {
  const auto h = bleu_tokens(hyp, cfg.tokenizer);
  const auto r = bleu_tokens(ref, cfg.tokenizer);
  const auto max_n = static_cast<std::size_t>(cfg.max_n);
  // [sys_len, ref_len, correct_1..N, total_1..N]
  SufficientStats stats(2 + 2 * max_n, 0);
  stats[0] = static_cast<std::int64_t>(h.size());
  stats[1] = static_cast<std::int64_t>(r.size());
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto hc = word_ngrams(h, n);
    auto rc = word_ngrams(r, n);
    for (const auto& [ng, c] : hc) {
      stats[2 + max_n + n - 1] += c;
      auto it = rc.find(ng);
      if (it != rc.end()) stats[2 + n - 1] += std::min(c, it->second);
    }
  }
  return stats;
}

BleuScore bleu_from_stats(const SufficientStats& stats, const BleuConfig& cfg) {
  const auto max_n = static_cast<std::size_t>(cfg.max_n);
  BleuScore out;
  out.sys_len = static_cast<std::size_t>(stats[0]);
  out.ref_len = static_cast<std::size_t>(stats[1]);
  out.precisions.assign(max_n, 0.0);
  if (out.sys_len < out.ref_len)
    out.brevity_penalty = out.sys_len > 0 ? std::exp(1.0 - static_cast<double>(out.ref_len) /
                                                               static_cast<double>(out.sys_len))
                                          : 0.0;
  bool any_match = false;
  for (std::size_t n = 0; n < max_n; ++n) any_match = any_match || stats[2 + n] > 0;
  if (!any_match) return out;

  // Exponential ("NIST") smoothing: the k-th order with no matches gets
  // precision 1 / (2^k * total_n).
  double smooth = 1.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    const auto correct = stats[2 + n];
    const auto total = stats[2 + max_n + n];
    if (total == 0) break;
    if (correct == 0) {
      smooth *= 2.0;
      out.precisions[n] = 100.0 / (smooth * static_cast<double>(total));
    } else {
      out.precisions[n] = 100.0 * static_cast<double>(correct) / static_cast<double>(total);
    }
  }
  double log_sum = 0.0;
  for (double p : out.precisions) log_sum += safe_log(p);
  out.score = out.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
  return out;
}

namespace {

SufficientStats sum_stats(const std::vector<SufficientStats>& per_sentence) {
  SufficientStats total(per_sentence.front().size(), 0);
  for (const auto& s : per_sentence)
    for (std::size_t i = 0; i < s.size(); ++i) total[i] += s[i];
  return total;
}

}  // namespace

BleuScore bleu_corpus_detail(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                             const BleuConfig& cfg) {
  check_lengths(hyps.size(), refs.size());
  std::vector<SufficientStats> stats;
  stats.reserve(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) stats.push_back(bleu_sentence_stats(hyps[i], refs[i], cfg));
  return bleu_from_stats(sum_stats(stats), cfg);
}

double bleu_corpus(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                   const BleuConfig& cfg) {
  return bleu_corpus_detail(hyps, refs, cfg).score;
}

SufficientStats chrf_sentence_stats(const std::string& hyp, const std::string& ref, const ChrfConfig& cfg) {
  SufficientStats stats;
  stats.reserve(3 * static_cast<std::size_t>(cfg.char_n + cfg.word_n));
  const auto hc = without_whitespace(hyp);
  const auto rc = without_whitespace(ref);
  for (int n = 1; n <= cfg.char_n; ++n)
    match_stats(char_ngrams(hc, static_cast<std::size_t>(n)), char_ngrams(rc, static_cast<std::size_t>(n)),
                stats);
  if (cfg.word_n > 0) {
    const auto hw = chrf_words(hyp);
    const auto rw = chrf_words(ref);
    for (int n = 1; n <= cfg.word_n; ++n)
      match_stats(word_ngrams(hw, static_cast<std::size_t>(n)), word_ngrams(rw, static_cast<std::size_t>(n)),
                  stats);
  }
  return stats;
}

double chrf_from_stats(const SufficientStats& stats, const ChrfConfig& cfg) {
  const double factor = cfg.beta * cfg.beta;
  const auto orders = static_cast<std::size_t>(cfg.char_n + cfg.word_n);
  double avg_prec = 0.0, avg_rec = 0.0;
  std::size_t effective = 0;
  for (std::size_t i = 0; i < orders; ++i) {
    const auto n_hyp = stats[3 * i];
    const auto n_ref = stats[3 * i + 1];
    const auto n_match = stats[3 * i + 2];
    // Orders where either side has no n-grams are left out of the average.
    if (n_hyp > 0 && n_ref > 0) {
      avg_prec += static_cast<double>(n_match) / static_cast<double>(n_hyp);
      avg_rec += static_cast<double>(n_match) / static_cast<double>(n_ref);
      ++effective;
    }
  }
  if (effective == 0) return 0.0;
  avg_prec /= static_cast<double>(effective);
  avg_rec /= static_cast<double>(effective);
  if (avg_prec + avg_rec == 0.0) return 0.0;
  return 100.0 * (1.0 + factor) * avg_prec * avg_rec / (factor * avg_prec + avg_rec);
}

double chrfpp_corpus(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                     const ChrfConfig& cfg) {
  check_lengths(hyps.size(), refs.size());
  std::vector<SufficientStats> stats;
  stats.reserve(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) stats.push_back(chrf_sentence_stats(hyps[i], refs[i], cfg));
  return chrf_from_stats(sum_stats(stats), cfg);
}

double corpus_score(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                    const MetricConfig& cfg) {
  cfg.validate();
  return cfg.metric == MetricKind::Bleu ? bleu_corpus(hyps, refs, cfg.bleu) : chrfpp_corpus(hyps, refs, cfg.chrf);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // Reject the low values that would bias the modulo.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    auto r = next();
    if (r >= threshold) return r % bound;
  }
}

SignificanceResult paired_bootstrap_stats(const std::vector<SufficientStats>& stats_a,
                                          const std::vector<SufficientStats>& stats_b,
                                          const std::function<double(const SufficientStats&)>& aggregate,
                                          const BootstrapOptions& opts) {
  check_lengths(stats_a.size(), stats_b.size());
  if (opts.n_samples == 0 || opts.sample_size == 0)
    throw Error(ErrorKind::InvalidConfig, "bootstrap needs n_samples >= 1 and sample_size >= 1");

  SignificanceResult result;
  result.n_samples = opts.n_samples;
  result.score_a = aggregate(sum_stats(stats_a));
  result.score_b = aggregate(sum_stats(stats_b));

  const std::size_t width = stats_a.front().size();
  const auto n = static_cast<std::uint64_t>(stats_a.size());
  SufficientStats sa(width), sb(width);
  for (std::size_t s = 0; s < opts.n_samples; ++s) {
    SplitMix64 rng(opts.seed + s);
    std::fill(sa.begin(), sa.end(), 0);
    std::fill(sb.begin(), sb.end(), 0);
    for (std::size_t j = 0; j < opts.sample_size; ++j) {
      const auto idx = static_cast<std::size_t>(rng.below(n));
      for (std::size_t c = 0; c < width; ++c) {
        sa[c] += stats_a[idx][c];
        sb[c] += stats_b[idx][c];
      }
    }
    const double a = aggregate(sa);
    const double b = aggregate(sb);
    if (a > b)
      ++result.wins_a;
    else if (b > a)
      ++result.wins_b;
    else
      ++result.ties;
  }
  result.p_value = 1.0 - static_cast<double>(result.wins_a) / static_cast<double>(opts.n_samples);
  result.significant = result.p_value < opts.alpha;
  return result;
}

SignificanceResult paired_bootstrap(const std::vector<std::string>& hyps_a,
                                    const std::vector<std::string>& hyps_b,
                                    const std::vector<std::string>& refs, const MetricConfig& metric,
                                    const BootstrapOptions& opts) {
  metric.validate();
  check_lengths(hyps_a.size(), refs.size());
  check_lengths(hyps_b.size(), refs.size());
  std::vector<SufficientStats> a, b;
  a.reserve(refs.size());
  b.reserve(refs.size());
  std::function<double(const SufficientStats&)> aggregate;
  if (metric.metric == MetricKind::Bleu) {
    for (std::size_t i = 0; i < refs.size(); ++i) {
      a.push_back(bleu_sentence_stats(hyps_a[i], refs[i], metric.bleu));
      b.push_back(bleu_sentence_stats(hyps_b[i], refs[i], metric.bleu));
    }
    aggregate = [cfg = metric.bleu](const SufficientStats& s) { return bleu_from_stats(s, cfg).score; };
  } else {
    for (std::size_t i = 0; i < refs.size(); ++i) {
      a.push_back(chrf_sentence_stats(hyps_a[i], refs[i], metric.chrf));
      b.push_back(chrf_sentence_stats(hyps_b[i], refs[i], metric.chrf));
    }
    aggregate = [cfg = metric.chrf](const SufficientStats& s) { return chrf_from_stats(s, cfg); };
  }
  return paired_bootstrap_stats(a, b, aggregate, opts);
}

}  // namespace comptra
