#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "comptra/error.hpp"
#include "comptra/metrics.hpp"
#include "metric_fixture.hpp"
#include "oracles.hpp"

namespace comptra {
namespace {

TEST(Bleu, IdenticalCorpusScoresHundred) {
  std::vector<std::string> c = {"the cat sat on the mat", "a dog ran in the park today"};
  EXPECT_NEAR(bleu_corpus(c, c), 100.0, 1e-9);
}

TEST(Bleu, BrevityPenaltyByHand) {
  auto d = bleu_corpus_detail({"a b"}, {"a b c d"});
  EXPECT_NEAR(d.brevity_penalty, std::exp(1.0 - 4.0 / 2.0), 1e-12);
  EXPECT_EQ(d.sys_len, 2u);
  EXPECT_EQ(d.ref_len, 4u);
  // p1 = 2/2, p2 = 1/1; orders 3 and 4 have no hypothesis n-grams.
  EXPECT_NEAR(d.precisions[0], 100.0, 1e-9);
  EXPECT_NEAR(d.precisions[1], 100.0, 1e-9);
}

TEST(Bleu, ExpSmoothingByHand) {
  // One unigram match out of four; higher orders have none.
  // Smoothed precisions: 1/4, then 1/(2*3), 1/(4*2), 1/(8*1).
  auto d = bleu_corpus_detail({"a x y z"}, {"a b c d"});
  const double expected = std::exp((std::log(1.0 / 4) + std::log(1.0 / 6) + std::log(1.0 / 8) + std::log(1.0 / 8)) / 4) * 100;
  EXPECT_NEAR(d.score, expected, 1e-9);
  EXPECT_NEAR(d.precisions[1], 100.0 / 6, 1e-9);
}

TEST(Bleu, NoMatchesScoresZero) {
  EXPECT_EQ(bleu_corpus({"a b c d"}, {"w x y z"}), 0.0);
  EXPECT_EQ(bleu_corpus({""}, {"w x"}), 0.0);
}

TEST(Bleu, TokenizersDiffer) {
  BleuConfig ext;
  ext.tokenizer = BleuTokenizer::External;
  EXPECT_NEAR(bleu_corpus({"Hello, big wide world!"}, {"Hello big wide world"}), 100.0, 1e-9);
  EXPECT_LT(bleu_corpus({"Hello, big wide world!"}, {"Hello big wide world"}, ext), 100.0);
  EXPECT_LT(bleu_corpus({"hello big wide world"}, {"Hello big wide World"}), 100.0);
  EXPECT_EQ(bleu_corpus({"Hello world"}, {"Hello world"}), 0.0);
}

TEST(Bleu, LengthMismatch) {
  try {
    bleu_corpus({"a"}, {"a", "b"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
  EXPECT_THROW(bleu_corpus({}, {}), Error);
}

TEST(Chrf, Examples) {
  std::vector<std::string> c = {"the cat sat", "ሰላም ዓለም"};
  EXPECT_NEAR(chrfpp_corpus(c, c), 100.0, 1e-9);
  EXPECT_EQ(chrfpp_corpus({""}, {"abc"}), 0.0);
  EXPECT_THROW(chrfpp_corpus({"a"}, {}), Error);
}

TEST(Chrf, SacrebleuParityOnFixture) {
  auto f = oracle::metric_fixture();
  ASSERT_EQ(f.hyps.size(), 50u);
  EXPECT_NEAR(chrfpp_corpus(f.hyps, f.refs), f.expected["chrfpp_corpus"].get<double>(), 0.01);
  for (const auto& s : f.expected["sentences"]) {
    const auto i = s["index"].get<std::size_t>();
    EXPECT_NEAR(chrfpp_corpus({f.hyps[i]}, {f.refs[i]}), s["chrfpp"].get<double>(), 0.01) << "sentence " << i;
  }
}

TEST(Bleu, SacrebleuParityOnFixture) {
  auto f = oracle::metric_fixture();
  EXPECT_NEAR(bleu_corpus(f.hyps, f.refs), f.expected["bleu_corpus"].get<double>(), 0.01);
  for (const auto& s : f.expected["sentences"]) {
    const auto i = s["index"].get<std::size_t>();
    EXPECT_NEAR(bleu_corpus({f.hyps[i]}, {f.refs[i]}), s["bleu"].get<double>(), 0.01) << "sentence " << i;
  }
}

TEST(Metrics, PermutationInvarianceAndMonotonicity) {
  auto f = oracle::metric_fixture();
  std::mt19937_64 rng(41);
  MetricConfig bleu{MetricKind::Bleu, {}, {}};
  MetricConfig chrf{MetricKind::ChrfPP, {}, {}};
  for (const auto* cfg : {&bleu, &chrf}) {
    const double base = corpus_score(f.hyps, f.refs, *cfg);
    std::vector<std::size_t> perm(f.hyps.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> h, r;
    for (auto i : perm) h.push_back(f.hyps[i]), r.push_back(f.refs[i]);
    EXPECT_NEAR(corpus_score(h, r, *cfg), base, 1e-9);
    for (std::size_t i = 0; i < f.hyps.size(); i += 7) {
      auto fixed = f.hyps;
      fixed[i] = f.refs[i];
      EXPECT_GE(corpus_score(fixed, f.refs, *cfg), base - 1e-9);
    }
  }
}

TEST(MetricConfig, Validation) {
  MetricConfig m;
  EXPECT_NO_THROW(m.validate());
  m.chrf.char_n = 0;
  EXPECT_THROW(m.validate(), Error);
  m = MetricConfig{};
  m.chrf.beta = 0;
  EXPECT_THROW(m.validate(), Error);
  m = MetricConfig{};
  m.chrf.word_n = -1;
  EXPECT_THROW(m.validate(), Error);
  EXPECT_EQ(metric_kind_from_string("chrfpp"), MetricKind::ChrfPP);
  EXPECT_EQ(metric_kind_from_string("bleu"), MetricKind::Bleu);
  EXPECT_THROW(metric_kind_from_string("comet"), Error);
}

TEST(SplitMix64, ReferenceSequence) {
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(g.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(g.next(), 0x06c45d188009454fULL);
  SplitMix64 b(99);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(b.below(7), 7u);
}

std::vector<std::string> garbage_like(const std::vector<std::string>& refs) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < refs.size(); ++i) out.push_back("zzq" + std::to_string(i) + " qqz");
  return out;
}

TEST(Bootstrap, IdenticalSystems) {
  auto f = oracle::metric_fixture();
  auto r = paired_bootstrap(f.hyps, f.hyps, f.refs, MetricConfig{});
  EXPECT_EQ(r.wins_a, 0u);
  EXPECT_EQ(r.ties, 300u);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_FALSE(r.significant);
}

TEST(Bootstrap, DominatingSystem) {
  auto f = oracle::metric_fixture();
  auto r = paired_bootstrap(f.refs, garbage_like(f.refs), f.refs, MetricConfig{});
  EXPECT_EQ(r.wins_a, 300u);
  EXPECT_EQ(r.p_value, 0.0);
  EXPECT_TRUE(r.significant);
  EXPECT_NEAR(r.score_a, 100.0, 1e-9);
}

TEST(Bootstrap, SeededDeterminismAndSymmetry) {
  auto f = oracle::metric_fixture();
  auto noisy = f.hyps;
  for (std::size_t i = 0; i < noisy.size(); i += 3) noisy[i] = f.refs[i];
  BootstrapOptions opts;
  opts.n_samples = 100;
  opts.sample_size = 60;
  opts.seed = 5;
  for (auto kind : {MetricKind::ChrfPP, MetricKind::Bleu}) {
    MetricConfig cfg;
    cfg.metric = kind;
    auto a = paired_bootstrap(noisy, f.hyps, f.refs, cfg, opts);
    auto b = paired_bootstrap(noisy, f.hyps, f.refs, cfg, opts);
    EXPECT_EQ(a, b);
    auto swapped = paired_bootstrap(f.hyps, noisy, f.refs, cfg, opts);
    EXPECT_EQ(a.wins_a, swapped.wins_b);
    EXPECT_EQ(a.wins_b, swapped.wins_a);
    EXPECT_EQ(a.wins_a + a.wins_b + a.ties, a.n_samples);
    EXPECT_GE(a.p_value, 0.0);
    EXPECT_LE(a.p_value, 1.0);
    EXPECT_EQ(a.significant, a.p_value < opts.alpha);
  }
}

TEST(Bootstrap, LengthMismatch) {
  EXPECT_THROW(paired_bootstrap({"a"}, {"a", "b"}, {"a"}, MetricConfig{}), Error);
}

TEST(Bootstrap, StatsAggregateIsGeneric) {
  std::vector<SufficientStats> a = {{1}, {1}, {1}}, b = {{0}, {0}, {2}};
  auto sum = [](const SufficientStats& s) { return static_cast<double>(s[0]); };
  BootstrapOptions opts;
  opts.n_samples = 50;
  opts.sample_size = 3;
  auto r = paired_bootstrap_stats(a, b, sum, opts);
  EXPECT_EQ(r.score_a, 3.0);
  EXPECT_EQ(r.score_b, 2.0);
  EXPECT_EQ(r.wins_a + r.wins_b + r.ties, 50u);
}

}  // namespace
}  // namespace comptra
