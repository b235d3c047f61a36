#include <gtest/gtest.h>

#include <map>
#include <random>

#include "comptra/cleaning.hpp"
#include "comptra/text.hpp"
#include "oracles.hpp"

namespace comptra {
namespace {

std::string repeat(const std::string& unit, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += unit;
  return out;
}

std::size_t max_bigram_count(const std::vector<std::string>& toks) {
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) best = std::max(best, ++counts[{toks[i], toks[i + 1]}]);
  return best;
}

TEST(Truncate, Examples) {
  EXPECT_EQ(truncate_repeating_bigrams(repeat("a b ", 10)), "a b");
  EXPECT_EQ(truncate_repeating_bigrams("the cat sat on the mat"), "the cat sat on the mat");
  const auto eight = repeat("x y ", 8);
  EXPECT_EQ(truncate_repeating_bigrams(eight), eight);
  EXPECT_EQ(truncate_repeating_bigrams("keep  spacing\n"), "keep  spacing\n");
  EXPECT_EQ(truncate_repeating_bigrams(""), "");
}

TEST(Truncate, EarliestFirstOccurrenceWins) {
  // (p q) repeats 9 times but (a b) repeats 9 times starting earlier.
  std::string s = "a b " + repeat("p q ", 9) + repeat("a b ", 8);
  EXPECT_EQ(truncate_repeating_bigrams(s), "a b");
  EXPECT_EQ(truncate_repeating_bigrams("intro " + repeat("p q ", 9) + "end"), "intro p q");
}

TEST(Truncate, ThresholdIsConfigurable) {
  EXPECT_EQ(truncate_repeating_bigrams("a b a b a b", 2), "a b");
  EXPECT_EQ(truncate_repeating_bigrams("a b a b", 2), "a b a b");
}

TEST(Truncate, PropertiesOverRandomSequences) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    auto toks = oracle::random_tokens(rng, rng() % 80, 1 + rng() % 4);
    const int threshold = 1 + static_cast<int>(rng() % 9);
    const auto input = oracle::join(toks);
    const auto out = truncate_repeating_bigrams(input, threshold);
    const auto out_toks = text::split_whitespace(out);
    ASSERT_LE(out_toks.size(), toks.size());
    EXPECT_TRUE(std::equal(out_toks.begin(), out_toks.end(), toks.begin()));
    EXPECT_EQ(truncate_repeating_bigrams(out, threshold), out);
    EXPECT_LE(max_bigram_count(out_toks), static_cast<std::size_t>(threshold));
  }
}

TEST(IdentifyScript, Examples) {
  EXPECT_EQ(identify_script("ሰላም"), Script::Ethiopic);
  EXPECT_EQ(identify_script("hello"), Script::Latin);
  EXPECT_EQ(identify_script("1234 …!"), Script::Other);
  EXPECT_EQ(identify_script(""), Script::Other);
  EXPECT_EQ(identify_script("ሰላም hi"), Script::Ethiopic);
  EXPECT_EQ(identify_script("ab ሰላ"), Script::Other);
  EXPECT_EQ(identify_script("မင်္ဂလာပါ"), Script::Myanmar);
  EXPECT_EQ(identify_script("Привет"), Script::Cyrillic);
  EXPECT_EQ(identify_script("ສະບາຍດີ"), Script::Lao);
  EXPECT_EQ(identify_script("ආයුබෝවන්"), Script::Sinhala);
  EXPECT_EQ(identify_script("សួស្តី"), Script::Khmer);
  EXPECT_EQ(identify_script("سلام"), Script::Arabic);
  EXPECT_EQ(identify_script("你好"), Script::Han);
  EXPECT_EQ(identify_script("αβγ"), Script::Other);
}

const LanguageTag kAmh = LanguageTag::from_code("amh_Ethi");
const ScriptProfile kEthiopic{{Script::Ethiopic}};

TEST(FilterPairs, WrongLanguageEmptyAndDuplicate) {
  auto out = filter_phrase_pairs({{"p1", "hello world"},
                                  {"p2", "ሰላም ዓለም"},
                                  {"p3", "   "},
                                  {"p2", "ሰላም ዓለም"},
                                  {"p4", "ሰላም ዓለም"}},
                                 kAmh, kEthiopic);
  ASSERT_EQ(out.size(), 5u);
  EXPECT_EQ(out[0].drop_reason, DropReason::WrongLanguage);
  EXPECT_TRUE(out[1].kept);
  EXPECT_EQ(out[2].drop_reason, DropReason::EmptyAfterClean);
  EXPECT_EQ(out[3].drop_reason, DropReason::Duplicate);
  EXPECT_TRUE(out[4].kept);
  for (const auto& p : out) EXPECT_EQ(p.kept, p.drop_reason == DropReason::None);
}

TEST(FilterPairs, UnsupportedProfileSkipsLanguageCheck) {
  auto out = filter_phrase_pairs({{"p", "hello world"}}, LanguageTag::from_code("fij_Latn"), ScriptProfile{});
  EXPECT_TRUE(out[0].kept);
}

TEST(FilterPairs, TranslationsAreBigramTruncated) {
  auto out = filter_phrase_pairs({{"p", repeat("ሰ ላ ", 12)}}, kAmh, kEthiopic);
  EXPECT_EQ(out[0].translation, "ሰ ላ");
  EXPECT_TRUE(out[0].kept);
}

TEST(FilterPairs, OrderAndPhrasesPreservedAndKeptAreInScript) {
  std::mt19937_64 rng(37);
  const std::vector<std::string> samples = {"hello", "ሰላም", "", "ሰላም hi", "hi ሰላ", "123"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PhrasePair> in;
    for (int i = 0; i < 6; ++i) in.push_back({"p" + std::to_string(rng() % 4), samples[rng() % samples.size()]});
    auto out = filter_phrase_pairs(in, kAmh, kEthiopic);
    ASSERT_EQ(out.size(), in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
      EXPECT_EQ(out[i].phrase, in[i].phrase);
      if (out[i].kept) {
        EXPECT_EQ(identify_script(out[i].translation), Script::Ethiopic);
      }
    }
  }
}

TEST(DropReason, Names) {
  EXPECT_EQ(to_string(DropReason::None), "none");
  EXPECT_EQ(to_string(DropReason::WrongLanguage), "wrong_language");
  EXPECT_EQ(to_string(DropReason::EmptyAfterClean), "empty_after_clean");
  EXPECT_EQ(to_string(DropReason::Duplicate), "duplicate");
}

}  // namespace
}  // namespace comptra
