#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "comptra/language.hpp"

namespace comptra {

inline constexpr int kDefaultBigramThreshold = 8;

/// Cuts degenerate repetition: while some bigram occurs more than
/// `threshold` times, keep the tokens up to and including the first
/// occurrence of the earliest such bigram. Input without such a bigram is
/// returned byte-for-byte.
std::string truncate_repeating_bigrams(std::string_view text, int threshold = kDefaultBigramThreshold);

/// Majority script among letter code points (at least half of them), or
/// Script::Other.
Script identify_script(std::string_view text);

enum class DropReason { None, WrongLanguage, EmptyAfterClean, Duplicate };

std::string_view to_string(DropReason reason);

struct PhrasePair {
  std::string phrase;
  std::string translation;
  bool kept = true;
  DropReason drop_reason = DropReason::None;
};

/// Cleans every translation and annotates the pairs that must not reach the
/// merge prompt. Order and phrase text are preserved; nothing is removed.
std::vector<PhrasePair> filter_phrase_pairs(std::vector<PhrasePair> pairs, const LanguageTag& tgt,
                                            const ScriptProfile& profile);

}  // namespace comptra
