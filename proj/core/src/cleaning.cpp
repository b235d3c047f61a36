#include "comptra/cleaning.hpp"

#include <map>
#include <set>
#include <unicode/uscript.h>

#include "comptra/text.hpp"

namespace comptra {

std::string truncate_repeating_bigrams(std::string_view text, int threshold) {
  auto tokens = text::split_whitespace(text);
  bool changed = false;
  for (;;) {
    // bigram -> (count, first position)
    std::map<std::pair<std::string_view, std::string_view>, std::pair<int, std::size_t>> seen;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      auto [it, inserted] = seen.try_emplace({tokens[i], tokens[i + 1]}, 0, i);
      ++it->second.first;
    }
    std::size_t cut = tokens.size();
    for (const auto& [bigram, stat] : seen)
      if (stat.first > threshold && stat.second < cut) cut = stat.second;
    if (cut == tokens.size()) break;
    tokens.resize(cut + 2);
    changed = true;
  }
  if (!changed) return std::string(text);
  return text::join(tokens, " ");
}

namespace {

Script classify(char32_t cp) {
  UErrorCode err = U_ZERO_ERROR;
  UScriptCode code = uscript_getScript(static_cast<UChar32>(cp), &err);
  if (U_FAILURE(err)) return Script::Other;
  switch (code) {
    case USCRIPT_LATIN: return Script::Latin;
    case USCRIPT_ETHIOPIC: return Script::Ethiopic;
    case USCRIPT_MYANMAR: return Script::Myanmar;
    case USCRIPT_KHMER: return Script::Khmer;
    case USCRIPT_LAO: return Script::Lao;
    case USCRIPT_SINHALA: return Script::Sinhala;
    case USCRIPT_ARABIC: return Script::Arabic;
    case USCRIPT_CYRILLIC: return Script::Cyrillic;
    case USCRIPT_HAN:
    case USCRIPT_HIRAGANA:
    case USCRIPT_KATAKANA: return Script::Han;
    default: return Script::Other;
  }
}

}  // namespace

Script identify_script(std::string_view s) {
  std::map<Script, std::size_t> counts;
  std::size_t letters = 0;
  for (char32_t cp : text::decode(s)) {
    if (!text::is_letter(cp)) continue;
    ++letters;
    ++counts[classify(cp)];
  }
  if (letters == 0) return Script::Other;
  Script best = Script::Other;
  std::size_t best_count = 0;
  bool tie = false;
  for (const auto& [script, n] : counts) {
    if (n > best_count) {
      best = script;
      best_count = n;
      tie = false;
    } else if (n == best_count) {
      tie = true;
    }
  }
  // An exact 50/50 split has no majority.
  if (tie || 2 * best_count < letters) return Script::Other;
  return best;
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::None: return "none";
    case DropReason::WrongLanguage: return "wrong_language";
    case DropReason::EmptyAfterClean: return "empty_after_clean";
    case DropReason::Duplicate: return "duplicate";
  }
  return "none";
}

std::vector<PhrasePair> filter_phrase_pairs(std::vector<PhrasePair> pairs, const LanguageTag& /*tgt*/,
                                            const ScriptProfile& profile) {
  std::set<std::pair<std::string, std::string>> kept;
  for (auto& pair : pairs) {
    pair.translation = text::trim(truncate_repeating_bigrams(pair.translation));
    pair.kept = false;
    if (pair.translation.empty()) {
      pair.drop_reason = DropReason::EmptyAfterClean;
    } else if (profile.supported() && !profile.expected_scripts.contains(identify_script(pair.translation))) {
      pair.drop_reason = DropReason::WrongLanguage;
    } else if (!kept.insert({pair.phrase, pair.translation}).second) {
      pair.drop_reason = DropReason::Duplicate;
    } else {
      pair.drop_reason = DropReason::None;
      pair.kept = true;
    }
  }
  return pairs;
}

}  // namespace comptra
