#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "comptra/language.hpp"

namespace comptra {

struct Demonstration {
  std::string source;
  std::string target;
};

enum class PromptKind { ZeroShot, FewShot, Divide, Paraphrase, Merge };

enum class DivideMode { Propositions, Paraphrase };

/// The five prompt templates. Placeholders: {src}, {tgt}, {sentence} and,
/// for the few-shot/merge templates, {demonstrations}.
struct PromptSet {
  std::string zero_shot;
  std::string few_shot;
  std::string divide;
  std::string paraphrase;
  std::string merge;

  static const PromptSet& builtin();
  /// Starts from the built-in set and replaces every template that has a
  /// same-named .txt file in `dir` (zero_shot.txt, few_shot.txt, ...).
  static PromptSet from_directory(const std::string& dir);

  const std::string& get(PromptKind kind) const;
};

/// Replaces {name} placeholders in a single left-to-right pass; text
/// substituted in is never rescanned.
std::string fill_template(std::string_view tmpl,
                          const std::vector<std::pair<std::string, std::string>>& values);

/// Demonstrations as numbered blocks, separated by blank lines.
std::string render_demonstrations(const LanguageTag& src, const LanguageTag& tgt,
                                  const std::vector<Demonstration>& demos);

/// Zero-shot when `demos` is empty, few-shot otherwise.
std::string render_translate_prompt(const LanguageTag& tgt, const LanguageTag& src,
                                    const std::string& sentence,
                                    const std::vector<Demonstration>& demos,
                                    const PromptSet& prompts = PromptSet::builtin());

/// Same layout as the few-shot translate prompt, with phrase/translation
/// pairs as the demonstrations.
std::string render_merge_prompt(const LanguageTag& tgt, const LanguageTag& src,
                                const std::string& sentence,
                                const std::vector<Demonstration>& pairs,
                                const PromptSet& prompts = PromptSet::builtin());

std::string render_divide_prompt(const std::string& sentence, DivideMode mode,
                                 const PromptSet& prompts = PromptSet::builtin());

inline constexpr std::size_t kDefaultPhraseCap = 16;

/// Extracts the items of the first numbered list ("1. text" or "1) text").
/// Throws Error(NoPropositionsFound) when no item is found.
std::vector<std::string> parse_propositions(std::string_view llm_output,
                                            std::size_t cap = kDefaultPhraseCap);

}  // namespace comptra
