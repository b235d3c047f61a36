#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "comptra/corpus.hpp"
#include "comptra/prompts.hpp"

namespace comptra {

class LlmClient;

struct DecompositionStrategy {
  enum class Kind { LlmPropositions, Words, Repeat, Paraphrase, Structure };

  Kind kind = Kind::LlmPropositions;
  int repeat_count = 4;

  bool calls_llm() const { return kind == Kind::LlmPropositions || kind == Kind::Paraphrase; }
};

std::string_view to_string(DecompositionStrategy::Kind kind);
DecompositionStrategy::Kind strategy_kind_from_string(const std::string& name);

struct PhraseSet {
  std::string original;
  std::vector<std::string> phrases;
  DecompositionStrategy strategy;
};

/// Decomposition output plus the audit trail the pipeline records.
struct Decomposition {
  PhraseSet phrase_set;
  std::vector<std::string> flags;
  std::size_t llm_calls = 0;
};

using StopWords = std::set<std::string, std::less<>>;

/// The embedded English list.
const StopWords& builtin_stopwords();
/// One lowercase token per line.
StopWords load_stopwords(const std::string& path);

struct DecomposeContext {
  LlmClient* llm = nullptr;
  const std::map<std::size_t, DependencyTree>* trees = nullptr;
  const StopWords* stopwords = nullptr;
  const PromptSet* prompts = nullptr;
  std::optional<std::size_t> sentence_id;
  int max_new_tokens = 500;
};

/// Never returns an empty phrase list: when the LLM output has no numbered
/// list the sentence itself becomes the only phrase and
/// "decomposition_fallback" is flagged. Throws Error(MissingTree) for the
/// structure strategy when no tree is bound to ctx.sentence_id.
Decomposition decompose(const std::string& sentence, const DecompositionStrategy& strategy,
                        const DecomposeContext& ctx);

/// Retrieval tokens minus stop words, first occurrence only. Falls back to
/// every (deduplicated) token when nothing else is left.
std::vector<std::string> content_words(std::string_view sentence, const StopWords& stopwords);

/// Half-open token range [begin, end) of a tree.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  /// Longer than max_words, but its local root is its last token.
  bool unsplittable = false;

  std::size_t size() const { return end - begin; }
  bool operator==(const Segment&) const = default;
};

/// Index of the span's local root: the leftmost token whose head lies
/// outside [begin, end).
std::size_t local_root(const DependencyTree& tree, std::size_t begin, std::size_t end);

/// Recursive root split of a dependency tree. A span longer than max_words
/// is cut right after its local root; the longer half is processed first.
/// Leaves come back ordered by start position.
std::vector<Segment> structure_segments(const DependencyTree& tree, std::size_t max_words = 4);

/// structure_segments rendered as space-joined token forms.
std::vector<std::string> structure_split(const DependencyTree& tree, std::size_t max_words = 4);

Decomposition paraphrase_decompose(const std::string& sentence, LlmClient& llm,
                                   const PromptSet& prompts = PromptSet::builtin(),
                                   int max_new_tokens = 500);

}  // namespace comptra
