#include "comptra/decompose.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stack>

#include "comptra/assets.hpp"
#include "comptra/error.hpp"
#include "comptra/llm_client.hpp"
#include "comptra/retrieval.hpp"
#include "comptra/text.hpp"

namespace comptra {

std::string_view to_string(DecompositionStrategy::Kind kind) {
  using K = DecompositionStrategy::Kind;
  switch (kind) {
    case K::LlmPropositions: return "llm_propositions";
    case K::Words: return "words";
    case K::Repeat: return "repeat";
    case K::Paraphrase: return "paraphrase";
    case K::Structure: return "structure";
  }
  return "llm_propositions";
}

DecompositionStrategy::Kind strategy_kind_from_string(const std::string& name) {
  using K = DecompositionStrategy::Kind;
  if (name == "llm" || name == "llm_propositions") return K::LlmPropositions;
  if (name == "words") return K::Words;
  if (name == "repeat") return K::Repeat;
  if (name == "paraphrase") return K::Paraphrase;
  if (name == "structure") return K::Structure;
  throw Error(ErrorKind::InvalidConfig, "unknown decomposition strategy '" + name + "'");
}

namespace {

StopWords parse_stopwords(std::string_view content) {
  StopWords words;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    auto w = text::trim(line);
    if (!w.empty() && w[0] != '#') words.insert(std::move(w));
  }
  return words;
}

}  // namespace

const StopWords& builtin_stopwords() {
  static const StopWords words = parse_stopwords(assets::get("stopwords_en.txt"));
  return words;
}

StopWords load_stopwords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_stopwords(ss.str());
}

std::vector<std::string> content_words(std::string_view sentence, const StopWords& stopwords) {
  auto tokens = tokenize_retrieval(sentence);
  std::vector<std::string> content, all;
  StopWords seen;
  for (const auto& t : tokens) {
    if (!seen.insert(t).second) continue;
    all.push_back(t);
    if (!stopwords.contains(t)) content.push_back(t);
  }
  return content.empty() ? all : content;
}

std::size_t local_root(const DependencyTree& tree, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    const auto head = tree.tokens[i].head;
    if (head == 0 || head - 1 < begin || head - 1 >= end) return i;
  }
  // Unreachable for valid trees: following heads from any token leaves the span.
  return end - 1;
}

std::vector<Segment> structure_segments(const DependencyTree& tree, std::size_t max_words) {
  std::vector<Segment> leaves;
  if (tree.tokens.empty()) return leaves;
  if (max_words == 0) max_words = 1;

  std::stack<Segment> pending;
  pending.push({0, tree.size(), false});
  while (!pending.empty()) {
    auto span = pending.top();
    pending.pop();
    if (span.size() <= max_words) {
      leaves.push_back(span);
      continue;
    }
    const auto root = local_root(tree, span.begin, span.end);
    if (root + 1 == span.end) {
      span.unsplittable = true;
      leaves.push_back(span);
      continue;
    }
    Segment left{span.begin, root + 1, false};
    Segment right{root + 1, span.end, false};
    // The longer part goes on top of the stack so it is split first.
    if (left.size() > right.size()) {
      pending.push(right);
      pending.push(left);
    } else {
      pending.push(left);
      pending.push(right);
    }
  }
  std::sort(leaves.begin(), leaves.end(),
            [](const Segment& a, const Segment& b) { return a.begin < b.begin; });
  return leaves;
}

std::vector<std::string> structure_split(const DependencyTree& tree, std::size_t max_words) {
  std::vector<std::string> out;
  for (const auto& seg : structure_segments(tree, max_words)) {
    std::string phrase;
    for (std::size_t i = seg.begin; i < seg.end; ++i) {
      if (i > seg.begin) phrase += ' ';
      phrase += tree.tokens[i].form;
    }
    out.push_back(std::move(phrase));
  }
  return out;
}

namespace {

Decomposition llm_list(const std::string& sentence, DivideMode mode, LlmClient& llm, const PromptSet& prompts,
                       int max_new_tokens, DecompositionStrategy strategy) {
  Decomposition result;
  result.phrase_set.original = sentence;
  result.phrase_set.strategy = strategy;
  auto prompt = render_divide_prompt(sentence, mode, prompts);
  auto output = llm.complete(ChatRequest::single_user(std::move(prompt), max_new_tokens));
  result.llm_calls = 1;
  try {
    result.phrase_set.phrases = parse_propositions(output);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoPropositionsFound) throw;
    result.phrase_set.phrases = {sentence};
    result.flags.push_back("decomposition_fallback");
  }
  return result;
}

}  // namespace

Decomposition paraphrase_decompose(const std::string& sentence, LlmClient& llm, const PromptSet& prompts,
                                   int max_new_tokens) {
  DecompositionStrategy strategy{DecompositionStrategy::Kind::Paraphrase};
  auto result = llm_list(sentence, DivideMode::Paraphrase, llm, prompts, max_new_tokens, strategy);
  if (result.flags.empty() && result.phrase_set.phrases.size() < 4)
    result.flags.push_back("paraphrase_underfilled");
  return result;
}

Decomposition decompose(const std::string& sentence, const DecompositionStrategy& strategy,
                        const DecomposeContext& ctx) {
  using K = DecompositionStrategy::Kind;
  if (text::trim(sentence).empty()) throw Error(ErrorKind::PreconditionFailed, "sentence is empty");
  if (strategy.repeat_count < 1) throw Error(ErrorKind::InvalidConfig, "repeat_count must be >= 1");
  const PromptSet& prompts = ctx.prompts ? *ctx.prompts : PromptSet::builtin();

  auto need_llm = [&]() -> LlmClient& {
    if (ctx.llm == nullptr) throw Error(ErrorKind::InvalidConfig, "strategy needs an LLM backend");
    return *ctx.llm;
  };

  Decomposition result;
  result.phrase_set.original = sentence;
  result.phrase_set.strategy = strategy;
  switch (strategy.kind) {
    case K::LlmPropositions:
      return llm_list(sentence, DivideMode::Propositions, need_llm(), prompts, ctx.max_new_tokens, strategy);
    case K::Paraphrase: {
      auto r = paraphrase_decompose(sentence, need_llm(), prompts, ctx.max_new_tokens);
      r.phrase_set.strategy = strategy;
      return r;
    }
    case K::Repeat:
      result.phrase_set.phrases.assign(static_cast<std::size_t>(strategy.repeat_count), sentence);
      return result;
    case K::Words: {
      auto words = content_words(sentence, ctx.stopwords ? *ctx.stopwords : builtin_stopwords());
      if (words.empty()) {
        // Punctuation-only input has no tokens at all.
        words = {sentence};
        result.flags.push_back("decomposition_fallback");
      }
      result.phrase_set.phrases = std::move(words);
      return result;
    }
    case K::Structure: {
      const DependencyTree* tree = nullptr;
      if (ctx.trees && ctx.sentence_id) {
        auto it = ctx.trees->find(*ctx.sentence_id);
        if (it != ctx.trees->end()) tree = &it->second;
      }
      if (tree == nullptr)
        throw Error(ErrorKind::MissingTree,
                    ctx.sentence_id ? "sentence " + std::to_string(*ctx.sentence_id) : "no sentence id");
      result.phrase_set.phrases = structure_split(*tree);
      if (result.phrase_set.phrases.empty()) {
        result.phrase_set.phrases = {sentence};
        result.flags.push_back("decomposition_fallback");
      }
      return result;
    }
  }
  return result;
}

}  // namespace comptra
