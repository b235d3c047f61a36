#include "comptra/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "comptra/assets.hpp"
#include "comptra/error.hpp"
#include "comptra/text.hpp"

namespace comptra {

namespace {

// Template files may end with one newline; rendered prompts never do.
std::string strip_final_newline(std::string_view s) {
  if (!s.empty() && s.back() == '\n') s.remove_suffix(1);
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return std::string(s);
}

void require_sentence(const std::string& sentence) {
  if (text::trim(sentence).empty()) throw Error(ErrorKind::PreconditionFailed, "sentence is empty");
}

}  // namespace

const PromptSet& PromptSet::builtin() {
  static const PromptSet set = [] {
    PromptSet p;
    p.zero_shot = strip_final_newline(assets::get("zero_shot.txt"));
    p.few_shot = strip_final_newline(assets::get("few_shot.txt"));
    p.divide = strip_final_newline(assets::get("divide.txt"));
    p.paraphrase = strip_final_newline(assets::get("paraphrase.txt"));
    p.merge = strip_final_newline(assets::get("merge.txt"));
    return p;
  }();
  return set;
}

PromptSet PromptSet::from_directory(const std::string& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::MissingFile, dir);
  PromptSet p = builtin();
  auto override_with = [&](const char* name, std::string& slot) {
    auto path = std::filesystem::path(dir) / name;
    if (!std::filesystem::exists(path)) return;
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    slot = strip_final_newline(ss.str());
  };
  override_with("zero_shot.txt", p.zero_shot);
  override_with("few_shot.txt", p.few_shot);
  override_with("divide.txt", p.divide);
  override_with("paraphrase.txt", p.paraphrase);
  override_with("merge.txt", p.merge);
  return p;
}

const std::string& PromptSet::get(PromptKind kind) const {
  switch (kind) {
    case PromptKind::ZeroShot: return zero_shot;
    case PromptKind::FewShot: return few_shot;
    case PromptKind::Divide: return divide;
    case PromptKind::Paraphrase: return paraphrase;
    case PromptKind::Merge: return merge;
  }
  return zero_shot;
}

std::string fill_template(std::string_view tmpl,
                          const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        auto name = tmpl.substr(i + 1, close - i - 1);
        bool replaced = false;
        for (const auto& [key, value] : values) {
          if (key == name) {
            out += value;
            replaced = true;
            break;
          }
        }
        if (replaced) {
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

std::string render_demonstrations(const LanguageTag& src, const LanguageTag& tgt,
                                  const std::vector<Demonstration>& demos) {
  std::string out;
  for (std::size_t i = 0; i < demos.size(); ++i) {
    const auto& d = demos[i];
    if (text::trim(d.source).empty() || text::trim(d.target).empty())
      throw Error(ErrorKind::EmptyDemoField, "demonstration " + std::to_string(i + 1));
    if (i) out += "\n\n";
    out += std::to_string(i + 1) + ". " + src.display_name + " sentence\n" + d.source + "\n" +
           tgt.display_name + " translation\n" + d.target;
  }
  return out;
}

namespace {

std::string render_with_demos(const std::string& tmpl, const LanguageTag& tgt, const LanguageTag& src,
                              const std::string& sentence, const std::vector<Demonstration>& demos) {
  return fill_template(tmpl, {{"src", src.display_name},
                              {"tgt", tgt.display_name},
                              {"sentence", sentence},
                              {"demonstrations", render_demonstrations(src, tgt, demos)}});
}

}  // namespace

std::string render_translate_prompt(const LanguageTag& tgt, const LanguageTag& src,
                                    const std::string& sentence,
                                    const std::vector<Demonstration>& demos, const PromptSet& prompts) {
  require_sentence(sentence);
  if (demos.empty())
    return fill_template(prompts.zero_shot,
                         {{"src", src.display_name}, {"tgt", tgt.display_name}, {"sentence", sentence}});
  return render_with_demos(prompts.few_shot, tgt, src, sentence, demos);
}

std::string render_merge_prompt(const LanguageTag& tgt, const LanguageTag& src,
                                const std::string& sentence, const std::vector<Demonstration>& pairs,
                                const PromptSet& prompts) {
  require_sentence(sentence);
  return render_with_demos(prompts.merge, tgt, src, sentence, pairs);
}

std::string render_divide_prompt(const std::string& sentence, DivideMode mode, const PromptSet& prompts) {
  require_sentence(sentence);
  const auto& tmpl = mode == DivideMode::Propositions ? prompts.divide : prompts.paraphrase;
  return fill_template(tmpl, {{"sentence", sentence}});
}

std::vector<std::string> parse_propositions(std::string_view llm_output, std::size_t cap) {
  std::vector<std::string> phrases;
  bool in_list = false;
  std::istringstream in{std::string(llm_output)};
  std::string line;
  while (std::getline(in, line) && phrases.size() < cap) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t digits = i;
    while (digits < line.size() && line[digits] >= '0' && line[digits] <= '9') ++digits;
    bool item = digits > i && digits + 1 < line.size() && (line[digits] == '.' || line[digits] == ')') &&
                line[digits + 1] == ' ';
    if (!item) {
      // The first list ends at the first line that is not an item.
      if (in_list) break;
      continue;
    }
    in_list = true;
    auto phrase = text::trim(std::string_view(line).substr(digits + 2));
    if (!phrase.empty()) phrases.push_back(std::move(phrase));
  }
  if (phrases.empty()) throw Error(ErrorKind::NoPropositionsFound, "no numbered list in LLM output");
  return phrases;
}

}  // namespace comptra
