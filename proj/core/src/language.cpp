#include "comptra/language.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

#include "comptra/assets.hpp"
#include "comptra/error.hpp"
#include "comptra/text.hpp"

namespace comptra {

namespace {

constexpr std::array<std::pair<Script, std::string_view>, 10> kScriptNames{{
    {Script::Latin, "Latin"},
    {Script::Ethiopic, "Ethiopic"},
    {Script::Myanmar, "Myanmar"},
    {Script::Khmer, "Khmer"},
    {Script::Lao, "Lao"},
    {Script::Sinhala, "Sinhala"},
    {Script::Arabic, "Arabic"},
    {Script::Cyrillic, "Cyrillic"},
    {Script::Han, "Han"},
    {Script::Other, "Other"},
}};

std::vector<std::string> split_tab(const std::string& line) {
  std::vector<std::string> cols;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      cols.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cols.push_back(cur);
  return cols;
}

}  // namespace

std::string_view to_string(Script script) {
  for (const auto& [s, name] : kScriptNames)
    if (s == script) return name;
  return "Other";
}

std::optional<Script> script_from_name(std::string_view name) {
  for (const auto& [s, n] : kScriptNames)
    if (n == name) return s;
  return std::nullopt;
}

Script script_from_suffix(std::string_view suffix) {
  if (suffix == "Latn") return Script::Latin;
  if (suffix == "Ethi") return Script::Ethiopic;
  if (suffix == "Mymr") return Script::Myanmar;
  if (suffix == "Khmr") return Script::Khmer;
  if (suffix == "Laoo") return Script::Lao;
  if (suffix == "Sinh") return Script::Sinhala;
  if (suffix == "Arab") return Script::Arabic;
  if (suffix == "Cyrl") return Script::Cyrillic;
  if (suffix == "Hans" || suffix == "Hant" || suffix == "Jpan" || suffix == "Hani") return Script::Han;
  return Script::Other;
}

LanguageTag LanguageTag::from_code(std::string_view code) {
  if (code.empty()) throw Error(ErrorKind::UnknownLanguage, "empty language code");
  std::istringstream in{std::string(assets::get("languages.tsv"))};
  std::string line;
  while (std::getline(in, line)) {
    auto cols = split_tab(line);
    if (cols.size() < 2 || cols[0] != code) continue;
    LanguageTag tag;
    tag.code = cols[0];
    tag.display_name = cols[1];
    auto underscore = tag.code.find('_');
    tag.script = underscore == std::string::npos ? Script::Other
                                                 : script_from_suffix(std::string_view(tag.code).substr(underscore + 1));
    return tag;
  }
  throw Error(ErrorKind::UnknownLanguage, "unknown language code '" + std::string(code) + "'");
}

ScriptProfileTable ScriptProfileTable::builtin() {
  return parse(assets::get("script_profiles.tsv"));
}

ScriptProfileTable ScriptProfileTable::parse(std::string_view tsv) {
  ScriptProfileTable table;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_tab(line);
    if (cols.size() != 2)
      throw Error(ErrorKind::MalformedRecord, "script profile line " + std::to_string(line_no));
    ScriptProfile profile;
    auto scripts_col = text::trim(cols[1]);
    if (scripts_col != "-") {
      std::istringstream parts(scripts_col);
      std::string name;
      while (std::getline(parts, name, ',')) {
        auto script = script_from_name(text::trim(name));
        if (!script)
          throw Error(ErrorKind::MalformedRecord,
                      "unknown script '" + name + "' on script profile line " + std::to_string(line_no));
        profile.expected_scripts.insert(*script);
      }
    }
    table.rows_[text::trim(cols[0])] = std::move(profile);
  }
  return table;
}

ScriptProfileTable ScriptProfileTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

ScriptProfile ScriptProfileTable::lookup(std::string_view code) const {
  auto it = rows_.find(code);
  return it == rows_.end() ? ScriptProfile{} : it->second;
}

}  // namespace comptra
