#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace comptra {

enum class Script { Latin, Ethiopic, Myanmar, Khmer, Lao, Sinhala, Arabic, Cyrillic, Han, Other };

std::string_view to_string(Script script);
std::optional<Script> script_from_name(std::string_view name);
/// Maps a FLORES script suffix ("Ethi", "Latn", ...) to a Script.
Script script_from_suffix(std::string_view suffix);

/// FLORES-style language identity, e.g. {"amh_Ethi", "Amharic", Ethiopic}.
struct LanguageTag {
  std::string code;
  std::string display_name;
  Script script = Script::Other;

  /// Looks `code` up in the built-in language table. Throws
  /// Error(UnknownLanguage) for codes not listed there.
  static LanguageTag from_code(std::string_view code);

  bool operator==(const LanguageTag&) const = default;
};

/// Scripts a target language is expected to be written in. An empty set
/// means the language cannot be checked by script and filtering is skipped.
struct ScriptProfile {
  std::set<Script> expected_scripts;

  bool supported() const { return !expected_scripts.empty(); }
};

/// `code<TAB>script1[,script2]` rows; "-" marks an unsupported language and
/// lines starting with '#' are comments.
class ScriptProfileTable {
 public:
  static ScriptProfileTable builtin();
  static ScriptProfileTable parse(std::string_view tsv);
  static ScriptProfileTable load(const std::string& path);

  /// Unknown codes yield an unsupported profile.
  ScriptProfile lookup(std::string_view code) const;

 private:
  std::map<std::string, ScriptProfile, std::less<>> rows_;
};

}  // namespace comptra
