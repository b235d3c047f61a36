#include <gtest/gtest.h>

#include "comptra/error.hpp"
#include "comptra/language.hpp"
#include "comptra/text.hpp"

namespace comptra {
namespace {

TEST(Text, DecodeEncodeRoundTrip) {
  const std::string s = "ሰላም café 日本";
  EXPECT_EQ(text::encode(text::decode(s)), s);
  EXPECT_EQ(text::decode("ሰ").size(), 1u);
}

TEST(Text, IllFormedBytesBecomeReplacementChar) {
  auto cps = text::decode(std::string("a\xff" "b"));
  ASSERT_EQ(cps.size(), 3u);
  EXPECT_EQ(cps[1], U'�');
}

TEST(Text, TrimHandlesUnicodeWhitespace) {
  EXPECT_EQ(text::trim("  hi there\t\n"), "hi there");
  EXPECT_EQ(text::trim("   "), "");
}

TEST(Text, SplitAndJoin) {
  EXPECT_EQ(text::split_whitespace("  a  b\tc\n"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(text::join({"a", "b"}, ", "), "a, b");
  EXPECT_TRUE(text::split_whitespace("").empty());
}

TEST(Text, TokenizeWordsStripsEdgePunctuation) {
  EXPECT_EQ(text::tokenize_words("\"Hello, World!\" (x)", false),
            (std::vector<std::string>{"Hello", "World", "x"}));
  EXPECT_EQ(text::tokenize_words("non-diabetic ... ok", true),
            (std::vector<std::string>{"non-diabetic", "ok"}));
}

TEST(LanguageTag, FromCodeResolvesNameAndScript) {
  auto amh = LanguageTag::from_code("amh_Ethi");
  EXPECT_EQ(amh.display_name, "Amharic");
  EXPECT_EQ(amh.script, Script::Ethiopic);
  EXPECT_EQ(LanguageTag::from_code("eng_Latn").script, Script::Latin);
  EXPECT_EQ(LanguageTag::from_code("mya_Mymr").display_name, "Burmese");
}

TEST(LanguageTag, UnknownCodeThrows) {
  try {
    LanguageTag::from_code("xyz_Qaaa");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownLanguage);
  }
}

TEST(Script, SuffixAndNameLookups) {
  EXPECT_EQ(script_from_suffix("Ethi"), Script::Ethiopic);
  EXPECT_EQ(script_from_suffix("Cyrl"), Script::Cyrillic);
  EXPECT_EQ(script_from_suffix("Zzzz"), Script::Other);
  EXPECT_EQ(script_from_name("Khmer"), Script::Khmer);
  EXPECT_FALSE(script_from_name("Klingon").has_value());
  EXPECT_EQ(to_string(Script::Sinhala), "Sinhala");
}

TEST(ScriptProfileTable, BuiltinMarksLatinTargetsUnsupported) {
  auto table = ScriptProfileTable::builtin();
  EXPECT_TRUE(table.lookup("amh_Ethi").supported());
  EXPECT_EQ(table.lookup("amh_Ethi").expected_scripts, std::set<Script>{Script::Ethiopic});
  EXPECT_FALSE(table.lookup("fij_Latn").supported());
  EXPECT_FALSE(table.lookup("not_Listed").supported());
}

TEST(ScriptProfileTable, ParseMultiScriptRowsAndComments) {
  auto table = ScriptProfileTable::parse("# comment\nsrp_Cyrl\tCyrillic,Latin\nxxx_Latn\t-\n");
  EXPECT_EQ(table.lookup("srp_Cyrl").expected_scripts, (std::set<Script>{Script::Cyrillic, Script::Latin}));
  EXPECT_FALSE(table.lookup("xxx_Latn").supported());
}

TEST(ScriptProfileTable, BadRowsAreRejected) {
  EXPECT_THROW(ScriptProfileTable::parse("amh_Ethi\tKlingon\n"), Error);
  EXPECT_THROW(ScriptProfileTable::parse("no tab here\n"), Error);
}

}  // namespace
}  // namespace comptra
