#pragma once

// UTF-8 helpers backed by ICU character properties.

#include <string>
#include <string_view>
#include <vector>

namespace comptra::text {

/// Decodes UTF-8 into code points. Ill-formed sequences decode to U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

bool is_whitespace(char32_t cp);
/// Unicode general category P* (connector, dash, open/close, quotes, other).
bool is_punct(char32_t cp);
bool is_letter(char32_t cp);
/// Simple (one-to-one) per-code-point lowercase mapping.
char32_t to_lower(char32_t cp);

std::string trim(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Whitespace split, strip leading/trailing punctuation per token, drop empties.
std::vector<std::string> tokenize_words(std::string_view s, bool lowercase);

}  // namespace comptra::text
