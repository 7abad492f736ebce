#pragma once

#include <string>
#include <string_view>
#include <vector>

// Minimal Unicode support for corpus cleaning: UTF-8 transcoding, NFC
// normalization, simple lowercasing and character classification. Backed
// by tables generated from the Unicode character database
// (scripts/gen_unicode_tables.py).

namespace semspace::unicode {

// Decodes UTF-8; invalid byte sequences become U+FFFD.
std::vector<char32_t> decode_utf8(std::string_view text);

std::string encode_utf8(const std::vector<char32_t>& codepoints);

// Canonical composition (NFC). Hangul handled arithmetically.
void normalize_nfc(std::vector<char32_t>& codepoints);

std::string nfc(std::string_view text);

// Simple 1:1 case mapping; codepoints without one pass through unchanged.
char32_t to_lower(char32_t cp);

std::string lowercase(std::string_view text);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);

// Unicode whitespace (Zs plus the ASCII controls and U+0085).
bool is_space(char32_t cp);

}  // namespace semspace::unicode
