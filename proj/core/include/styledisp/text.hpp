#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace styledisp::text {

// Unicode NFC normalization. Case and punctuation are preserved.
std::string nfc(std::string_view utf8);

// Decodes UTF-8; throws DataError on malformed input.
std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view text);

std::string to_lower(std::string_view utf8);

bool is_blank(std::string_view utf8);

bool is_letter(char32_t c);
bool is_digit(char32_t c);
bool is_punctuation(char32_t c);
bool is_whitespace(char32_t c);
bool is_uppercase(char32_t c);

}  // namespace styledisp::text
