#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace pwsim::unicode {

/// Decodes UTF-8 into scalar values. Returns nullopt on any ill-formed sequence.
std::optional<std::u32string> decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view scalars);

/// Validates UTF-8 and applies NFC. Returns nullopt when the input is not valid UTF-8.
std::optional<std::string> normalize_nfc(std::string_view bytes);

/// Decode + NFC in one step; this is the canonical form every comparison uses.
std::optional<std::u32string> to_scalars(std::string_view bytes);

/// Number of scalar values in a valid UTF-8 string (bytes of invalid input are counted once each).
std::size_t scalar_length(std::string_view bytes);

bool is_letter(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);
bool is_digit(char32_t c);
bool is_whitespace(char32_t c);
/// Anything that is neither a letter, a digit nor whitespace.
bool is_symbol(char32_t c);

char32_t to_upper(char32_t c);
char32_t to_lower(char32_t c);

/// True when every character is whitespace (or the string is empty).
bool is_blank(std::u32string_view s);

}  // namespace pwsim::unicode
