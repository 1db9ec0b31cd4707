#pragma once

#include <string>
#include <string_view>

namespace sentikit::utf8 {

bool is_valid(std::string_view s);

// Decodes the code point starting at s[pos] and advances pos. Invalid bytes
// decode to U+FFFD and advance by one.
char32_t decode(std::string_view s, std::size_t &pos);
void append(std::string &out, char32_t cp);

char32_t to_lower(char32_t cp);
bool is_letter(char32_t cp);
bool is_space(char32_t cp);

}  // namespace sentikit::utf8
