#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace lmchunk::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes UTF-8, mapping invalid byte sequences to U+FFFD.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view codepoints);

void append(std::string& out, char32_t cp);

// Number of code points (invalid sequences count as one replacement each).
std::size_t count(std::string_view bytes);

// First `max_codepoints` code points of `bytes`, as UTF-8.
std::string truncate(std::string_view bytes, std::size_t max_codepoints);

}  // namespace lmchunk::utf8
