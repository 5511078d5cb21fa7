#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace dreams::text {

inline constexpr char32_t kInvalid = 0xFFFD;

// Decodes one code point starting at `pos`; advances `pos`. Malformed
// sequences decode to kInvalid and consume one byte.
char32_t decode(std::string_view s, std::size_t& pos);
void encode(char32_t cp, std::string& out);

// Simple (one-to-one) Unicode case folding for Latin, Greek, Cyrillic,
// Armenian and fullwidth Latin; other code points map to themselves.
char32_t fold(char32_t cp);

// Word characters: ASCII letters and digits plus every non-ASCII code point
// outside the common punctuation, symbol and space blocks.
bool is_word(char32_t cp);

}  // namespace dreams::text
