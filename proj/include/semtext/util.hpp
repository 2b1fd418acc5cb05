#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace semtext {

// Prints a one-line warning to stderr. All library diagnostics go through
// here so batch runs stay greppable.
void warn(const std::string& message);

// ---------------------------------------------------------------------------
// UTF-8
// ---------------------------------------------------------------------------

// Appends the UTF-8 encoding of `cp` to `out`. Invalid code points
// (surrogates, > U+10FFFF) encode U+FFFD instead.
void utf8_append(std::string& out, uint32_t cp);

// Decodes the code point starting at `s[i]`. Advances `i` past it.
// Returns false on malformed input (i is advanced by one byte).
bool utf8_next(std::string_view s, size_t& i, uint32_t& cp);

// True if `s` is well-formed UTF-8.
bool utf8_valid(std::string_view s);

// ---------------------------------------------------------------------------
// Character classes
// ---------------------------------------------------------------------------

// Whitespace for block-text purposes: ASCII space/tab/newlines plus NBSP
// and the common Unicode space separators.
bool is_space_cp(uint32_t cp);

// True if the code point is a letter or digit in the segmentation sense.
// ASCII alnum plus the major letter ranges; general punctuation, dingbats
// and symbol blocks are excluded so bullets and pipes do not count.
bool is_word_cp(uint32_t cp);

// True if `s` contains at least one letter-or-digit code point.
bool contains_word_char(std::string_view s);

// Collapses whitespace runs to a single space and trims both ends.
std::string normalize_whitespace(std::string_view s);

// ASCII-only lowercase; non-ASCII bytes pass through.
std::string ascii_lower(std::string_view s);

// Splits on is_space_cp boundaries; no empty tokens.
std::vector<std::string> split_whitespace(std::string_view s);

// ---------------------------------------------------------------------------
// Misc
// ---------------------------------------------------------------------------

// SplitMix64 mixer; used wherever a cheap stateless hash of integers is
// needed (subword bucket vectors).
uint64_t mix64(uint64_t x);

// FNV-1a over bytes.
uint32_t fnv1a(std::string_view s);

}  // namespace semtext
