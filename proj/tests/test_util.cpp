#include <doctest.h>

#include <string>

#include "semtext/util.hpp"

using namespace semtext;

TEST_CASE("utf8 round trip over the full code point range") {
    for (uint32_t cp : {0x24u, 0xA2u, 0x20ACu, 0x10348u, 0x10FFFFu}) {
        std::string s;
        utf8_append(s, cp);
        size_t i = 0;
        uint32_t back = 0;
        CHECK(utf8_next(s, i, back));
        CHECK(back == cp);
        CHECK(i == s.size());
        CHECK(utf8_valid(s));
    }
}

TEST_CASE("utf8_append maps invalid code points to the replacement char") {
    std::string s;
    utf8_append(s, 0xD800);    // surrogate
    utf8_append(s, 0x110000);  // beyond the range
    size_t i = 0;
    uint32_t cp = 0;
    CHECK(utf8_next(s, i, cp));
    CHECK(cp == 0xFFFD);
    CHECK(utf8_next(s, i, cp));
    CHECK(cp == 0xFFFD);
}

TEST_CASE("utf8_next rejects malformed sequences") {
    // Overlong encoding of '/', lone continuation byte, truncated sequence,
    // CESU-style surrogate encoding.
    for (std::string bad : {std::string("\xC0\xAF"), std::string("\x80"),
                            std::string("\xE2\x82"), std::string("\xED\xA0\x80")}) {
        size_t i = 0;
        uint32_t cp = 0;
        CHECK_FALSE(utf8_next(bad, i, cp));
        CHECK(i == 1);  // advanced one byte so scans terminate
        CHECK_FALSE(utf8_valid(bad));
    }
    CHECK(utf8_valid("plain ascii"));
    CHECK(utf8_valid("caf\xC3\xA9"));
}

TEST_CASE("normalize_whitespace collapses runs and trims") {
    CHECK(normalize_whitespace("  a\t\tb \n c  ") == "a b c");
    CHECK(normalize_whitespace("") == "");
    CHECK(normalize_whitespace(" \n\t ") == "");
    CHECK(normalize_whitespace("one") == "one");
    // NBSP and en-space count as whitespace
    CHECK(normalize_whitespace("a\xC2\xA0\xC2\xA0m") == "a m");
    CHECK(normalize_whitespace("a\xE2\x80\x82m") == "a m");
}

TEST_CASE("word characters: letters and digits only") {
    CHECK(contains_word_char("a"));
    CHECK(contains_word_char("7"));
    CHECK(contains_word_char("caf\xC3\xA9"));
    CHECK(contains_word_char("\xE4\xB8\xAD"));  // CJK ideograph
    CHECK_FALSE(contains_word_char("|"));
    CHECK_FALSE(contains_word_char("•"));
    CHECK_FALSE(contains_word_char("—  »"));
    CHECK_FALSE(contains_word_char("···"));
    CHECK_FALSE(contains_word_char(""));
}

TEST_CASE("split_whitespace produces no empty tokens") {
    auto t = split_whitespace("  foo  bar\tbaz\n");
    REQUIRE(t.size() == 3);
    CHECK(t[0] == "foo");
    CHECK(t[1] == "bar");
    CHECK(t[2] == "baz");
    CHECK(split_whitespace("   ").empty());
}

TEST_CASE("ascii_lower leaves non-ascii bytes alone") {
    CHECK(ascii_lower("MiXeD-42") == "mixed-42");
    CHECK(ascii_lower("CAF\xC3\x89") == "caf\xC3\x89");
}

TEST_CASE("fnv1a matches the published 32-bit test vectors") {
    CHECK(fnv1a("") == 2166136261u);
    CHECK(fnv1a("a") == 0xE40C292Cu);
    CHECK(fnv1a("foobar") == 0xBF9CF968u);
}

TEST_CASE("mix64 is deterministic and spreads nearby inputs") {
    CHECK(mix64(1) == mix64(1));
    CHECK(mix64(1) != mix64(2));
    CHECK(mix64(0) != 0);
}
