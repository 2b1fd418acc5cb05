#include "semtext/util.hpp"

#include <cstdio>

namespace semtext {

void warn(const std::string& message) {
    std::fprintf(stderr, "semtext: warning: %s\n", message.c_str());
}

void utf8_append(std::string& out, uint32_t cp) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool utf8_next(std::string_view s, size_t& i, uint32_t& cp) {
    const auto byte = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        cp = b0;
        i += 1;
        return true;
    }
    size_t len;
    uint32_t acc;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        acc = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        acc = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        acc = b0 & 0x07;
    } else {
        cp = 0xFFFD;
        i += 1;
        return false;
    }
    if (i + len > s.size()) {
        cp = 0xFFFD;
        i += 1;
        return false;
    }
    for (size_t k = 1; k < len; ++k) {
        unsigned char bk = byte(i + k);
        if ((bk & 0xC0) != 0x80) {
            cp = 0xFFFD;
            i += 1;
            return false;
        }
        acc = (acc << 6) | (bk & 0x3F);
    }
    // Reject overlongs and out-of-range values.
    static const uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (acc < kMin[len] || acc > 0x10FFFF || (acc >= 0xD800 && acc <= 0xDFFF)) {
        cp = 0xFFFD;
        i += 1;
        return false;
    }
    cp = acc;
    i += len;
    return true;
}

bool utf8_valid(std::string_view s) {
    size_t i = 0;
    uint32_t cp;
    while (i < s.size()) {
        if (!utf8_next(s, i, cp)) return false;
    }
    return true;
}

bool is_space_cp(uint32_t cp) {
    switch (cp) {
        case ' ':
        case '\t':
        case '\n':
        case '\r':
        case '\f':
        case '\v':
        case 0x00A0:  // NBSP
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:
        case 0xFEFF:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200B;  // en/em/thin spaces, ZWSP
    }
}

bool is_word_cp(uint32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
               (cp >= 'A' && cp <= 'Z');
    }
    if (cp < 0xC0) return false;           // Latin-1 punctuation and signs
    if (cp == 0xD7 || cp == 0xF7) return false;  // multiply/divide signs
    if (cp < 0x2000) return true;          // Latin ext, Greek, Cyrillic, ...
    if (cp < 0x2C00) return false;         // punctuation, symbols, arrows
    if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
    if (cp >= 0xFE30 && cp <= 0xFF0F) return false;  // forms / fullwidth punct
    if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji blocks
    return true;
}

bool contains_word_char(std::string_view s) {
    size_t i = 0;
    uint32_t cp;
    while (i < s.size()) {
        utf8_next(s, i, cp);
        if (is_word_cp(cp)) return true;
    }
    return false;
}

std::string normalize_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    size_t i = 0;
    uint32_t cp;
    while (i < s.size()) {
        size_t start = i;
        utf8_next(s, i, cp);
        if (is_space_cp(cp)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out += ' ';
            pending_space = false;
            out.append(s.substr(start, i - start));
        }
    }
    return out;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    size_t i = 0;
    uint32_t cp;
    while (i < s.size()) {
        size_t start = i;
        utf8_next(s, i, cp);
        if (is_space_cp(cp)) {
            if (!cur.empty()) {
                out.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            cur.append(s.substr(start, i - start));
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

uint32_t fnv1a(std::string_view s) {
    uint32_t h = 2166136261u;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 16777619u;
    }
    return h;
}

}  // namespace semtext
