#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semtext/segmenter.hpp"

namespace semtext {

// The three word strings the model consumes for one block.
struct WordStrings {
    std::vector<std::string> tag_words;
    std::vector<std::string> class_words;
    std::vector<std::string> text_words;
};

// Turns a block's tag path, class path and content into lowercase word
// lists: tags map through a phrase table, class tokens run through the
// cleansing pipeline (delimiter split, camel-case split, number removal,
// abbreviation expansion), text tokenizes on non-word characters. Stopwords
// are removed from every list and each list is cut to max_words tokens.
class Lexicalizer {
  public:
    Lexicalizer();  // built-in tables, max_words = 50

    size_t max_words() const { return max_words_; }
    void set_max_words(size_t n);

    // Replace a built-in table from a data file. Phrase and abbreviation
    // files are `term<TAB>expansion` per line; the stopword file is one
    // word per line. '#' starts a comment line in all three.
    void load_tag_phrases(const std::string& path);
    void load_abbreviations(const std::string& path);
    void load_stopwords(const std::string& path);

    std::vector<std::string> lexicalize_tags(
        const std::vector<std::string>& tag_seq) const;
    std::vector<std::string> lexicalize_classes(
        const std::vector<std::string>& class_seq) const;
    std::vector<std::string> lexicalize_text(std::string_view text) const;

    WordStrings lexicalize(const TextBlock& block) const;

    bool is_stopword(std::string_view token) const;

    // Embedded defaults, exposed so the shipped data files can be verified
    // against them.
    static std::string_view builtin_tag_phrase_text();
    static std::string_view builtin_abbreviation_text();
    static std::string_view builtin_stopword_text();

  private:
    size_t max_words_ = 50;
    std::unordered_map<std::string, std::string> tag_phrases_;
    std::unordered_map<std::string, std::string> abbreviations_;
    std::unordered_set<std::string> stopwords_;
};

}  // namespace semtext
