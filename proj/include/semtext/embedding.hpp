#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>

#include "semtext/lexicalizer.hpp"

namespace semtext {

// The three padded word matrices for one block: rows are word vectors for
// the tag, class and text word strings in that order; rows past the word
// count stay zero.
struct BlockTensor {
    std::array<Eigen::MatrixXd, 3> maps;  // each n×k
};

// Pre-trained vector lookup with a deterministic hashed-n-gram fallback, so
// every token maps to a k-vector. The fallback hashes the character 3-6
// grams of "<token>" into a seeded bucket table whose vectors are computed
// on the fly (the table is never materialized).
class EmbeddingStore {
  public:
    struct Options {
        uint64_t subword_seed = 42;
        size_t subword_buckets = 1u << 20;
        size_t min_gram = 3;
        size_t max_gram = 6;
    };

    // Subword-only store (empty vocabulary) of the given dimension.
    EmbeddingStore(size_t dim, Options options);
    explicit EmbeddingStore(size_t dim) : EmbeddingStore(dim, Options()) {}

    // Text format: header line `COUNT DIM`, then `word v1 ... vk` per line.
    static EmbeddingStore load(const std::string& path, Options options);
    static EmbeddingStore load(const std::string& path) {
        return load(path, Options());
    }
    static EmbeddingStore parse(std::string_view text, Options options);
    static EmbeddingStore parse(std::string_view text) {
        return parse(text, Options());
    }

    size_t size() const { return vectors_.size(); }
    size_t dim() const { return dim_; }
    const Options& options() const { return options_; }

    bool contains(std::string_view token) const;

    // Stored vector for in-vocabulary tokens, subword fallback otherwise.
    // Total: never fails for a non-empty token.
    Eigen::VectorXd embed_word(std::string_view token) const;

    // Three n×k matrices; row i of map j embeds the i-th token of word
    // list j; remaining rows are zero. Throws if any embedding is
    // non-finite.
    BlockTensor embed_block(const WordStrings& words, size_t n) const;

  private:
    Eigen::VectorXd subword_vector(std::string_view token) const;

    size_t dim_ = 0;
    Options options_;
    std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

}  // namespace semtext
