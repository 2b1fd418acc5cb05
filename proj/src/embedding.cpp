#include "semtext/embedding.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "semtext/errors.hpp"
#include "semtext/util.hpp"

namespace semtext {

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

EmbeddingStore::EmbeddingStore(size_t dim, Options options)
    : dim_(dim), options_(options) {
    if (dim_ == 0) throw DimensionError("embedding: dimension must be positive");
    if (options_.subword_buckets == 0)
        throw ConfigError("embedding: bucket count must be positive");
    if (options_.min_gram < 1 || options_.min_gram > options_.max_gram)
        throw ConfigError("embedding: bad n-gram range");
}

EmbeddingStore EmbeddingStore::load(const std::string& path, Options options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("embedding: cannot open vector file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), options);
}

EmbeddingStore EmbeddingStore::parse(std::string_view text, Options options) {
    struct Row {
        std::string word;
        std::vector<double> values;
    };

    size_t pos = 0;
    int line_no = 0;
    bool have_header = false;
    size_t header_count = 0;
    size_t header_dim = 0;
    std::vector<Row> rows;

    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        std::vector<std::string> fields = split_whitespace(line);
        if (fields.empty()) continue;

        if (!have_header) {
            if (fields.size() != 2)
                throw FormatError("embedding: header must be `COUNT DIM`");
            char* end = nullptr;
            long count = std::strtol(fields[0].c_str(), &end, 10);
            if (*end != '\0' || count < 0)
                throw FormatError("embedding: bad COUNT in header");
            long dim = std::strtol(fields[1].c_str(), &end, 10);
            if (*end != '\0' || dim <= 0)
                throw FormatError("embedding: bad DIM in header");
            header_count = static_cast<size_t>(count);
            header_dim = static_cast<size_t>(dim);
            have_header = true;
            continue;
        }

        Row row;
        row.word = std::move(fields[0]);
        row.values.reserve(fields.size() - 1);
        for (size_t i = 1; i < fields.size(); ++i) {
            char* end = nullptr;
            double v = std::strtod(fields[i].c_str(), &end);
            if (*end != '\0')
                throw FormatError("embedding: non-numeric value at line " +
                                  std::to_string(line_no));
            if (!std::isfinite(v))
                throw FormatError("embedding: non-finite value at line " +
                                  std::to_string(line_no));
            row.values.push_back(v);
        }
        if (row.values.empty())
            throw FormatError("embedding: row without values at line " +
                              std::to_string(line_no));
        if (!rows.empty() && row.values.size() != rows.front().values.size())
            throw FormatError("embedding: ragged row at line " +
                              std::to_string(line_no));
        rows.push_back(std::move(row));
    }

    if (!have_header) throw FormatError("embedding: missing `COUNT DIM` header");
    if (!rows.empty() && rows.front().values.size() != header_dim)
        throw DimensionError(
            "embedding: header DIM " + std::to_string(header_dim) +
            " does not match row width " +
            std::to_string(rows.front().values.size()));
    if (rows.size() != header_count)
        warn("embedding: header COUNT " + std::to_string(header_count) +
             " does not match " + std::to_string(rows.size()) + " rows");

    EmbeddingStore store(header_dim, options);
    for (Row& row : rows) {
        auto [it, inserted] = store.vectors_.try_emplace(std::move(row.word));
        if (!inserted)
            warn("embedding: duplicate word '" + it->first +
                 "' (last occurrence wins)");
        it->second = Eigen::Map<Eigen::VectorXd>(
            row.values.data(), static_cast<Eigen::Index>(row.values.size()));
    }
    return store;
}

// ---------------------------------------------------------------------------
// Lookup
// ---------------------------------------------------------------------------

bool EmbeddingStore::contains(std::string_view token) const {
    return vectors_.count(std::string(token)) > 0;
}

namespace {

// Deterministic component of a bucket vector, uniform in [-1/sqrt(k),
// 1/sqrt(k)]; the full table would be buckets × k doubles, so entries are
// derived on demand instead.
double bucket_component(uint64_t seed, uint64_t bucket, uint64_t c, size_t k) {
    uint64_t h = mix64(mix64(seed ^ bucket) ^ c);
    double unit = static_cast<double>(h >> 11) * 0x1p-53;  // [0,1)
    return (2.0 * unit - 1.0) / std::sqrt(static_cast<double>(k));
}

}  // namespace

Eigen::VectorXd EmbeddingStore::subword_vector(std::string_view token) const {
    // code point boundaries of "<token>"
    std::string marked;
    marked.reserve(token.size() + 2);
    marked += '<';
    marked.append(token);
    marked += '>';
    std::vector<size_t> bounds;
    size_t i = 0;
    bounds.push_back(0);
    while (i < marked.size()) {
        uint32_t cp = 0;
        utf8_next(marked, i, cp);
        bounds.push_back(i);
    }
    size_t cps = bounds.size() - 1;

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    size_t grams = 0;
    for (size_t start = 0; start < cps; ++start) {
        for (size_t g = options_.min_gram; g <= options_.max_gram; ++g) {
            if (start + g > cps) break;
            std::string_view gram{marked.data() + bounds[start],
                                  bounds[start + g] - bounds[start]};
            uint64_t bucket = fnv1a(gram) % options_.subword_buckets;
            for (size_t c = 0; c < dim_; ++c) {
                sum[static_cast<Eigen::Index>(c)] +=
                    bucket_component(options_.subword_seed, bucket, c, dim_);
            }
            ++grams;
        }
    }
    if (grams == 0) {
        // token shorter than every n-gram: hash the marked token whole
        uint64_t bucket = fnv1a(marked) % options_.subword_buckets;
        for (size_t c = 0; c < dim_; ++c) {
            sum[static_cast<Eigen::Index>(c)] =
                bucket_component(options_.subword_seed, bucket, c, dim_);
        }
        grams = 1;
    }
    return sum / static_cast<double>(grams);
}

Eigen::VectorXd EmbeddingStore::embed_word(std::string_view token) const {
    auto it = vectors_.find(std::string(token));
    if (it != vectors_.end()) return it->second;
    return subword_vector(token);
}

BlockTensor EmbeddingStore::embed_block(const WordStrings& words,
                                        size_t n) const {
    const std::vector<std::string>* lists[3] = {
        &words.tag_words, &words.class_words, &words.text_words};
    BlockTensor tensor;
    for (int m = 0; m < 3; ++m) {
        Eigen::MatrixXd& mat = tensor.maps[static_cast<size_t>(m)];
        mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                    static_cast<Eigen::Index>(dim_));
        const auto& list = *lists[m];
        if (list.size() > n)
            throw LengthMismatchError("embedding: word list longer than n");
        for (size_t r = 0; r < list.size(); ++r) {
            Eigen::VectorXd v = embed_word(list[r]);
            if (!v.allFinite())
                throw Error("embedding: non-finite vector for token '" +
                            list[r] + "'");
            mat.row(static_cast<Eigen::Index>(r)) = v.transpose();
        }
    }
    return tensor;
}

}  // namespace semtext
