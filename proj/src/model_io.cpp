#include "semtext/model_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>

#include "semtext/errors.hpp"

namespace semtext {

namespace {

constexpr char kMagic[4] = {'S', 'E', 'M', 'T'};

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
    put_u64(out, std::bit_cast<uint64_t>(v));
}

class Reader {
  public:
    Reader(const std::string& data, size_t pos) : data_(data), pos_(pos) {}

    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<uint32_t>(
                     static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        pos_ += 4;
        return v;
    }

    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<uint64_t>(
                     static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        pos_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string bytes(size_t count) {
        need(count);
        std::string s = data_.substr(pos_, count);
        pos_ += count;
        return s;
    }

    size_t pos() const { return pos_; }

  private:
    void need(size_t count) {
        if (pos_ + count > data_.size())
            throw FormatError("model file header is malformed");
    }

    const std::string& data_;
    size_t pos_;
};

uint32_t checksum(const std::string& data, size_t from, size_t to) {
    return static_cast<uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(data.data() + from),
              static_cast<uInt>(to - from)));
}

}  // namespace

void save_model(const ModelParams& params, const std::string& path) {
    const ModelConfig& c = params.config;
    std::string out(kMagic, 4);
    put_u32(out, kModelFormatVersion);
    size_t body_start = out.size();

    put_u64(out, c.n);
    put_u64(out, c.m);
    put_u64(out, c.k);
    put_u64(out, c.hidden);
    put_u32(out, static_cast<uint32_t>(c.kernel_widths.size()));
    for (size_t g = 0; g < c.kernel_widths.size(); ++g) {
        put_u32(out, c.kernel_widths[g]);
        put_u32(out, c.kernel_counts[g]);
    }
    uint8_t flags = 0;
    if (c.use_tags) flags |= 1;
    if (c.use_classes) flags |= 2;
    if (c.use_text) flags |= 4;
    if (c.conv_relu) flags |= 8;
    if (c.include_ids) flags |= 16;
    out.push_back(static_cast<char>(flags));
    put_u64(out, c.subword_seed);
    put_u32(out, c.subword_buckets);
    put_u32(out, static_cast<uint32_t>(c.embeddings_path.size()));
    out += c.embeddings_path;

    put_u64(out, static_cast<uint64_t>(params.flat.size()));
    for (Eigen::Index i = 0; i < params.flat.size(); ++i)
        put_f64(out, params.flat[i]);

    put_u32(out, checksum(out, body_start, out.size()));

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write model file: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("failed writing model file: " + path);
}

ModelParams load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open model file: " + path);
    std::string data((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());

    if (data.size() < 8 || std::memcmp(data.data(), kMagic, 4) != 0)
        throw FormatError("not a model file (bad magic): " + path);
    Reader header(data, 4);
    uint32_t version = header.u32();
    if (version != kModelFormatVersion)
        throw VersionError("model format version " + std::to_string(version) +
                           " is not supported (expected " +
                           std::to_string(kModelFormatVersion) + ")");
    if (data.size() < 12 ||
        checksum(data, 8, data.size() - 4) !=
            Reader(data, data.size() - 4).u32())
        throw ChecksumError("model file is corrupt or truncated: " + path);

    Reader r(data, 8);
    ModelParams params;
    ModelConfig& c = params.config;
    c.n = r.u64();
    c.m = r.u64();
    c.k = r.u64();
    c.hidden = r.u64();
    uint32_t group_count = r.u32();
    c.kernel_widths.clear();
    c.kernel_counts.clear();
    for (uint32_t g = 0; g < group_count; ++g) {
        c.kernel_widths.push_back(r.u32());
        c.kernel_counts.push_back(r.u32());
    }
    uint8_t flags = static_cast<unsigned char>(r.bytes(1)[0]);
    c.use_tags = flags & 1;
    c.use_classes = flags & 2;
    c.use_text = flags & 4;
    c.conv_relu = flags & 8;
    c.include_ids = flags & 16;
    c.subword_seed = r.u64();
    c.subword_buckets = r.u32();
    c.embeddings_path = r.bytes(r.u32());

    uint64_t count = r.u64();
    c.validate();
    if (count != param_count(c))
        throw FormatError("model file parameter count does not match its "
                          "configuration");
    params.flat.resize(static_cast<Eigen::Index>(count));
    for (uint64_t i = 0; i < count; ++i)
        params.flat[static_cast<Eigen::Index>(i)] = r.f64();
    if (r.pos() != data.size() - 4)
        throw FormatError("model file has trailing data");
    return params;
}

}  // namespace semtext
