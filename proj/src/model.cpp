#include "semtext/model.hpp"

#include <cmath>
#include <random>

#include "semtext/util.hpp"

namespace semtext {

std::vector<size_t> ModelConfig::active_groups() const {
    std::vector<size_t> out;
    for (size_t g = 0; g < kernel_widths.size(); ++g) {
        if (kernel_widths[g] <= n) out.push_back(g);
    }
    return out;
}

size_t ModelConfig::filters_per_map() const {
    size_t total = 0;
    for (size_t g : active_groups()) total += kernel_counts[g];
    return total;
}

size_t ModelConfig::feature_size() const { return 3 * filters_per_map(); }

void ModelConfig::validate() const {
    if (n == 0 || m == 0 || k == 0 || hidden == 0)
        throw ConfigError("model dimensions must be positive");
    if (kernel_widths.empty())
        throw ConfigError("at least one kernel group is required");
    if (kernel_widths.size() != kernel_counts.size())
        throw ConfigError("kernel widths and counts differ in length");
    for (size_t g = 0; g < kernel_widths.size(); ++g) {
        if (kernel_widths[g] == 0 || kernel_counts[g] == 0)
            throw ConfigError("kernel widths and counts must be positive");
        if (kernel_widths[g] > n)
            warn("kernel width " + std::to_string(kernel_widths[g]) +
                 " exceeds word limit " + std::to_string(n) + "; skipped");
    }
    if (filters_per_map() == 0)
        throw ConfigError("every kernel group is wider than the word limit");
    if (!use_tags && !use_classes && !use_text)
        throw ConfigError("at least one feature channel must be enabled");
    if (subword_buckets == 0)
        throw ConfigError("subword bucket count must be positive");
}

bool operator==(const ModelConfig& a, const ModelConfig& b) {
    return a.n == b.n && a.m == b.m && a.k == b.k &&
           a.kernel_widths == b.kernel_widths &&
           a.kernel_counts == b.kernel_counts && a.hidden == b.hidden &&
           a.use_tags == b.use_tags && a.use_classes == b.use_classes &&
           a.use_text == b.use_text && a.conv_relu == b.conv_relu &&
           a.include_ids == b.include_ids &&
           a.subword_seed == b.subword_seed &&
           a.subword_buckets == b.subword_buckets &&
           a.embeddings_path == b.embeddings_path;
}

size_t param_count(const ModelConfig& config) {
    return ConstParamViews(config, nullptr).total();
}

namespace {

// deterministic uniform in [-bound, bound); avoids the library distribution
// so the same seed always yields the same weights
class UniformSource {
  public:
    explicit UniformSource(uint64_t seed) : rng_(seed) {}
    double next(double bound) {
        double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1)
        return (2.0 * u - 1.0) * bound;
    }
    void fill(Eigen::Map<Eigen::MatrixXd> m, double bound) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                m(r, c) = next(bound);
    }
    void fill(Eigen::Map<Eigen::VectorXd> v, double bound) {
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = next(bound);
    }

  private:
    std::mt19937_64 rng_;
};

}  // namespace

ModelParams ModelParams::init(const ModelConfig& config, uint64_t seed) {
    config.validate();
    ModelParams params;
    params.config = config;
    params.flat = Eigen::VectorXd::Zero(
        static_cast<Eigen::Index>(param_count(config)));
    ParamViews v = params.views();
    UniformSource src(seed);

    std::vector<size_t> groups = config.active_groups();
    for (size_t map = 0; map < 3; ++map) {
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            double fan_in =
                static_cast<double>(config.kernel_widths[groups[gi]]) *
                static_cast<double>(config.k);
            src.fill(v.conv_w(map, gi), std::sqrt(6.0 / (fan_in + 1.0)));
            // conv biases stay zero
        }
    }
    double lstm_bound = std::sqrt(1.0 / static_cast<double>(config.hidden));
    for (size_t dir = 0; dir < kNumDirections; ++dir) {
        for (size_t gate = 0; gate < kNumGates; ++gate)
            src.fill(v.lstm_w(dir, static_cast<Gate>(gate)), lstm_bound);
        v.lstm_b(dir, Gate::kForget).setOnes();  // bias the gate open
    }
    src.fill(v.emit_w(), lstm_bound);
    // emission bias and all transition scores start at zero
    return params;
}

}  // namespace semtext
