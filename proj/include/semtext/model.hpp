#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "semtext/errors.hpp"

namespace semtext {

enum class Label : int { kBoilerplate = 0, kMain = 1 };
constexpr int kNumLabels = 2;

inline const char* label_name(Label l) {
    return l == Label::kMain ? "main" : "boilerplate";
}

// Hyperparameters plus the preprocessing settings that must travel with a
// trained model for inference to reproduce training conditions.
struct ModelConfig {
    size_t n = 50;  // words kept per word string
    size_t m = 85;  // max blocks per labeled sub-sequence
    size_t k = 50;  // embedding dimension

    std::vector<uint32_t> kernel_widths = {3, 5, 7};
    std::vector<uint32_t> kernel_counts = {128, 128, 256};
    size_t hidden = 512;  // LSTM units per direction

    // feature channels; disabling one zeroes its map end to end
    bool use_tags = true;
    bool use_classes = true;
    bool use_text = true;

    bool conv_relu = false;    // optional activation before max-pooling
    bool include_ids = false;  // id attributes join the class path

    uint64_t subword_seed = 42;
    uint32_t subword_buckets = 1u << 20;
    std::string embeddings_path;  // advisory: where vectors came from

    // Kernel groups actually used: widths wider than n are skipped (the
    // zero-padded maps are only n rows tall). validate() warns about them.
    std::vector<size_t> active_groups() const;
    size_t filters_per_map() const;  // sum of active kernel counts
    size_t feature_size() const;     // 3 * filters_per_map()

    void validate() const;  // throws ConfigError on nonsense
};

bool operator==(const ModelConfig& a, const ModelConfig& b);

// ---------------------------------------------------------------------------
// Parameter layout
// ---------------------------------------------------------------------------

enum class Gate : size_t { kInput = 0, kForget = 1, kOutput = 2, kCell = 3 };
constexpr size_t kNumGates = 4;
constexpr size_t kNumDirections = 2;  // 0 forward, 1 backward

// Window into a flat parameter vector laid out as:
//   per map, per active kernel group: conv weights (v*k × count), bias
//   per direction, per gate: LSTM weights (h × (input+h)), then the biases
//   emission weights (2 × 2h), emission bias (2)
//   transitions (2 × 2), start transitions (2), stop transitions (2)
// The same layout serves parameters and their gradients.
template <typename Ptr>
class BasicParamViews {
    static constexpr bool kConst =
        std::is_const_v<std::remove_pointer_t<Ptr>>;
    using Mat = std::conditional_t<kConst, const Eigen::MatrixXd,
                                   Eigen::MatrixXd>;
    using Vec = std::conditional_t<kConst, const Eigen::VectorXd,
                                   Eigen::VectorXd>;

  public:
    using MatMap = Eigen::Map<Mat>;
    using VecMap = Eigen::Map<Vec>;

    BasicParamViews(const ModelConfig& config, Ptr base)
        : config_(&config), base_(base) {
        size_t off = 0;
        size_t vk_input = config.feature_size();
        size_t h = config.hidden;
        groups_ = config.active_groups();
        for (size_t map = 0; map < 3; ++map) {
            for (size_t g : groups_) {
                size_t rows = config.kernel_widths[g] * config.k;
                size_t cols = config.kernel_counts[g];
                conv_w_off_[map].push_back(off);
                off += rows * cols;
                conv_b_off_[map].push_back(off);
                off += cols;
            }
        }
        for (size_t dir = 0; dir < kNumDirections; ++dir) {
            for (size_t gate = 0; gate < kNumGates; ++gate) {
                lstm_w_off_[dir][gate] = off;
                off += h * (vk_input + h);
            }
            for (size_t gate = 0; gate < kNumGates; ++gate) {
                lstm_b_off_[dir][gate] = off;
                off += h;
            }
        }
        emit_w_off_ = off;
        off += static_cast<size_t>(kNumLabels) * 2 * h;
        emit_b_off_ = off;
        off += kNumLabels;
        trans_off_ = off;
        off += static_cast<size_t>(kNumLabels) * kNumLabels;
        start_off_ = off;
        off += kNumLabels;
        stop_off_ = off;
        off += kNumLabels;
        total_ = off;
    }

    // mutable views convert to read-only views; templated so it never
    // shadows the copy constructor of the mutable instantiation
    template <typename P = Ptr>
        requires std::is_same_v<P, const double*>
    BasicParamViews(const BasicParamViews<double*>& other)
        : BasicParamViews(other.config(), other.data()) {}

    size_t total() const { return total_; }
    const ModelConfig& config() const { return *config_; }
    Ptr data() const { return base_; }

    // group_index counts active groups in config order
    MatMap conv_w(size_t map, size_t group_index) const {
        size_t g = groups_[group_index];
        return MatMap(base_ + conv_w_off_[map][group_index],
                      static_cast<Eigen::Index>(config_->kernel_widths[g] *
                                                config_->k),
                      static_cast<Eigen::Index>(config_->kernel_counts[g]));
    }
    VecMap conv_b(size_t map, size_t group_index) const {
        size_t g = groups_[group_index];
        return VecMap(base_ + conv_b_off_[map][group_index],
                      static_cast<Eigen::Index>(config_->kernel_counts[g]));
    }

    MatMap lstm_w(size_t dir, Gate gate) const {
        auto h = static_cast<Eigen::Index>(config_->hidden);
        auto in = static_cast<Eigen::Index>(config_->feature_size() +
                                            config_->hidden);
        return MatMap(base_ + lstm_w_off_[dir][static_cast<size_t>(gate)], h,
                      in);
    }
    VecMap lstm_b(size_t dir, Gate gate) const {
        return VecMap(base_ + lstm_b_off_[dir][static_cast<size_t>(gate)],
                      static_cast<Eigen::Index>(config_->hidden));
    }

    MatMap emit_w() const {
        return MatMap(base_ + emit_w_off_, kNumLabels,
                      static_cast<Eigen::Index>(2 * config_->hidden));
    }
    VecMap emit_b() const { return VecMap(base_ + emit_b_off_, kNumLabels); }

    MatMap trans() const {
        return MatMap(base_ + trans_off_, kNumLabels, kNumLabels);
    }
    VecMap trans_start() const { return VecMap(base_ + start_off_, kNumLabels); }
    VecMap trans_stop() const { return VecMap(base_ + stop_off_, kNumLabels); }

  private:
    const ModelConfig* config_;
    Ptr base_;
    std::vector<size_t> groups_;
    std::array<std::vector<size_t>, 3> conv_w_off_;
    std::array<std::vector<size_t>, 3> conv_b_off_;
    std::array<std::array<size_t, kNumGates>, kNumDirections> lstm_w_off_{};
    std::array<std::array<size_t, kNumGates>, kNumDirections> lstm_b_off_{};
    size_t emit_w_off_ = 0, emit_b_off_ = 0;
    size_t trans_off_ = 0, start_off_ = 0, stop_off_ = 0;
    size_t total_ = 0;
};

using ParamViews = BasicParamViews<double*>;
using ConstParamViews = BasicParamViews<const double*>;

size_t param_count(const ModelConfig& config);

// All learnable weights in one flat vector.
struct ModelParams {
    ModelConfig config;
    Eigen::VectorXd flat;

    static ModelParams init(const ModelConfig& config, uint64_t seed);

    ParamViews views() { return ParamViews(config, flat.data()); }
    ConstParamViews views() const {
        return ConstParamViews(config, flat.data());
    }
};

}  // namespace semtext
