#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "semtext/embedding.hpp"
#include "semtext/model.hpp"

namespace semtext {

// One valid convolution of a single v-by-k filter over an n-by-k map:
// out[p] = sum(W .* M.rows(p..p+v-1)) + b, for p in [0, n-v].
// Throws ShapeError when the filter is wider than the map or k differs.
Eigen::VectorXd conv_feature(const Eigen::MatrixXd& map,
                             const Eigen::MatrixXd& filter, double bias);

// What the backward pass needs from a forward run: where each pooled max
// came from and whether the optional relu clipped it.
struct EncodeCache {
    // [map][group] -> per-filter window index of the pooled maximum
    std::array<std::vector<Eigen::VectorXi>, 3> argmax;
    // [map][group] -> per-filter pre-activation value at that window
    std::array<std::vector<Eigen::VectorXd>, 3> pre_act;
};

// Block tensor -> feature vector of size config.feature_size(). Features are
// laid out map-major: all tag-map filters (kernel groups in config order),
// then class map, then text map.
Eigen::VectorXd encode_block(const ConstParamViews& params,
                             const BlockTensor& tensor,
                             EncodeCache* cache = nullptr);

// Accumulates parameter gradients for one block given the gradient of the
// loss in its feature vector; returns the gradient in the block tensor.
BlockTensor encode_backward(const ConstParamViews& params,
                            const BlockTensor& tensor,
                            const EncodeCache& cache,
                            const Eigen::VectorXd& d_features,
                            ParamViews grads);

}  // namespace semtext
