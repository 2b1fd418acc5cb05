#pragma once

#include <Eigen/Core>
#include <vector>

#include "semtext/embedding.hpp"
#include "semtext/encoder.hpp"
#include "semtext/labeler.hpp"
#include "semtext/model.hpp"

namespace semtext {

// Negative log-likelihood of gold labels for one page's block tensors.
double sequence_loss(const ModelParams& params,
                     const std::vector<BlockTensor>& blocks,
                     const std::vector<Label>& gold);

// Same, but also accumulates d(loss)/d(params) into grad, which must
// already be sized param_count(params.config).
double sequence_loss_grad(const ModelParams& params,
                          const std::vector<BlockTensor>& blocks,
                          const std::vector<Label>& gold,
                          Eigen::VectorXd& grad);

// Most likely label per block (Viterbi).
std::vector<Label> predict_labels(const ModelParams& params,
                                  const std::vector<BlockTensor>& blocks);

// Posterior probability that each block is main content.
Eigen::VectorXd predict_main_scores(const ModelParams& params,
                                    const std::vector<BlockTensor>& blocks);

}  // namespace semtext
