#pragma once

#include <Eigen/Core>
#include <array>
#include <utility>
#include <vector>

#include "semtext/model.hpp"

namespace semtext {

// ---------------------------------------------------------------------------
// Bidirectional LSTM over a sequence of block feature vectors
// ---------------------------------------------------------------------------

struct LstmCache {
    struct Step {
        Eigen::VectorXd xh;  // [input; previous hidden]
        Eigen::VectorXd i, f, o, g;  // post-activation gates
        Eigen::VectorXd c, tanh_c;
    };
    // steps[0] runs t = 0..m-1, steps[1] runs t = m-1..0 (stored by t)
    std::array<std::vector<Step>, kNumDirections> steps;
};

// Returns one 2h vector per block: forward hidden state stacked on backward.
// Both directions start from zero states.
std::vector<Eigen::VectorXd> bilstm_forward(
    const ConstParamViews& params, const std::vector<Eigen::VectorXd>& inputs,
    LstmCache* cache = nullptr);

// Backpropagates through time; accumulates into grads, returns d(inputs).
std::vector<Eigen::VectorXd> bilstm_backward(
    const ConstParamViews& params, const std::vector<Eigen::VectorXd>& inputs,
    const LstmCache& cache, const std::vector<Eigen::VectorXd>& d_hidden,
    ParamViews grads);

// ---------------------------------------------------------------------------
// Emission layer and linear-chain CRF
// ---------------------------------------------------------------------------

// Affine map of each 2h state to per-label scores; row t = block t.
Eigen::MatrixXd emission_scores(const ConstParamViews& params,
                                const std::vector<Eigen::VectorXd>& hidden);

// score(y) = start[y0] + sum_t E(t, y_t) + sum_t T(y_{t-1}, y_t) + stop[y_last]
double sequence_score(const ConstParamViews& params, const Eigen::MatrixXd& e,
                      const std::vector<Label>& labels);

// log of the sum of exp(score) over all 2^m label sequences
double crf_log_partition(const ConstParamViews& params,
                         const Eigen::MatrixXd& e);

// Highest-scoring label sequence and its score. Ties resolve toward the
// label with the lower index at every step.
std::pair<std::vector<Label>, double> viterbi_decode(
    const ConstParamViews& params, const Eigen::MatrixXd& e);

// Negative log-likelihood of the gold sequence; throws LengthMismatchError
// when the label count differs from the emission rows.
double sequence_nll(const ConstParamViews& params, const Eigen::MatrixXd& e,
                    const std::vector<Label>& gold);

// d(nll)/d(emissions); transition/start/stop gradients accumulate into grads.
Eigen::MatrixXd crf_backward(const ConstParamViews& params,
                             const Eigen::MatrixXd& e,
                             const std::vector<Label>& gold, ParamViews grads);

// Per-block posterior P(y_t = main); forward-backward marginals.
Eigen::VectorXd main_marginals(const ConstParamViews& params,
                               const Eigen::MatrixXd& e);

}  // namespace semtext
