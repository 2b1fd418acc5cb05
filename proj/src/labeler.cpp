#include "semtext/labeler.hpp"

#include <cmath>

#include "semtext/errors.hpp"

namespace semtext {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& x) {
    return 1.0 / (1.0 + (-x.array()).exp());
}

double log_sum_exp(const Eigen::VectorXd& x) {
    double mx = x.maxCoeff();
    return mx + std::log((x.array() - mx).exp().sum());
}

// Runs one direction over the sequence; `order` maps processing step s to
// the block index t. Hidden states land in halves[t].
void run_direction(const ConstParamViews& params,
                   const std::vector<Eigen::VectorXd>& inputs, size_t dir,
                   const std::vector<Eigen::Index>& order,
                   std::vector<LstmCache::Step>& steps,
                   std::vector<Eigen::VectorXd>& hidden_out) {
    auto h = static_cast<Eigen::Index>(params.config().hidden);
    auto in_dim = static_cast<Eigen::Index>(params.config().feature_size());
    auto w_i = params.lstm_w(dir, Gate::kInput);
    auto w_f = params.lstm_w(dir, Gate::kForget);
    auto w_o = params.lstm_w(dir, Gate::kOutput);
    auto w_g = params.lstm_w(dir, Gate::kCell);
    auto b_i = params.lstm_b(dir, Gate::kInput);
    auto b_f = params.lstm_b(dir, Gate::kForget);
    auto b_o = params.lstm_b(dir, Gate::kOutput);
    auto b_g = params.lstm_b(dir, Gate::kCell);

    Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h);
    steps.resize(inputs.size());
    for (Eigen::Index t : order) {
        LstmCache::Step& s = steps[static_cast<size_t>(t)];
        s.xh.resize(in_dim + h);
        s.xh << inputs[static_cast<size_t>(t)], h_prev;
        s.i = sigmoid(w_i * s.xh + b_i);
        s.f = sigmoid(w_f * s.xh + b_f);
        s.o = sigmoid(w_o * s.xh + b_o);
        s.g = (w_g * s.xh + b_g).array().tanh();
        s.c = s.f.cwiseProduct(c_prev) + s.i.cwiseProduct(s.g);
        s.tanh_c = s.c.array().tanh();
        Eigen::VectorXd h_t = s.o.cwiseProduct(s.tanh_c);
        hidden_out[static_cast<size_t>(t)].segment(
            static_cast<Eigen::Index>(dir) * h, h) = h_t;
        h_prev = std::move(h_t);
        c_prev = s.c;
    }
}

std::vector<Eigen::Index> direction_order(size_t dir, size_t m) {
    std::vector<Eigen::Index> order(m);
    for (size_t s = 0; s < m; ++s)
        order[s] = static_cast<Eigen::Index>(dir == 0 ? s : m - 1 - s);
    return order;
}

}  // namespace

std::vector<Eigen::VectorXd> bilstm_forward(
    const ConstParamViews& params, const std::vector<Eigen::VectorXd>& inputs,
    LstmCache* cache) {
    auto h = static_cast<Eigen::Index>(params.config().hidden);
    auto in_dim = static_cast<Eigen::Index>(params.config().feature_size());
    for (const Eigen::VectorXd& x : inputs)
        if (x.size() != in_dim)
            throw ShapeError("feature vector does not match model input size");
    std::vector<Eigen::VectorXd> hidden(
        inputs.size(), Eigen::VectorXd::Zero(2 * h));
    LstmCache local;
    LstmCache& c = cache ? *cache : local;
    for (size_t dir = 0; dir < kNumDirections; ++dir)
        run_direction(params, inputs, dir,
                      direction_order(dir, inputs.size()), c.steps[dir],
                      hidden);
    return hidden;
}

std::vector<Eigen::VectorXd> bilstm_backward(
    const ConstParamViews& params, const std::vector<Eigen::VectorXd>& inputs,
    const LstmCache& cache, const std::vector<Eigen::VectorXd>& d_hidden,
    ParamViews grads) {
    auto h = static_cast<Eigen::Index>(params.config().hidden);
    auto in_dim = static_cast<Eigen::Index>(params.config().feature_size());
    size_t m = inputs.size();
    std::vector<Eigen::VectorXd> d_inputs(m, Eigen::VectorXd::Zero(in_dim));

    for (size_t dir = 0; dir < kNumDirections; ++dir) {
        auto w_i = params.lstm_w(dir, Gate::kInput);
        auto w_f = params.lstm_w(dir, Gate::kForget);
        auto w_o = params.lstm_w(dir, Gate::kOutput);
        auto w_g = params.lstm_w(dir, Gate::kCell);
        auto dw_i = grads.lstm_w(dir, Gate::kInput);
        auto dw_f = grads.lstm_w(dir, Gate::kForget);
        auto dw_o = grads.lstm_w(dir, Gate::kOutput);
        auto dw_g = grads.lstm_w(dir, Gate::kCell);
        auto db_i = grads.lstm_b(dir, Gate::kInput);
        auto db_f = grads.lstm_b(dir, Gate::kForget);
        auto db_o = grads.lstm_b(dir, Gate::kOutput);
        auto db_g = grads.lstm_b(dir, Gate::kCell);

        std::vector<Eigen::Index> order = direction_order(dir, m);
        Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(h);
        Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h);
        // walk processing order backwards
        for (size_t s = m; s-- > 0;) {
            auto t = static_cast<size_t>(order[s]);
            const LstmCache::Step& step = cache.steps[dir][t];
            Eigen::VectorXd dh =
                d_hidden[t].segment(static_cast<Eigen::Index>(dir) * h, h) +
                dh_next;
            Eigen::VectorXd d_o = dh.cwiseProduct(step.tanh_c);
            Eigen::VectorXd dc =
                dh.cwiseProduct(step.o)
                    .cwiseProduct(
                        (1.0 - step.tanh_c.array().square()).matrix()) +
                dc_next;
            // cell state feeding this step came from the previous processing
            // step; zero at the sequence edge
            Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h);
            if (s > 0)
                c_prev = cache.steps[dir][static_cast<size_t>(order[s - 1])].c;
            Eigen::VectorXd d_i = dc.cwiseProduct(step.g);
            Eigen::VectorXd d_g = dc.cwiseProduct(step.i);
            Eigen::VectorXd d_f = dc.cwiseProduct(c_prev);
            dc_next = dc.cwiseProduct(step.f);

            Eigen::VectorXd a_i = d_i.cwiseProduct(step.i)
                                      .cwiseProduct((1.0 - step.i.array())
                                                        .matrix());
            Eigen::VectorXd a_f = d_f.cwiseProduct(step.f)
                                      .cwiseProduct((1.0 - step.f.array())
                                                        .matrix());
            Eigen::VectorXd a_o = d_o.cwiseProduct(step.o)
                                      .cwiseProduct((1.0 - step.o.array())
                                                        .matrix());
            Eigen::VectorXd a_g = d_g.cwiseProduct(
                (1.0 - step.g.array().square()).matrix());

            dw_i += a_i * step.xh.transpose();
            dw_f += a_f * step.xh.transpose();
            dw_o += a_o * step.xh.transpose();
            dw_g += a_g * step.xh.transpose();
            db_i += a_i;
            db_f += a_f;
            db_o += a_o;
            db_g += a_g;

            Eigen::VectorXd dxh = w_i.transpose() * a_i +
                                  w_f.transpose() * a_f +
                                  w_o.transpose() * a_o +
                                  w_g.transpose() * a_g;
            d_inputs[t] += dxh.head(in_dim);
            dh_next = dxh.tail(h);
        }
    }
    return d_inputs;
}

Eigen::MatrixXd emission_scores(const ConstParamViews& params,
                                const std::vector<Eigen::VectorXd>& hidden) {
    auto w = params.emit_w();
    auto b = params.emit_b();
    Eigen::MatrixXd e(static_cast<Eigen::Index>(hidden.size()), kNumLabels);
    for (size_t t = 0; t < hidden.size(); ++t)
        e.row(static_cast<Eigen::Index>(t)) = (w * hidden[t] + b).transpose();
    return e;
}

double sequence_score(const ConstParamViews& params, const Eigen::MatrixXd& e,
                      const std::vector<Label>& labels) {
    if (static_cast<Eigen::Index>(labels.size()) != e.rows())
        throw LengthMismatchError("label count does not match block count");
    if (labels.empty()) return 0.0;
    auto t_mat = params.trans();
    double score = params.trans_start()[static_cast<int>(labels[0])];
    for (size_t t = 0; t < labels.size(); ++t) {
        score += e(static_cast<Eigen::Index>(t), static_cast<int>(labels[t]));
        if (t > 0)
            score += t_mat(static_cast<int>(labels[t - 1]),
                           static_cast<int>(labels[t]));
    }
    score += params.trans_stop()[static_cast<int>(labels.back())];
    return score;
}

double crf_log_partition(const ConstParamViews& params,
                         const Eigen::MatrixXd& e) {
    Eigen::Index m = e.rows();
    if (m == 0) return 0.0;
    auto t_mat = params.trans();
    Eigen::VectorXd alpha =
        params.trans_start() + e.row(0).transpose();
    for (Eigen::Index t = 1; t < m; ++t) {
        Eigen::VectorXd next(kNumLabels);
        for (int j = 0; j < kNumLabels; ++j)
            next[j] = log_sum_exp(alpha + t_mat.col(j)) + e(t, j);
        alpha = std::move(next);
    }
    return log_sum_exp(alpha + params.trans_stop());
}

std::pair<std::vector<Label>, double> viterbi_decode(
    const ConstParamViews& params, const Eigen::MatrixXd& e) {
    Eigen::Index m = e.rows();
    if (m == 0) return {{}, 0.0};
    auto t_mat = params.trans();
    Eigen::VectorXd delta = params.trans_start() + e.row(0).transpose();
    Eigen::MatrixXi back(m, kNumLabels);
    for (Eigen::Index t = 1; t < m; ++t) {
        Eigen::VectorXd next(kNumLabels);
        for (int j = 0; j < kNumLabels; ++j) {
            int best = 0;
            double best_score = delta[0] + t_mat(0, j);
            for (int i = 1; i < kNumLabels; ++i) {
                double s = delta[i] + t_mat(i, j);
                if (s > best_score) {  // strict: ties keep the lower label
                    best_score = s;
                    best = i;
                }
            }
            back(t, j) = best;
            next[j] = best_score + e(t, j);
        }
        delta = std::move(next);
    }
    delta += params.trans_stop();
    int last = 0;
    for (int j = 1; j < kNumLabels; ++j)
        if (delta[j] > delta[last]) last = j;
    std::vector<Label> path(static_cast<size_t>(m));
    path[static_cast<size_t>(m - 1)] = static_cast<Label>(last);
    for (Eigen::Index t = m - 1; t > 0; --t) {
        last = back(t, last);
        path[static_cast<size_t>(t - 1)] = static_cast<Label>(last);
    }
    return {std::move(path), delta[static_cast<int>(path.back())]};
}

double sequence_nll(const ConstParamViews& params, const Eigen::MatrixXd& e,
                    const std::vector<Label>& gold) {
    return crf_log_partition(params, e) - sequence_score(params, e, gold);
}

namespace {

// alpha(t, j): log-sum of all prefixes ending at t with label j;
// beta(t, i): log-sum of all suffix extensions from label i at t, including
// the stop transition.
void forward_backward(const ConstParamViews& params, const Eigen::MatrixXd& e,
                      Eigen::MatrixXd& alpha, Eigen::MatrixXd& beta,
                      double& log_z) {
    Eigen::Index m = e.rows();
    auto t_mat = params.trans();
    alpha.resize(m, kNumLabels);
    beta.resize(m, kNumLabels);
    alpha.row(0) = (params.trans_start() + e.row(0).transpose()).transpose();
    for (Eigen::Index t = 1; t < m; ++t)
        for (int j = 0; j < kNumLabels; ++j)
            alpha(t, j) =
                log_sum_exp(alpha.row(t - 1).transpose() + t_mat.col(j)) +
                e(t, j);
    beta.row(m - 1) = params.trans_stop().transpose();
    for (Eigen::Index t = m - 2; t >= 0; --t)
        for (int i = 0; i < kNumLabels; ++i)
            beta(t, i) = log_sum_exp(t_mat.row(i).transpose() +
                                     e.row(t + 1).transpose() +
                                     beta.row(t + 1).transpose());
    log_z = log_sum_exp(alpha.row(m - 1).transpose() +
                        params.trans_stop());
}

}  // namespace

Eigen::MatrixXd crf_backward(const ConstParamViews& params,
                             const Eigen::MatrixXd& e,
                             const std::vector<Label>& gold,
                             ParamViews grads) {
    Eigen::Index m = e.rows();
    if (static_cast<Eigen::Index>(gold.size()) != m)
        throw LengthMismatchError("label count does not match block count");
    Eigen::MatrixXd d_e = Eigen::MatrixXd::Zero(m, kNumLabels);
    if (m == 0) return d_e;
    Eigen::MatrixXd alpha, beta;
    double log_z = 0.0;
    forward_backward(params, e, alpha, beta, log_z);
    auto t_mat = params.trans();
    auto d_t = grads.trans();
    auto d_start = grads.trans_start();
    auto d_stop = grads.trans_stop();

    for (Eigen::Index t = 0; t < m; ++t)
        for (int j = 0; j < kNumLabels; ++j)
            d_e(t, j) = std::exp(alpha(t, j) + beta(t, j) - log_z) -
                        (static_cast<int>(gold[static_cast<size_t>(t)]) == j
                             ? 1.0
                             : 0.0);
    for (Eigen::Index t = 1; t < m; ++t)
        for (int i = 0; i < kNumLabels; ++i)
            for (int j = 0; j < kNumLabels; ++j) {
                double marg = std::exp(alpha(t - 1, i) + t_mat(i, j) +
                                       e(t, j) + beta(t, j) - log_z);
                double gold_hit =
                    (static_cast<int>(gold[static_cast<size_t>(t - 1)]) == i &&
                     static_cast<int>(gold[static_cast<size_t>(t)]) == j)
                        ? 1.0
                        : 0.0;
                d_t(i, j) += marg - gold_hit;
            }
    for (int j = 0; j < kNumLabels; ++j) {
        double mu0 = std::exp(alpha(0, j) + beta(0, j) - log_z);
        d_start[j] += mu0 - (static_cast<int>(gold[0]) == j ? 1.0 : 0.0);
        double mul = std::exp(alpha(m - 1, j) + beta(m - 1, j) - log_z);
        d_stop[j] +=
            mul - (static_cast<int>(gold[static_cast<size_t>(m - 1)]) == j
                       ? 1.0
                       : 0.0);
    }
    return d_e;
}

Eigen::VectorXd main_marginals(const ConstParamViews& params,
                               const Eigen::MatrixXd& e) {
    Eigen::Index m = e.rows();
    Eigen::VectorXd out(m);
    if (m == 0) return out;
    Eigen::MatrixXd alpha, beta;
    double log_z = 0.0;
    forward_backward(params, e, alpha, beta, log_z);
    for (Eigen::Index t = 0; t < m; ++t)
        out[t] = std::exp(alpha(t, static_cast<int>(Label::kMain)) +
                          beta(t, static_cast<int>(Label::kMain)) - log_z);
    return out;
}

}  // namespace semtext
