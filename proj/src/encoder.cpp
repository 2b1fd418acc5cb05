#include "semtext/encoder.hpp"

#include "semtext/errors.hpp"

namespace semtext {

namespace {

// Unrolls every window of height v into one row: window starting at p
// becomes [M.row(p), M.row(p+1), ..., M.row(p+v-1)]. A filter stored as a
// (v*k)-column with the same order turns convolution into one GEMM.
Eigen::MatrixXd window_rows(const Eigen::MatrixXd& map, Eigen::Index v) {
    Eigen::Index n = map.rows(), k = map.cols();
    Eigen::Index positions = n - v + 1;
    Eigen::MatrixXd x(positions, v * k);
    for (Eigen::Index p = 0; p < positions; ++p)
        for (Eigen::Index r = 0; r < v; ++r)
            x.block(p, r * k, 1, k) = map.row(p + r);
    return x;
}

}  // namespace

Eigen::VectorXd conv_feature(const Eigen::MatrixXd& map,
                             const Eigen::MatrixXd& filter, double bias) {
    if (filter.rows() > map.rows())
        throw ShapeError("filter taller than feature map");
    if (filter.cols() != map.cols())
        throw ShapeError("filter and feature map disagree on columns");
    Eigen::Index v = filter.rows();
    Eigen::Index positions = map.rows() - v + 1;
    Eigen::VectorXd out(positions);
    for (Eigen::Index p = 0; p < positions; ++p)
        out[p] = (filter.array() * map.middleRows(p, v).array()).sum() + bias;
    return out;
}

Eigen::VectorXd encode_block(const ConstParamViews& params,
                             const BlockTensor& tensor, EncodeCache* cache) {
    const ModelConfig& config = params.config();
    std::vector<size_t> groups = config.active_groups();
    Eigen::VectorXd features(
        static_cast<Eigen::Index>(config.feature_size()));
    Eigen::Index out_pos = 0;
    for (size_t map = 0; map < 3; ++map) {
        const Eigen::MatrixXd& m = tensor.maps[map];
        if (m.rows() != static_cast<Eigen::Index>(config.n) ||
            m.cols() != static_cast<Eigen::Index>(config.k))
            throw ShapeError("block tensor does not match model dimensions");
        if (cache) {
            cache->argmax[map].assign(groups.size(), Eigen::VectorXi());
            cache->pre_act[map].assign(groups.size(), Eigen::VectorXd());
        }
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            auto v = static_cast<Eigen::Index>(
                config.kernel_widths[groups[gi]]);
            auto w = params.conv_w(map, gi);
            auto b = params.conv_b(map, gi);
            Eigen::MatrixXd pre = window_rows(m, v) * w;  // positions x count
            pre.rowwise() += b.transpose();
            Eigen::Index count = pre.cols();
            Eigen::VectorXi best(count);
            Eigen::VectorXd best_pre(count);
            for (Eigen::Index f = 0; f < count; ++f) {
                Eigen::Index p = 0;
                double top = pre.col(f).maxCoeff(&p);  // first max wins ties
                best[f] = static_cast<int>(p);
                best_pre[f] = top;
                features[out_pos + f] =
                    config.conv_relu ? std::max(0.0, top) : top;
            }
            if (cache) {
                cache->argmax[map][gi] = std::move(best);
                cache->pre_act[map][gi] = std::move(best_pre);
            }
            out_pos += count;
        }
    }
    return features;
}

BlockTensor encode_backward(const ConstParamViews& params,
                            const BlockTensor& tensor,
                            const EncodeCache& cache,
                            const Eigen::VectorXd& d_features,
                            ParamViews grads) {
    const ModelConfig& config = params.config();
    std::vector<size_t> groups = config.active_groups();
    BlockTensor d_tensor;
    for (size_t map = 0; map < 3; ++map)
        d_tensor.maps[map] = Eigen::MatrixXd::Zero(
            static_cast<Eigen::Index>(config.n),
            static_cast<Eigen::Index>(config.k));

    Eigen::Index pos = 0;
    auto k = static_cast<Eigen::Index>(config.k);
    for (size_t map = 0; map < 3; ++map) {
        const Eigen::MatrixXd& m = tensor.maps[map];
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            auto v = static_cast<Eigen::Index>(
                config.kernel_widths[groups[gi]]);
            auto count = static_cast<Eigen::Index>(
                config.kernel_counts[groups[gi]]);
            auto w = params.conv_w(map, gi);
            auto dw = grads.conv_w(map, gi);
            auto db = grads.conv_b(map, gi);
            const Eigen::VectorXi& best = cache.argmax[map][gi];
            const Eigen::VectorXd& pre = cache.pre_act[map][gi];
            for (Eigen::Index f = 0; f < count; ++f) {
                double g = d_features[pos + f];
                if (g == 0.0) continue;
                if (config.conv_relu && pre[f] <= 0.0) continue;
                Eigen::Index p = best[f];
                db[f] += g;
                for (Eigen::Index r = 0; r < v; ++r) {
                    dw.col(f).segment(r * k, k) += g * m.row(p + r);
                    d_tensor.maps[map].row(p + r) +=
                        g * w.col(f).segment(r * k, k).transpose();
                }
            }
            pos += count;
        }
    }
    return d_tensor;
}

}  // namespace semtext
