#include "semtext/network.hpp"

namespace semtext {

namespace {

std::vector<Eigen::VectorXd> encode_all(const ConstParamViews& views,
                                        const std::vector<BlockTensor>& blocks,
                                        std::vector<EncodeCache>* caches) {
    std::vector<Eigen::VectorXd> features;
    features.reserve(blocks.size());
    if (caches) caches->resize(blocks.size());
    for (size_t i = 0; i < blocks.size(); ++i)
        features.push_back(encode_block(views, blocks[i],
                                        caches ? &(*caches)[i] : nullptr));
    return features;
}

}  // namespace

double sequence_loss(const ModelParams& params,
                     const std::vector<BlockTensor>& blocks,
                     const std::vector<Label>& gold) {
    if (blocks.size() != gold.size())
        throw LengthMismatchError("label count does not match block count");
    if (blocks.empty()) return 0.0;
    ConstParamViews views = params.views();
    std::vector<Eigen::VectorXd> features = encode_all(views, blocks, nullptr);
    std::vector<Eigen::VectorXd> hidden = bilstm_forward(views, features);
    Eigen::MatrixXd e = emission_scores(views, hidden);
    return sequence_nll(views, e, gold);
}

double sequence_loss_grad(const ModelParams& params,
                          const std::vector<BlockTensor>& blocks,
                          const std::vector<Label>& gold,
                          Eigen::VectorXd& grad) {
    if (blocks.size() != gold.size())
        throw LengthMismatchError("label count does not match block count");
    if (blocks.empty()) return 0.0;
    ConstParamViews views = params.views();
    ParamViews grads(params.config, grad.data());

    std::vector<EncodeCache> enc_caches;
    std::vector<Eigen::VectorXd> features =
        encode_all(views, blocks, &enc_caches);
    LstmCache lstm_cache;
    std::vector<Eigen::VectorXd> hidden =
        bilstm_forward(views, features, &lstm_cache);
    Eigen::MatrixXd e = emission_scores(views, hidden);
    double loss = sequence_nll(views, e, gold);

    Eigen::MatrixXd d_e = crf_backward(views, e, gold, grads);

    // emission layer: e_t = W h_t + b
    auto w = views.emit_w();
    auto dw = grads.emit_w();
    auto db = grads.emit_b();
    std::vector<Eigen::VectorXd> d_hidden(
        hidden.size(),
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(
            2 * params.config.hidden)));
    for (size_t t = 0; t < hidden.size(); ++t) {
        Eigen::VectorXd de_t =
            d_e.row(static_cast<Eigen::Index>(t)).transpose();
        dw += de_t * hidden[t].transpose();
        db += de_t;
        d_hidden[t] = w.transpose() * de_t;
    }

    std::vector<Eigen::VectorXd> d_features =
        bilstm_backward(views, features, lstm_cache, d_hidden, grads);
    for (size_t i = 0; i < blocks.size(); ++i)
        encode_backward(views, blocks[i], enc_caches[i], d_features[i],
                        grads);  // embedding maps are fixed; their grad is
                                 // discarded
    return loss;
}

std::vector<Label> predict_labels(const ModelParams& params,
                                  const std::vector<BlockTensor>& blocks) {
    if (blocks.empty()) return {};
    ConstParamViews views = params.views();
    std::vector<Eigen::VectorXd> features = encode_all(views, blocks, nullptr);
    std::vector<Eigen::VectorXd> hidden = bilstm_forward(views, features);
    Eigen::MatrixXd e = emission_scores(views, hidden);
    return viterbi_decode(views, e).first;
}

Eigen::VectorXd predict_main_scores(const ModelParams& params,
                                    const std::vector<BlockTensor>& blocks) {
    if (blocks.empty()) return Eigen::VectorXd();
    ConstParamViews views = params.views();
    std::vector<Eigen::VectorXd> features = encode_all(views, blocks, nullptr);
    std::vector<Eigen::VectorXd> hidden = bilstm_forward(views, features);
    Eigen::MatrixXd e = emission_scores(views, hidden);
    return main_marginals(views, e);
}

}  // namespace semtext
