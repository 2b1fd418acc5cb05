#include "semtext/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "semtext/metrics.hpp"
#include "semtext/network.hpp"
#include "semtext/pipeline.hpp"
#include "semtext/util.hpp"

namespace semtext {

void TrainConfig::validate() const {
    if (batch_size == 0) throw ConfigError("batch size must be positive");
    if (epochs == 0) throw ConfigError("epoch count must be positive");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw ConfigError("learning rate must be finite and non-negative");
    if (!(validation_split > 0.0 && validation_split < 1.0))
        throw ConfigError("validation split must lie in (0, 1)");
    if (grad_clip < 0.0 || !std::isfinite(grad_clip))
        throw ConfigError("gradient clip must be finite and non-negative");
}

std::vector<LabeledPage> split_sequence(const LabeledPage& page, size_t m) {
    if (m == 0) throw ConfigError("sub-sequence bound must be positive");
    std::vector<LabeledPage> out;
    size_t count = page.blocks.size();
    if (count == 0) return out;
    size_t chunks = (count + m - 1) / m;
    size_t base = count / chunks;
    size_t rem = count % chunks;  // the first rem chunks get one extra block
    size_t pos = 0;
    for (size_t i = 0; i < chunks; ++i) {
        size_t size = base + (i < rem ? 1 : 0);
        LabeledPage chunk;
        chunk.id = chunks == 1 ? page.id
                               : page.id + "#" + std::to_string(i);
        chunk.blocks.assign(
            page.blocks.begin() + static_cast<ptrdiff_t>(pos),
            page.blocks.begin() + static_cast<ptrdiff_t>(pos + size));
        out.push_back(std::move(chunk));
        pos += size;
    }
    return out;
}

namespace {

struct PreparedSequence {
    std::vector<BlockTensor> tensors;
    std::vector<Label> gold;
};

std::vector<PreparedSequence> prepare(const std::vector<LabeledPage>& pages,
                                      const EmbeddingStore& store,
                                      const Lexicalizer& lex,
                                      const ModelConfig& config) {
    std::vector<PreparedSequence> out;
    for (const LabeledPage& page : pages)
        for (const LabeledPage& chunk : split_sequence(page, config.m)) {
            PreparedSequence seq;
            seq.tensors = page_tensors(store, lex, config, chunk);
            seq.gold = page_labels(chunk);
            out.push_back(std::move(seq));
        }
    return out;
}

double validation_f1(const ModelParams& params,
                     const std::vector<PreparedSequence>& val) {
    std::vector<std::vector<Label>> pred, gold;
    for (const PreparedSequence& seq : val) {
        pred.push_back(predict_labels(params, seq.tensors));
        gold.push_back(seq.gold);
    }
    return evaluate(pred, gold).f1;
}

}  // namespace

TrainResult train(const std::vector<LabeledPage>& corpus,
                  const ModelParams& init, const EmbeddingStore& store,
                  const Lexicalizer& lex, const TrainConfig& config) {
    config.validate();
    init.config.validate();
    if (corpus.empty()) throw EmptyCorpusError("training corpus is empty");

    // seeded page shuffle, then hold out the validation fraction
    std::mt19937_64 rng(config.seed);
    std::vector<size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    size_t val_count = static_cast<size_t>(
        static_cast<double>(corpus.size()) * config.validation_split);
    if (val_count >= corpus.size()) val_count = corpus.size() - 1;

    std::vector<LabeledPage> val_pages, train_pages;
    for (size_t i = 0; i < order.size(); ++i)
        (i < val_count ? val_pages : train_pages)
            .push_back(corpus[order[i]]);

    std::vector<PreparedSequence> train_seqs =
        prepare(train_pages, store, lex, init.config);
    std::vector<PreparedSequence> val_seqs =
        prepare(val_pages, store, lex, init.config);
    // drop degenerate empty sub-sequences defensively (split never emits them)
    std::erase_if(train_seqs,
                  [](const PreparedSequence& s) { return s.gold.empty(); });
    if (train_seqs.empty())
        throw EmptyCorpusError("no labeled blocks available for training");
    if (val_seqs.empty())
        warn("trainer: validation split is empty; checkpoint selection "
             "degenerates to the first epoch");

    TrainResult result;
    result.params = init;
    result.best_f1 = -1.0;
    ModelParams current = init;
    Eigen::VectorXd grad(current.flat.size());

    std::vector<size_t> seq_order(train_seqs.size());
    std::iota(seq_order.begin(), seq_order.end(), size_t{0});

    for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(seq_order.begin(), seq_order.end(), rng);
        double loss_sum = 0.0;
        for (size_t start = 0; start < seq_order.size();
             start += config.batch_size) {
            size_t end =
                std::min(start + config.batch_size, seq_order.size());
            auto batch = static_cast<double>(end - start);
            grad.setZero();
            double batch_loss = 0.0;
            for (size_t i = start; i < end; ++i) {
                const PreparedSequence& seq = train_seqs[seq_order[i]];
                batch_loss +=
                    sequence_loss_grad(current, seq.tensors, seq.gold, grad);
            }
            loss_sum += batch_loss;
            batch_loss /= batch;
            grad /= batch;
            if (!std::isfinite(batch_loss) || !grad.allFinite())
                throw DivergenceError(
                    "training diverged (non-finite loss or gradient) at "
                    "epoch " +
                    std::to_string(epoch) + ", batch starting at sequence " +
                    std::to_string(start));
            if (config.grad_clip > 0.0) {
                double norm = grad.norm();
                if (norm > config.grad_clip)
                    grad *= config.grad_clip / norm;
            }
            current.flat -= config.learning_rate * grad;
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.mean_loss =
            loss_sum / static_cast<double>(train_seqs.size());
        stats.val_f1 = validation_f1(current, val_seqs);
        result.log.push_back(stats);
        if (stats.val_f1 > result.best_f1) {
            result.best_f1 = stats.val_f1;
            result.best_epoch = epoch;
            result.params = current;
        }
    }
    return result;
}

}  // namespace semtext
