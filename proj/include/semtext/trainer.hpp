#pragma once

#include <cstdint>
#include <vector>

#include "semtext/dataset.hpp"
#include "semtext/embedding.hpp"
#include "semtext/lexicalizer.hpp"
#include "semtext/model.hpp"

namespace semtext {

struct TrainConfig {
    size_t batch_size = 64;  // sub-sequences per SGD step
    double learning_rate = 0.01;
    size_t epochs = 30;
    uint64_t seed = 7;
    double validation_split = 0.25;  // fraction of pages held out
    double grad_clip = 0.0;          // batch-gradient L2 cap, 0 disables

    void validate() const;  // throws ConfigError
};

struct EpochStats {
    size_t epoch = 0;        // 1-based
    double mean_loss = 0.0;  // mean per-sequence NLL across the epoch
    double val_f1 = 0.0;     // micro F1 over pooled validation blocks
};

struct TrainResult {
    ModelParams params;  // checkpoint with the best validation F1
    std::vector<EpochStats> log;
    size_t best_epoch = 0;
    double best_f1 = 0.0;
};

// Order-preserving split into ceil(count/m) chunks whose sizes differ by at
// most one, each at most m. Empty pages yield an empty list.
std::vector<LabeledPage> split_sequence(const LabeledPage& page, size_t m);

// Seeded, deterministic SGD: shuffle pages, hold out the validation split,
// cut the rest into sub-sequences of at most init.config.m blocks, then run
// plain SGD on batches of sub-sequences (batch loss = mean per-sequence
// NLL). Every epoch logs the mean loss and pooled validation F1; the
// checkpoint with the highest F1 (earliest on ties) is returned.
TrainResult train(const std::vector<LabeledPage>& corpus,
                  const ModelParams& init, const EmbeddingStore& store,
                  const Lexicalizer& lex, const TrainConfig& config);

}  // namespace semtext
