#pragma once

#include <string_view>
#include <vector>

#include "semtext/dataset.hpp"
#include "semtext/embedding.hpp"
#include "semtext/lexicalizer.hpp"
#include "semtext/model.hpp"
#include "semtext/segmenter.hpp"

namespace semtext {

// Lexicalizes one block's three channels; channels disabled in the config
// come back empty and therefore embed to all-zero maps.
WordStrings block_words(const Lexicalizer& lex, const ModelConfig& config,
                        const std::vector<std::string>& tags,
                        const std::vector<std::string>& classes,
                        std::string_view text);

std::vector<BlockTensor> page_tensors(const EmbeddingStore& store,
                                      const Lexicalizer& lex,
                                      const ModelConfig& config,
                                      const LabeledPage& page);

std::vector<BlockTensor> page_tensors(const EmbeddingStore& store,
                                      const Lexicalizer& lex,
                                      const ModelConfig& config,
                                      const BlockSequence& sequence);

std::vector<Label> page_labels(const LabeledPage& page);

}  // namespace semtext
