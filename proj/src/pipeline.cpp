#include "semtext/pipeline.hpp"

namespace semtext {

WordStrings block_words(const Lexicalizer& lex, const ModelConfig& config,
                        const std::vector<std::string>& tags,
                        const std::vector<std::string>& classes,
                        std::string_view text) {
    WordStrings words;
    if (config.use_tags) words.tag_words = lex.lexicalize_tags(tags);
    if (config.use_classes)
        words.class_words = lex.lexicalize_classes(classes);
    if (config.use_text) words.text_words = lex.lexicalize_text(text);
    return words;
}

std::vector<BlockTensor> page_tensors(const EmbeddingStore& store,
                                      const Lexicalizer& lex,
                                      const ModelConfig& config,
                                      const LabeledPage& page) {
    std::vector<BlockTensor> out;
    out.reserve(page.blocks.size());
    for (const LabeledBlock& b : page.blocks)
        out.push_back(store.embed_block(
            block_words(lex, config, b.tags, b.classes, b.text), config.n));
    return out;
}

std::vector<BlockTensor> page_tensors(const EmbeddingStore& store,
                                      const Lexicalizer& lex,
                                      const ModelConfig& config,
                                      const BlockSequence& sequence) {
    std::vector<BlockTensor> out;
    out.reserve(sequence.blocks.size());
    for (const TextBlock& b : sequence.blocks)
        out.push_back(store.embed_block(
            block_words(lex, config, b.tag_seq, b.class_seq, b.text),
            config.n));
    return out;
}

std::vector<Label> page_labels(const LabeledPage& page) {
    std::vector<Label> out;
    out.reserve(page.blocks.size());
    for (const LabeledBlock& b : page.blocks) out.push_back(b.label);
    return out;
}

}  // namespace semtext
