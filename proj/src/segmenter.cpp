#include "semtext/segmenter.hpp"

#include <algorithm>
#include <deque>

#include "semtext/util.hpp"

namespace semtext {

// ---------------------------------------------------------------------------
// Search phase
// ---------------------------------------------------------------------------

namespace {

// Group-3 elements reachable from `el` without crossing another group-3
// boundary; group-2 children are transparent, group-1 subtrees invisible.
int effective_group3_children(const DomNode& el, const TagTable& table) {
    int n = 0;
    for (const auto& item : el.items) {
        if (!std::holds_alternative<std::unique_ptr<DomNode>>(item)) continue;
        const DomNode& child = *std::get<std::unique_ptr<DomNode>>(item);
        switch (table.classify(child.tag)) {
            case TagGroup::kGroup1:
                break;
            case TagGroup::kGroup2:
                n += effective_group3_children(child, table);
                break;
            case TagGroup::kGroup3:
                ++n;
                break;
        }
    }
    return n;
}

class SearchWalker {
  public:
    SearchWalker(const DomNode& root, const TagTable& table, bool include_ids)
        : root_(root), table_(table), include_ids_(include_ids) {}

    BlockSequence run() {
        walk(root_);
        flush();
        return std::move(out_);
    }

  private:
    void walk(const DomNode& node) {
        for (const auto& item : node.items) {
            if (std::holds_alternative<std::string>(item)) {
                buffer_ += std::get<std::string>(item);
                continue;
            }
            const DomNode& child = *std::get<std::unique_ptr<DomNode>>(item);
            switch (table_.classify(child.tag)) {
                case TagGroup::kGroup1:
                    break;  // subtree and text discarded
                case TagGroup::kGroup2:
                    walk(child);  // tag transparent, text kept
                    break;
                case TagGroup::kGroup3: {
                    flush();  // opening boundary
                    tags_.push_back(child.tag);
                    size_t added = push_classes(child);
                    stack_.push_back(&child);
                    walk(child);
                    flush();  // closing boundary
                    stack_.pop_back();
                    classes_.resize(classes_.size() - added);
                    tags_.pop_back();
                    break;
                }
            }
        }
    }

    size_t push_classes(const DomNode& el) {
        size_t added = push_attribute_tokens(el, "class");
        // ids read like class names; off by default because they are often
        // unique per element and then block sibling merges
        if (include_ids_) added += push_attribute_tokens(el, "id");
        return added;
    }

    size_t push_attribute_tokens(const DomNode& el, const char* name) {
        const std::string* value = el.attribute(name);
        if (!value) return 0;
        std::vector<std::string> tokens = split_whitespace(*value);
        for (auto& t : tokens) classes_.push_back(std::move(t));
        return tokens.size();
    }

    void flush() {
        std::string text = normalize_whitespace(buffer_);
        buffer_.clear();
        if (text.empty() || !contains_word_char(text)) return;

        TextBlock block;
        block.tag_seq = tags_;
        block.class_seq = classes_;
        block.text = std::move(text);
        block.depth = static_cast<int>(block.tag_seq.size());
        const DomNode* el = stack_.empty() ? &root_ : stack_.back();
        block.element_id = el->id;
        block.parent_id = stack_.size() >= 2 ? stack_[stack_.size() - 2]->id
                          : stack_.size() == 1 ? root_.id
                                               : -1;
        block.group3_children = effective_group3_children(*el, table_);
        block.leaf = block.group3_children == 0;
        int index = static_cast<int>(out_.blocks.size());
        block.origin_span = {index, index};
        out_.blocks.push_back(std::move(block));
    }

    const DomNode& root_;
    const TagTable& table_;
    bool include_ids_;
    std::string buffer_;
    std::vector<std::string> tags_;
    std::vector<std::string> classes_;
    std::vector<const DomNode*> stack_;
    BlockSequence out_;
};

}  // namespace

BlockSequence search_phase(const DomNode& root, const TagTable& table,
                           bool include_ids) {
    return SearchWalker(root, table, include_ids).run();
}

// ---------------------------------------------------------------------------
// Combine phase
// ---------------------------------------------------------------------------

namespace {

// Two text runs of the same element are sibling fragments with identical
// paths by construction; they join once either side has absorbed the child
// content that separated them.
bool same_element_runs(const TextBlock& a, const TextBlock& b) {
    return a.element_id == b.element_id && (a.leaf || b.leaf);
}

// Leaf siblings with the same tag sequence and the same class sequence.
bool leaf_siblings(const TextBlock& a, const TextBlock& b) {
    return a.leaf && b.leaf && a.parent_id == b.parent_id &&
           a.tag_seq == b.tag_seq && a.class_seq == b.class_seq;
}

// b is a leaf and the single child of a; class paths equal; a's tag path is
// a one-step prefix of b's. The merged block keeps a's (shorter) paths.
bool single_child(const TextBlock& a, const TextBlock& b) {
    return b.leaf && b.parent_id == a.element_id && a.group3_children == 1 &&
           a.class_seq == b.class_seq &&
           b.tag_seq.size() == a.tag_seq.size() + 1 &&
           std::equal(a.tag_seq.begin(), a.tag_seq.end(), b.tag_seq.begin());
}

// Folds b into a. a's tag/class paths are already the merged block's paths
// under every rule above.
void absorb(TextBlock& a, const TextBlock& b) {
    a.text += ' ';
    a.text += b.text;
    a.origin_span.second = b.origin_span.second;
    a.leaf = true;
}

}  // namespace

BlockSequence combine_phase(BlockSequence sequence) {
    std::deque<TextBlock> out;
    for (size_t i = sequence.blocks.size(); i-- > 0;) {
        out.push_front(std::move(sequence.blocks[i]));
        while (out.size() >= 2) {
            TextBlock& a = out[0];
            TextBlock& b = out[1];
            if (same_element_runs(a, b) || leaf_siblings(a, b) ||
                single_child(a, b)) {
                absorb(a, b);
                out.erase(out.begin() + 1);
            } else {
                break;  // don't-combine; later pushes retest the new front
            }
        }
    }
    sequence.blocks.assign(std::make_move_iterator(out.begin()),
                           std::make_move_iterator(out.end()));
    return sequence;
}

BlockSequence segment(const DomNode& root, const TagTable& table,
                      size_t source_size, bool include_ids) {
    if (source_size > 0) {
        size_t q = static_cast<size_t>(tree_height(root));
        if (q * q > source_size) {
            warn("segmenter: tree height " + std::to_string(q) +
                 " is degenerate for input of " + std::to_string(source_size) +
                 " bytes; running time may not be linear");
        }
    }
    return combine_phase(search_phase(root, table, include_ids));
}

}  // namespace semtext
