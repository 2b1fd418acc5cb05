#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "semtext/dom.hpp"

namespace semtext {

// One segment of a page: the group-3 tag path, the raw class tokens on that
// path, and the enclosed text, plus the DOM provenance the combine phase
// needs to recognize siblings and single children.
struct TextBlock {
    std::vector<std::string> tag_seq;    // group-3 tags, root to block
    std::vector<std::string> class_seq;  // raw class tokens on the same path
    std::string text;                    // whitespace-normalized content
    int depth = 0;                       // == tag_seq.size()
    std::pair<int, int> origin_span{0, 0};  // closed range of search indices

    int element_id = -1;      // innermost group-3 element (root if none)
    int parent_id = -1;       // nearest group-3 ancestor of element, -1 at top
    int group3_children = 0;  // element's group-3 child count (through group-2)
    bool leaf = false;        // no unabsorbed group-3 child remains
};

struct BlockSequence {
    std::vector<TextBlock> blocks;
    std::string source_id;
};

// DFS pass: cuts a block at every group-3 boundary (opening or closing),
// drops group-1 subtrees entirely, and sees through group-2 tags. Blocks
// whose text is empty or carries no letter/digit are not created. With
// include_ids, id-attribute tokens join class_seq after the class tokens.
BlockSequence search_phase(const DomNode& root,
                           const TagTable& table = TagTable::builtin(),
                           bool include_ids = false);

// Right-to-left linear pass merging leaf siblings with identical tag and
// class paths, absorbing a leaf single child into its parent block when the
// class paths match, and joining text runs of one element once the content
// between them has been absorbed. Idempotent; order preserving.
BlockSequence combine_phase(BlockSequence sequence);

// search_phase then combine_phase. `source_size`, when nonzero, enables a
// diagnostic warning for degenerately deep trees (tree height squared
// exceeding the input size), which would void the linear-time argument.
BlockSequence segment(const DomNode& root,
                      const TagTable& table = TagTable::builtin(),
                      size_t source_size = 0, bool include_ids = false);

}  // namespace semtext
