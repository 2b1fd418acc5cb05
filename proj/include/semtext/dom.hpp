#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace semtext {

// ---------------------------------------------------------------------------
// Tag groups
// ---------------------------------------------------------------------------

// Group 1: tag and enclosed content are discarded.
// Group 2: tag is dropped, enclosed text is kept.
// Group 3: block-delimiting; tag and text are both included.
enum class TagGroup { kGroup1 = 1, kGroup2 = 2, kGroup3 = 3 };

// Total tag-name -> group classification. Unknown tags map to a
// configurable default (group 3 out of the box, so no text is lost).
class TagTable {
  public:
    TagTable() = default;

    // Built-in table covering the HTML5 tag set.
    static const TagTable& builtin();

    // Loads "tag<TAB>group" lines (group is 1, 2 or 3). '#' starts a
    // comment line. Throws FormatError on malformed rows.
    static TagTable load_file(const std::string& path);
    static TagTable parse(std::string_view text);

    TagGroup classify(std::string_view tag) const;

    void set(std::string tag, TagGroup group);
    void set_default_group(TagGroup group) { default_group_ = group; }

    const std::unordered_map<std::string, TagGroup>& entries() const {
        return groups_;
    }

  private:
    std::unordered_map<std::string, TagGroup> groups_;
    TagGroup default_group_ = TagGroup::kGroup3;
};

// ---------------------------------------------------------------------------
// DOM tree
// ---------------------------------------------------------------------------

struct DomNode;

// A child slot is either a text run or an element; order is preserved so
// concatenating runs in document order reproduces the source text.
using DomItem = std::variant<std::string, std::unique_ptr<DomNode>>;

struct DomNode {
    std::string tag;  // lowercase; "#document" for the root container
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<DomItem> items;
    const DomNode* parent = nullptr;
    int id = 0;  // document-order identity, root is 0

    bool is_document() const { return tag == "#document"; }

    // First value for `name`, or nullptr.
    const std::string* attribute(std::string_view name) const;

    // All text runs in the subtree, concatenated in document order.
    std::string text_content() const;

    size_t element_child_count() const;

    // Building helpers for tests and the parser; they keep parent links
    // intact but leave node ids to assign_ids().
    DomNode& append_element(std::string tag_name);
    void append_text(std::string text);
};

// Renumbers ids in document order (root = 0) and fixes parent links.
void assign_ids(DomNode& root);

// Height of the tree: a lone root has height 0.
int tree_height(const DomNode& root);

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

// Lenient HTML parse. `encoding_hint` (e.g. from an HTTP header) takes
// priority over a <meta charset> found in the first 1024 bytes; UTF-8 is
// the fallback. Supported encodings: utf-8, us-ascii, iso-8859-1,
// windows-1252.
//
// Throws EncodingError on undecodable input and EmptyDocumentError when
// no element remains after parsing.
std::unique_ptr<DomNode> parse_html(std::string_view bytes,
                                    std::string_view encoding_hint = {});

// Tag-name -> group of the classic HTML5 sets used by the parser.
bool is_void_tag(std::string_view tag);
bool is_raw_text_tag(std::string_view tag);

// The text of the built-in tag-group table, in the data-file format.
std::string_view builtin_tag_group_text();

}  // namespace semtext
