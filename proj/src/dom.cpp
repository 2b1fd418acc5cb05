#include "semtext/dom.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "semtext/errors.hpp"
#include "semtext/util.hpp"

namespace semtext {

// ---------------------------------------------------------------------------
// Tag-group table
// ---------------------------------------------------------------------------

namespace {

// One "tag<TAB>group" row per line. Group 1 discards content, group 2
// keeps text only, group 3 delimits blocks. Unknown tags fall back to the
// table default (group 3).
constexpr std::string_view kBuiltinTagGroups = R"(# tag groups: 1 = discard, 2 = keep text drop tag, 3 = block-delimiting
applet	1
area	1
audio	1
base	1
basefont	1
bgsound	1
button	1
canvas	1
datalist	1
embed	1
fieldset	1
form	1
frame	1
frameset	1
head	1
iframe	1
img	1
input	1
keygen	1
label	1
legend	1
link	1
map	1
math	1
meta	1
meter	1
noframes	1
noscript	1
object	1
optgroup	1
option	1
output	1
param	1
picture	1
progress	1
script	1
select	1
slot	1
source	1
style	1
svg	1
template	1
textarea	1
title	1
track	1
video	1
a	2
abbr	2
acronym	2
b	2
bdi	2
bdo	2
big	2
blink	2
br	2
cite	2
code	2
col	2
colgroup	2
data	2
del	2
dfn	2
em	2
font	2
i	2
ins	2
kbd	2
mark	2
marquee	2
nobr	2
q	2
rb	2
rp	2
rt	2
rtc	2
ruby	2
s	2
samp	2
small	2
span	2
strike	2
strong	2
sub	2
sup	2
tbody	2
tfoot	2
thead	2
time	2
tt	2
u	2
var	2
wbr	2
address	3
article	3
aside	3
blockquote	3
body	3
caption	3
center	3
dd	3
details	3
dialog	3
dir	3
div	3
dl	3
dt	3
figcaption	3
figure	3
footer	3
h1	3
h2	3
h3	3
h4	3
h5	3
h6	3
header	3
hgroup	3
hr	3
html	3
li	3
listing	3
main	3
menu	3
menuitem	3
nav	3
ol	3
p	3
pre	3
section	3
summary	3
table	3
td	3
th	3
tr	3
ul	3
xmp	3
)";

}  // namespace

std::string_view builtin_tag_group_text() { return kBuiltinTagGroups; }

const TagTable& TagTable::builtin() {
    static const TagTable table = TagTable::parse(kBuiltinTagGroups);
    return table;
}

TagTable TagTable::parse(std::string_view text) {
    TagTable table;
    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        if (line.empty() || line.front() == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string_view::npos)
            throw FormatError("dom: tag-group line " + std::to_string(line_no) +
                              " has no tab separator");
        std::string tag = ascii_lower(line.substr(0, tab));
        std::string_view group = line.substr(tab + 1);
        if (tag.empty() || group.size() != 1 || group[0] < '1' || group[0] > '3')
            throw FormatError("dom: bad tag-group row at line " +
                              std::to_string(line_no));
        table.set(std::move(tag), static_cast<TagGroup>(group[0] - '0'));
    }
    return table;
}

TagTable TagTable::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("dom: cannot open tag-group table: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

TagGroup TagTable::classify(std::string_view tag) const {
    auto it = groups_.find(std::string(tag));
    return it == groups_.end() ? default_group_ : it->second;
}

void TagTable::set(std::string tag, TagGroup group) {
    groups_[std::move(tag)] = group;
}

// ---------------------------------------------------------------------------
// DomNode
// ---------------------------------------------------------------------------

const std::string* DomNode::attribute(std::string_view name) const {
    for (const auto& [k, v] : attributes) {
        if (k == name) return &v;
    }
    return nullptr;
}

std::string DomNode::text_content() const {
    std::string out;
    for (const auto& item : items) {
        if (std::holds_alternative<std::string>(item)) {
            out += std::get<std::string>(item);
        } else {
            out += std::get<std::unique_ptr<DomNode>>(item)->text_content();
        }
    }
    return out;
}

size_t DomNode::element_child_count() const {
    size_t n = 0;
    for (const auto& item : items) {
        if (std::holds_alternative<std::unique_ptr<DomNode>>(item)) ++n;
    }
    return n;
}

DomNode& DomNode::append_element(std::string tag_name) {
    auto node = std::make_unique<DomNode>();
    node->tag = std::move(tag_name);
    node->parent = this;
    DomNode& ref = *node;
    items.emplace_back(std::move(node));
    return ref;
}

void DomNode::append_text(std::string text) {
    if (!items.empty() && std::holds_alternative<std::string>(items.back())) {
        std::get<std::string>(items.back()) += text;
        return;
    }
    items.emplace_back(std::move(text));
}

namespace {

void assign_ids_walk(DomNode& node, const DomNode* parent, int& next) {
    node.parent = parent;
    node.id = next++;
    for (auto& item : node.items) {
        if (std::holds_alternative<std::unique_ptr<DomNode>>(item)) {
            assign_ids_walk(*std::get<std::unique_ptr<DomNode>>(item), &node,
                            next);
        }
    }
}

}  // namespace

void assign_ids(DomNode& root) {
    int next = 0;
    assign_ids_walk(root, nullptr, next);
}

int tree_height(const DomNode& root) {
    int best = 0;
    for (const auto& item : root.items) {
        if (std::holds_alternative<std::unique_ptr<DomNode>>(item)) {
            best = std::max(
                best,
                1 + tree_height(*std::get<std::unique_ptr<DomNode>>(item)));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Encoding detection and transcoding
// ---------------------------------------------------------------------------

namespace {

enum class Charset { kUtf8, kAscii, kLatin1, kWin1252 };

Charset charset_from_label(std::string_view label) {
    std::string l = ascii_lower(label);
    l.erase(std::remove_if(l.begin(), l.end(),
                           [](char c) { return c == ' ' || c == '"' || c == '\''; }),
            l.end());
    if (l == "utf-8" || l == "utf8") return Charset::kUtf8;
    if (l == "ascii" || l == "us-ascii") return Charset::kAscii;
    if (l == "iso-8859-1" || l == "iso8859-1" || l == "latin-1" || l == "latin1")
        return Charset::kLatin1;
    if (l == "windows-1252" || l == "cp1252" || l == "x-cp1252")
        return Charset::kWin1252;
    throw EncodingError("dom: unsupported charset '" + std::string(label) + "'");
}

// Looks for charset=... in the first 1024 bytes (meta charset or
// http-equiv content sniff).
bool sniff_meta_charset(std::string_view bytes, std::string& label) {
    std::string head = ascii_lower(bytes.substr(0, std::min<size_t>(bytes.size(), 1024)));
    size_t pos = head.find("charset");
    if (pos == std::string::npos) return false;
    pos += 7;
    while (pos < head.size() &&
           (head[pos] == ' ' || head[pos] == '\t' || head[pos] == '='))
        ++pos;
    while (pos < head.size() && (head[pos] == '"' || head[pos] == '\'')) ++pos;
    size_t end = pos;
    while (end < head.size() &&
           (std::isalnum(static_cast<unsigned char>(head[end])) ||
            head[end] == '-' || head[end] == '_'))
        ++end;
    if (end == pos) return false;
    label = head.substr(pos, end - pos);
    return true;
}

// Windows-1252 code points for bytes 0x80..0x9F; 0 marks undefined slots.
constexpr std::array<uint32_t, 32> kWin1252High = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0,      0x017D, 0,
    0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

std::string decode_to_utf8(std::string_view bytes, Charset cs) {
    switch (cs) {
        case Charset::kUtf8: {
            std::string_view body = bytes;
            if (body.size() >= 3 && static_cast<unsigned char>(body[0]) == 0xEF &&
                static_cast<unsigned char>(body[1]) == 0xBB &&
                static_cast<unsigned char>(body[2]) == 0xBF) {
                body.remove_prefix(3);
            }
            if (!utf8_valid(body))
                throw EncodingError("dom: input is not valid UTF-8");
            return std::string(body);
        }
        case Charset::kAscii: {
            for (char c : bytes) {
                if (static_cast<unsigned char>(c) >= 0x80)
                    throw EncodingError("dom: non-ASCII byte in us-ascii input");
            }
            return std::string(bytes);
        }
        case Charset::kLatin1: {
            std::string out;
            out.reserve(bytes.size());
            for (char c : bytes) utf8_append(out, static_cast<unsigned char>(c));
            return out;
        }
        case Charset::kWin1252: {
            std::string out;
            out.reserve(bytes.size());
            for (char c : bytes) {
                auto b = static_cast<unsigned char>(c);
                if (b >= 0x80 && b <= 0x9F) {
                    uint32_t cp = kWin1252High[b - 0x80];
                    if (cp == 0)
                        throw EncodingError(
                            "dom: undefined windows-1252 byte 0x" +
                            std::to_string(b));
                    utf8_append(out, cp);
                } else {
                    utf8_append(out, b);
                }
            }
            return out;
        }
    }
    throw EncodingError("dom: unreachable charset");
}

// ---------------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------------

// Decodes the entity starting at s[i] (s[i] == '&'). On success appends the
// decoded character and advances i past the ';'. Otherwise appends '&'
// literally and advances by one (unknown named entities pass through).
void decode_entity(std::string_view s, size_t& i, std::string& out) {
    size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi == i + 1 || semi - i > 32) {
        out += '&';
        ++i;
        return;
    }
    std::string_view body = s.substr(i + 1, semi - i - 1);
    if (body[0] == '#') {
        uint32_t cp = 0;
        bool ok = body.size() > 1;
        if (body.size() > 2 && (body[1] == 'x' || body[1] == 'X')) {
            for (size_t k = 2; k < body.size(); ++k) {
                char c = body[k];
                int d;
                if (c >= '0' && c <= '9') d = c - '0';
                else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
                else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
                else { ok = false; break; }
                cp = cp * 16 + d;
                if (cp > 0x10FFFF) cp = 0xFFFD;
            }
        } else {
            for (size_t k = 1; k < body.size(); ++k) {
                char c = body[k];
                if (c < '0' || c > '9') { ok = false; break; }
                cp = cp * 10 + (c - '0');
                if (cp > 0x10FFFF) cp = 0xFFFD;
            }
        }
        if (ok) {
            utf8_append(out, cp == 0 ? 0xFFFD : cp);
            i = semi + 1;
            return;
        }
    } else if (body == "amp") { out += '&'; i = semi + 1; return; }
    else if (body == "lt") { out += '<'; i = semi + 1; return; }
    else if (body == "gt") { out += '>'; i = semi + 1; return; }
    else if (body == "quot") { out += '"'; i = semi + 1; return; }
    else if (body == "apos") { out += '\''; i = semi + 1; return; }
    else if (body == "nbsp") { utf8_append(out, 0x00A0); i = semi + 1; return; }
    out += '&';
    ++i;
}

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '&') {
            decode_entity(s, i, out);
        } else {
            out += s[i++];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tokenizer + tree builder
// ---------------------------------------------------------------------------

const std::unordered_set<std::string>& void_tags() {
    static const std::unordered_set<std::string> s = {
        "area",  "base",  "basefont", "bgsound", "br",    "col",
        "embed", "frame", "hr",       "img",     "input", "keygen",
        "link",  "meta",  "param",    "source",  "track", "wbr"};
    return s;
}

const std::unordered_set<std::string>& raw_text_tags() {
    static const std::unordered_set<std::string> s = {"script", "style",
                                                      "textarea", "xmp"};
    return s;
}

// Start tags that implicitly close an open <p>.
const std::unordered_set<std::string>& p_closers() {
    static const std::unordered_set<std::string> s = {
        "address", "article", "aside",  "blockquote", "center", "details",
        "dialog",  "dir",     "div",    "dl",         "dt",     "dd",
        "fieldset", "figcaption", "figure", "footer", "form",   "h1",
        "h2",      "h3",      "h4",     "h5",         "h6",     "header",
        "hgroup",  "hr",      "li",     "main",       "menu",   "nav",
        "ol",      "p",       "pre",    "section",    "table",  "ul"};
    return s;
}

struct Attribute {
    std::string name;
    std::string value;
};

// Matches common browser limits; keeps recursive tree walks stack-safe.
constexpr size_t kMaxOpenElements = 512;

class Parser {
  public:
    explicit Parser(std::string text) : src_(std::move(text)) {
        root_ = std::make_unique<DomNode>();
        root_->tag = "#document";
        stack_.push_back(root_.get());
    }

    std::unique_ptr<DomNode> run() {
        while (pos_ < src_.size()) {
            if (src_[pos_] == '<') {
                read_markup();
            } else {
                read_text();
            }
        }
        flush_text();
        assign_ids(*root_);
        return std::move(root_);
    }

  private:
    DomNode& top() { return *stack_.back(); }

    void flush_text() {
        if (text_.empty()) return;
        top().append_text(std::move(text_));
        text_.clear();
    }

    void read_text() {
        size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '<') {
            if (src_[pos_] == '&') {
                text_.append(src_, start, pos_ - start);
                decode_entity(src_, pos_, text_);
                start = pos_;
            } else {
                ++pos_;
            }
        }
        text_.append(src_, start, pos_ - start);
    }

    void read_markup() {
        // pos_ is at '<'
        if (pos_ + 1 >= src_.size()) {
            text_ += '<';
            ++pos_;
            return;
        }
        char c = src_[pos_ + 1];
        if (c == '!') {
            read_declaration();
        } else if (c == '?') {
            skip_until('>');
        } else if (c == '/') {
            read_end_tag();
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            read_start_tag();
        } else {
            text_ += '<';  // stray '<' is literal text
            ++pos_;
        }
    }

    void skip_until(char stop) {
        while (pos_ < src_.size() && src_[pos_] != stop) ++pos_;
        if (pos_ < src_.size()) ++pos_;
    }

    void read_declaration() {
        if (src_.compare(pos_, 4, "<!--") == 0) {
            size_t end = src_.find("-->", pos_ + 4);
            pos_ = end == std::string::npos ? src_.size() : end + 3;
            return;
        }
        if (src_.compare(pos_, 9, "<![CDATA[") == 0) {
            size_t end = src_.find("]]>", pos_ + 9);
            pos_ = end == std::string::npos ? src_.size() : end + 3;
            return;
        }
        skip_until('>');  // doctype and friends
    }

    std::string read_tag_name() {
        std::string name;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                c == '_' || c == ':') {
                name += static_cast<char>(
                    std::tolower(static_cast<unsigned char>(c)));
                ++pos_;
            } else {
                break;
            }
        }
        return name;
    }

    void read_end_tag() {
        pos_ += 2;  // "</"
        std::string name = read_tag_name();
        skip_until('>');
        if (name.empty()) return;
        // Close up to and including the matching element; stray closers drop.
        for (size_t d = stack_.size(); d > 1; --d) {
            if (stack_[d - 1]->tag == name) {
                flush_text();
                stack_.resize(d - 1);
                return;
            }
        }
    }

    std::vector<Attribute> read_attributes(bool& self_closing) {
        std::vector<Attribute> attrs;
        self_closing = false;
        while (pos_ < src_.size()) {
            while (pos_ < src_.size() &&
                   std::isspace(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            if (pos_ >= src_.size()) break;
            char c = src_[pos_];
            if (c == '>') {
                ++pos_;
                break;
            }
            if (c == '/') {
                ++pos_;
                if (pos_ < src_.size() && src_[pos_] == '>') {
                    self_closing = true;
                    ++pos_;
                    break;
                }
                continue;
            }
            Attribute attr;
            while (pos_ < src_.size()) {
                c = src_[pos_];
                if (c == '=' || c == '>' || c == '/' ||
                    std::isspace(static_cast<unsigned char>(c)))
                    break;
                attr.name += static_cast<char>(
                    std::tolower(static_cast<unsigned char>(c)));
                ++pos_;
            }
            if (attr.name.empty()) {
                ++pos_;
                continue;
            }
            while (pos_ < src_.size() &&
                   std::isspace(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '=') {
                ++pos_;
                while (pos_ < src_.size() &&
                       std::isspace(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
                if (pos_ < src_.size() &&
                    (src_[pos_] == '"' || src_[pos_] == '\'')) {
                    char quote = src_[pos_++];
                    size_t end = src_.find(quote, pos_);
                    if (end == std::string::npos) end = src_.size();
                    attr.value = decode_entities(
                        std::string_view(src_).substr(pos_, end - pos_));
                    pos_ = std::min(end + 1, src_.size());
                } else {
                    size_t start = pos_;
                    while (pos_ < src_.size() && src_[pos_] != '>' &&
                           !std::isspace(static_cast<unsigned char>(src_[pos_])))
                        ++pos_;
                    attr.value = decode_entities(
                        std::string_view(src_).substr(start, pos_ - start));
                }
            }
            attrs.push_back(std::move(attr));
        }
        return attrs;
    }

    // Implicit closes: a start tag that cannot legally nest under the open
    // element closes elements up to the nearest legal ancestor.
    void repair_before(const std::string& name) {
        while (stack_.size() > 1) {
            const std::string& open = top().tag;
            bool close = false;
            if (open == "p" && p_closers().count(name)) close = true;
            else if (open == "li" && name == "li") close = true;
            else if ((open == "dt" || open == "dd") &&
                     (name == "dt" || name == "dd")) close = true;
            else if ((open == "td" || open == "th") &&
                     (name == "td" || name == "th" || name == "tr")) close = true;
            else if (open == "tr" && name == "tr") close = true;
            else if (open == "caption" &&
                     (name == "tr" || name == "td" || name == "th" ||
                      name == "tbody" || name == "thead" || name == "tfoot"))
                close = true;
            else if (open == "option" &&
                     (name == "option" || name == "optgroup")) close = true;
            if (!close) break;
            flush_text();
            stack_.pop_back();
        }
    }

    void read_start_tag() {
        ++pos_;  // '<'
        std::string name = read_tag_name();
        bool self_closing = false;
        std::vector<Attribute> attrs = read_attributes(self_closing);

        repair_before(name);
        flush_text();

        DomNode& node = top().append_element(name);
        std::unordered_set<std::string_view> seen;
        for (auto& a : attrs) {
            if (seen.insert(a.name).second) {
                node.attributes.emplace_back(std::move(a.name),
                                             std::move(a.value));
            }
        }

        if (self_closing || void_tags().count(name)) return;

        if (raw_text_tags().count(name)) {
            read_raw_text(node, name);
            return;
        }
        // Depth cap: beyond it new elements are attached but not opened, so
        // degenerate nesting flattens instead of growing the tree height.
        if (stack_.size() < kMaxOpenElements) stack_.push_back(&node);
    }

    // Captures verbatim content (no entity decoding) until the matching
    // close tag, case-insensitive.
    void read_raw_text(DomNode& node, const std::string& name) {
        std::string needle = "</" + name;
        size_t end = std::string::npos;
        for (size_t i = pos_; i + needle.size() <= src_.size(); ++i) {
            if (src_[i] != '<') continue;
            bool hit = true;
            for (size_t k = 0; k < needle.size(); ++k) {
                if (std::tolower(static_cast<unsigned char>(src_[i + k])) !=
                    needle[k]) {
                    hit = false;
                    break;
                }
            }
            if (hit) {
                end = i;
                break;
            }
        }
        size_t stop = end == std::string::npos ? src_.size() : end;
        if (stop > pos_) node.append_text(src_.substr(pos_, stop - pos_));
        if (end == std::string::npos) {
            pos_ = src_.size();
        } else {
            pos_ = end + needle.size();
            skip_until('>');
        }
    }

    std::string src_;
    size_t pos_ = 0;
    std::string text_;
    std::unique_ptr<DomNode> root_;
    std::vector<DomNode*> stack_;
};

}  // namespace

bool is_void_tag(std::string_view tag) {
    return void_tags().count(std::string(tag)) > 0;
}

bool is_raw_text_tag(std::string_view tag) {
    return raw_text_tags().count(std::string(tag)) > 0;
}

std::unique_ptr<DomNode> parse_html(std::string_view bytes,
                                    std::string_view encoding_hint) {
    Charset cs = Charset::kUtf8;
    if (!encoding_hint.empty()) {
        cs = charset_from_label(encoding_hint);
    } else {
        std::string label;
        if (sniff_meta_charset(bytes, label)) cs = charset_from_label(label);
    }
    std::string text = decode_to_utf8(bytes, cs);

    Parser parser(std::move(text));
    std::unique_ptr<DomNode> root = parser.run();
    if (root->element_child_count() == 0)
        throw EmptyDocumentError("dom: no element remains after parsing");
    return root;
}

}  // namespace semtext
