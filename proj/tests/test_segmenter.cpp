#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "semtext/dom.hpp"
#include "semtext/segmenter.hpp"
#include "semtext/util.hpp"

using namespace semtext;

namespace {

BlockSequence search_of(const std::string& html) {
    auto root = parse_html(html);
    return search_phase(*root);
}

BlockSequence segment_of(const std::string& html) {
    auto root = parse_html(html);
    return segment(*root, TagTable::builtin(), html.size());
}

// Oracle: the document's group-1-filtered text as a token sequence. A
// group-3 tag cuts the character stream on both sides; a group-2 tag
// vanishes and leaves the surrounding text contiguous. Runs without a
// single word character never become blocks. The block partition must
// reproduce exactly the surviving runs' tokens, in order.
void filtered_runs_walk(const DomNode& node, const TagTable& table,
                        std::vector<std::string>& runs, std::string& run) {
    auto cut = [&] {
        if (contains_word_char(run)) runs.push_back(run);
        run.clear();
    };
    for (const auto& item : node.items) {
        if (std::holds_alternative<std::string>(item)) {
            run += std::get<std::string>(item);
            continue;
        }
        const DomNode& child = *std::get<std::unique_ptr<DomNode>>(item);
        switch (table.classify(child.tag)) {
            case TagGroup::kGroup1:
                break;
            case TagGroup::kGroup2:
                filtered_runs_walk(child, table, runs, run);
                break;
            case TagGroup::kGroup3:
                cut();
                filtered_runs_walk(child, table, runs, run);
                cut();
                break;
        }
    }
}

std::vector<std::string> filtered_tokens(const DomNode& root) {
    std::vector<std::string> runs;
    std::string run;
    filtered_runs_walk(root, TagTable::builtin(), runs, run);
    if (contains_word_char(run)) runs.push_back(run);
    std::vector<std::string> out;
    for (const auto& r : runs)
        for (auto& t : split_whitespace(r)) out.push_back(std::move(t));
    return out;
}

std::vector<std::string> block_tokens(const BlockSequence& seq) {
    std::vector<std::string> out;
    for (const auto& b : seq.blocks) {
        for (auto& t : split_whitespace(b.text)) out.push_back(std::move(t));
    }
    return out;
}

bool blocks_equal(const BlockSequence& a, const BlockSequence& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    for (size_t i = 0; i < a.blocks.size(); ++i) {
        const TextBlock& x = a.blocks[i];
        const TextBlock& y = b.blocks[i];
        if (x.tag_seq != y.tag_seq || x.class_seq != y.class_seq ||
            x.text != y.text || x.origin_span != y.origin_span)
            return false;
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Search phase
// ---------------------------------------------------------------------------

TEST_CASE("search: group-1 subtree vanishes, path carries tags and classes") {
    auto seq = search_of("<div class=\"a\"><p>hello</p><script>x=1</script></div>");
    REQUIRE(seq.blocks.size() == 1);
    const TextBlock& b = seq.blocks[0];
    CHECK(b.tag_seq == std::vector<std::string>{"div", "p"});
    CHECK(b.class_seq == std::vector<std::string>{"a"});
    CHECK(b.text == "hello");
    CHECK(b.depth == 2);
    CHECK(b.leaf);
}

TEST_CASE("search: group-2 tags are transparent") {
    auto seq = search_of("<p><em>bold</em> tail</p>");
    REQUIRE(seq.blocks.size() == 1);
    CHECK(seq.blocks[0].tag_seq == std::vector<std::string>{"p"});
    CHECK(seq.blocks[0].text == "bold tail");
}

TEST_CASE("search: no text, no blocks") {
    CHECK(search_of("<div></div>").blocks.empty());
    CHECK(search_of("<div><p>   </p></div>").blocks.empty());
    // separator-only content is invalid text
    CHECK(search_of("<div><p>|</p><p>•</p></div>").blocks.empty());
}

TEST_CASE("search: blocks cut at every group-3 boundary, opening or closing") {
    auto seq = search_of("<div>a<p>b</p>c</div>");
    REQUIRE(seq.blocks.size() == 3);
    CHECK(seq.blocks[0].text == "a");
    CHECK(seq.blocks[0].tag_seq == std::vector<std::string>{"div"});
    CHECK(seq.blocks[1].text == "b");
    CHECK(seq.blocks[1].tag_seq == std::vector<std::string>{"div", "p"});
    CHECK(seq.blocks[2].text == "c");
    CHECK(seq.blocks[2].tag_seq == std::vector<std::string>{"div"});
    // document order and spans
    for (int i = 0; i < 3; ++i) {
        CHECK(seq.blocks[static_cast<size_t>(i)].origin_span ==
              std::pair<int, int>{i, i});
    }
}

TEST_CASE("search: class tokens accumulate along the path") {
    auto seq = search_of(
        "<div class=\"nav top\"><ul class=\"menu\"><li>x</li></ul></div>");
    REQUIRE(seq.blocks.size() == 1);
    CHECK(seq.blocks[0].tag_seq ==
          std::vector<std::string>{"div", "ul", "li"});
    CHECK(seq.blocks[0].class_seq ==
          std::vector<std::string>{"nav", "top", "menu"});
}

TEST_CASE("search: provenance marks leaves and parents") {
    auto seq = search_of("<div><p>a</p><p>b</p></div>");
    REQUIRE(seq.blocks.size() == 2);
    CHECK(seq.blocks[0].leaf);
    CHECK(seq.blocks[1].leaf);
    CHECK(seq.blocks[0].parent_id == seq.blocks[1].parent_id);
    CHECK(seq.blocks[0].element_id != seq.blocks[1].element_id);

    auto nested = search_of("<div>a<p>b</p></div>");
    REQUIRE(nested.blocks.size() == 2);
    CHECK_FALSE(nested.blocks[0].leaf);  // div still owns an open child
    CHECK(nested.blocks[0].group3_children == 1);
    CHECK(nested.blocks[1].parent_id == nested.blocks[0].element_id);
}

TEST_CASE("search: group-2 wrapper does not hide siblinghood") {
    auto seq = search_of("<div><span><p>a</p></span><p>b</p></div>");
    REQUIRE(seq.blocks.size() == 2);
    CHECK(seq.blocks[0].parent_id == seq.blocks[1].parent_id);
    CHECK(seq.blocks[0].tag_seq == seq.blocks[1].tag_seq);
}

// ---------------------------------------------------------------------------
// Combine phase
// ---------------------------------------------------------------------------

TEST_CASE("combine: leaf siblings with equal paths merge") {
    auto seq = segment_of(
        "<div class=\"a\"><p>x</p><p>y</p></div>");
    REQUIRE(seq.blocks.size() == 1);
    CHECK(seq.blocks[0].text == "x y");
    CHECK(seq.blocks[0].tag_seq == std::vector<std::string>{"div", "p"});
    CHECK(seq.blocks[0].class_seq == std::vector<std::string>{"a"});
    CHECK(seq.blocks[0].origin_span == std::pair<int, int>{0, 1});
}

TEST_CASE("combine: differing class paths keep blocks apart") {
    auto seq = segment_of(
        "<div><p class=\"a\">x</p><p class=\"b\">y</p></div>");
    REQUIRE(seq.blocks.size() == 2);
    CHECK(seq.blocks[0].text == "x");
    CHECK(seq.blocks[1].text == "y");
}

TEST_CASE("combine: differing tags keep blocks apart") {
    auto seq = segment_of("<div><h2>x</h2><p>y</p></div>");
    REQUIRE(seq.blocks.size() == 2);
}

TEST_CASE("combine: leaf single child folds into its parent block") {
    auto seq = segment_of("<div>intro<p>body</p></div>");
    REQUIRE(seq.blocks.size() == 1);
    CHECK(seq.blocks[0].text == "intro body");
    // merged block keeps the parent's shorter tag path
    CHECK(seq.blocks[0].tag_seq == std::vector<std::string>{"div"});
    CHECK(seq.blocks[0].leaf);
}

TEST_CASE("combine: single child with its own class stays separate") {
    auto seq = segment_of("<div>intro<p class=\"k\">body</p></div>");
    REQUIRE(seq.blocks.size() == 2);
}

TEST_CASE("combine: child of a multi-child parent stays separate") {
    auto seq = segment_of("<div>intro<p>a</p><h2>t</h2></div>");
    REQUIRE(seq.blocks.size() == 3);
}

TEST_CASE("combine: text runs of one element rejoin around an absorbed child") {
    auto seq = segment_of("<div>a<p>b</p>c</div>");
    REQUIRE(seq.blocks.size() == 1);
    CHECK(seq.blocks[0].text == "a b c");
    CHECK(seq.blocks[0].tag_seq == std::vector<std::string>{"div"});
}

TEST_CASE("combine: sibling merges stay within their parent") {
    auto seq = segment_of(
        "<div class=\"x\"><p>a</p><p>b</p></div>"
        "<div class=\"x\"><p>c</p><p>d</p></div>");
    REQUIRE(seq.blocks.size() == 2);
    CHECK(seq.blocks[0].text == "a b");
    CHECK(seq.blocks[1].text == "c d");
}

TEST_CASE("combine: a chain of equal siblings collapses to one block") {
    auto seq = segment_of(
        "<ul><li>one</li><li>two</li><li>three</li><li>four</li></ul>");
    REQUIRE(seq.blocks.size() == 1);
    CHECK(seq.blocks[0].text == "one two three four");
    CHECK(seq.blocks[0].origin_span == std::pair<int, int>{0, 3});
}

TEST_CASE("combine: single block passes through unchanged") {
    auto seq = segment_of("<p>only</p>");
    REQUIRE(seq.blocks.size() == 1);
    CHECK(seq.blocks[0].text == "only");
}

// ---------------------------------------------------------------------------
// Sequence properties
// ---------------------------------------------------------------------------

namespace {

const char* kPages[] = {
    "<html><body><div class=\"m\"><p>alpha beta</p><p>gamma</p></div>"
    "<div class=\"side\"><ul><li>one</li><li>two</li></ul></div></body></html>",

    "<div>a<p>b</p>c</div><div>tail</div>",

    "<article><h1>Title</h1><p>First paragraph with <em>emphasis</em>.</p>"
    "<p>Second paragraph.</p><aside class=\"ad\">buy now</aside></article>",

    "<table><tr><td>r1c1</td><td>r1c2</td></tr>"
    "<tr><td>r2c1</td><td>r2c2</td></tr></table>",

    "<div><div><p>deep</p></div></div>",

    "<body>loose text<div>boxed</div>more loose</body>",

    "<div class=\"a b\"><p class=\"c\">x</p><p class=\"c\">y</p>"
    "<p class=\"d\">z</p></div>",

    "<ul><li>plain<li>implicit close<li><strong>styled</strong></ul>",

    "<div><script>var x = '<p>fake</p>';</script><p>real</p></div>",

    "<section><header class=\"hd\">head</header><p>one</p><p>two</p>"
    "<footer class=\"ft\">foot</footer></section>",
};

}  // namespace

TEST_CASE("partition: block texts reproduce the filtered document tokens") {
    for (const char* page : kPages) {
        auto root = parse_html(page);
        auto oracle = filtered_tokens(*root);

        auto searched = search_phase(*root);
        CHECK(block_tokens(searched) == oracle);

        auto combined = combine_phase(searched);
        CHECK(block_tokens(combined) == oracle);
    }
}

TEST_CASE("combine is idempotent on every sample page") {
    for (const char* page : kPages) {
        auto root = parse_html(page);
        auto once = combine_phase(search_phase(*root));
        auto twice = combine_phase(once);
        CHECK(blocks_equal(once, twice));
    }
}

TEST_CASE("combine preserves order and never grows the sequence") {
    for (const char* page : kPages) {
        auto root = parse_html(page);
        auto searched = search_phase(*root);
        auto combined = combine_phase(searched);
        CHECK(combined.blocks.size() <= searched.blocks.size());
        for (size_t i = 0; i < combined.blocks.size(); ++i) {
            const TextBlock& b = combined.blocks[i];
            CHECK(b.origin_span.first <= b.origin_span.second);
            if (i > 0) {
                CHECK(combined.blocks[i - 1].origin_span.second <
                      b.origin_span.first);
            }
            CHECK(b.depth == static_cast<int>(b.tag_seq.size()));
        }
    }
}

TEST_CASE("segment composes the two phases") {
    auto root = parse_html(kPages[0]);
    auto via_parts = combine_phase(search_phase(*root));
    auto direct = segment(*root);
    CHECK(blocks_equal(via_parts, direct));
}

namespace {

std::vector<std::string> fixture_pages() {
    static std::vector<std::string> pages = [] {
        std::vector<std::filesystem::path> paths;
        for (const auto& entry : std::filesystem::directory_iterator(
                 SEMTEXT_FIXTURE_DIR "/html"))
            if (entry.path().extension() == ".html")
                paths.push_back(entry.path());
        std::sort(paths.begin(), paths.end());
        std::vector<std::string> out;
        for (const auto& p : paths) {
            std::ifstream f(p, std::ios::binary);
            REQUIRE(f);
            out.emplace_back(std::istreambuf_iterator<char>(f),
                             std::istreambuf_iterator<char>());
        }
        return out;
    }();
    return pages;
}

}  // namespace

TEST_CASE("fixture corpus: partition and idempotence hold on every page") {
    auto pages = fixture_pages();
    REQUIRE(pages.size() >= 25);
    for (const std::string& page : pages) {
        auto root = parse_html(page);
        auto oracle = filtered_tokens(*root);
        REQUIRE(!oracle.empty());

        auto searched = search_phase(*root);
        CHECK(block_tokens(searched) == oracle);
        auto combined = combine_phase(searched);
        CHECK(block_tokens(combined) == oracle);
        CHECK(combined.blocks.size() <= searched.blocks.size());

        auto twice = combine_phase(combined);
        CHECK(blocks_equal(combined, twice));

        for (size_t i = 0; i < combined.blocks.size(); ++i) {
            const TextBlock& b = combined.blocks[i];
            CHECK(b.origin_span.first <= b.origin_span.second);
            if (i > 0)
                CHECK(combined.blocks[i - 1].origin_span.second <
                      b.origin_span.first);
            CHECK(b.depth == static_cast<int>(b.tag_seq.size()));
        }
    }
}

TEST_CASE("segment warns but still works on degenerate depth") {
    std::string html = "<div><div><div><div><div><p>x</p></div></div></div>"
                       "</div></div>";
    auto root = parse_html(html);
    auto seq = segment(*root, TagTable::builtin(), 4);  // forces the warning
    REQUIRE(seq.blocks.size() == 1);
    CHECK(seq.blocks[0].text == "x");
}
