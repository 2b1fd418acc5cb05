#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "semtext/dom.hpp"
#include "semtext/lexicalizer.hpp"
#include "semtext/errors.hpp"

using namespace semtext;

namespace {

using Words = std::vector<std::string>;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("tags map through the phrase table") {
    Lexicalizer lex;
    CHECK(lex.lexicalize_tags({"p"}) == Words{"paragraph"});
    CHECK(lex.lexicalize_tags({"h1"}) == Words{"primary", "headline"});
    CHECK(lex.lexicalize_tags({"div", "p"}) == Words{"division", "paragraph"});
    CHECK(lex.lexicalize_tags({"ul", "li"}) ==
          Words{"unordered", "list", "list", "item"});
    CHECK(lex.lexicalize_tags({}).empty());
}

TEST_CASE("unmapped tags pass through literally") {
    Lexicalizer lex;
    CHECK(lex.lexicalize_tags({"x-widget"}) == Words{"x-widget"});
}

TEST_CASE("class pipeline: delimiters, camel case, numbers, abbreviations") {
    Lexicalizer lex;
    CHECK(lex.lexicalize_classes({"story-feed__item"}) ==
          Words{"story", "feed", "item"});
    CHECK(lex.lexicalize_classes({"navBar2"}) == Words{"navigation", "bar"});
    CHECK(lex.lexicalize_classes({}).empty());
    CHECK(lex.lexicalize_classes({"col-md-6"}) == Words{"column", "medium"});
    CHECK(lex.lexicalize_classes({"HTMLContent"}) == Words{"html", "content"});
    CHECK(lex.lexicalize_classes({"sponsored.headline"}) ==
          Words{"sponsored", "headline"});
    CHECK(lex.lexicalize_classes({"a/b:c"}) == Words{"b", "c"});  // "a" stops
    CHECK(lex.lexicalize_classes({"footerLinks", "btn"}) ==
          Words{"footer", "links", "button"});
}

TEST_CASE("unconvertible class names are kept as is") {
    Lexicalizer lex;
    // pure number: every fragment is discarded, so the raw token survives
    CHECK(lex.lexicalize_classes({"123"}) == Words{"123"});
    CHECK(lex.lexicalize_classes({"___"}) == Words{"___"});
    // opaque tokens bypass the stopword list
    CHECK(lex.lexicalize_classes({"2-4"}) == Words{"2-4"});
}

TEST_CASE("class words that are stopwords vanish, converted only") {
    Lexicalizer lex;
    CHECK(lex.lexicalize_classes({"is-active"}) == Words{"active"});
    CHECK(lex.lexicalize_classes({"cta"}) == Words{"call", "action"});
}

TEST_CASE("text tokenization lowercases, strips stopwords and punctuation") {
    Lexicalizer lex;
    CHECK(lex.lexicalize_text("The US president visited the capital.") ==
          Words{"us", "president", "visited", "capital"});
    CHECK(lex.lexicalize_text("").empty());
    CHECK(lex.lexicalize_text("   ").empty());
    CHECK(lex.lexicalize_text("Limited time 20% off!") ==
          Words{"limited", "time", "20"});
    CHECK(lex.lexicalize_text("don't panic") == Words{"panic"});
}

TEST_CASE("every list truncates to max_words") {
    Lexicalizer lex;
    lex.set_max_words(3);
    std::string text;
    for (int i = 0; i < 200; ++i) text += "word" + std::to_string(i) + " ";
    CHECK(lex.lexicalize_text(text).size() == 3);
    CHECK(lex.lexicalize_tags({"p", "p", "p", "p", "p"}).size() == 3);
    CHECK(lex.lexicalize_classes({"alpha", "beta", "gamma", "delta"}).size() ==
          3);
    CHECK_THROWS_AS(lex.set_max_words(0), ConfigError);
}

TEST_CASE("a 200-word text yields exactly 50 tokens at the default cap") {
    Lexicalizer lex;
    std::string text;
    for (int i = 0; i < 200; ++i) text += "token" + std::to_string(i) + " ";
    CHECK(lex.lexicalize_text(text).size() == 50);
}

TEST_CASE("outputs never contain uppercase, whitespace or empty tokens") {
    Lexicalizer lex;
    auto check_clean = [](const Words& words) {
        for (const std::string& w : words) {
            CHECK_FALSE(w.empty());
            for (char c : w) {
                CHECK_FALSE((c >= 'A' && c <= 'Z'));
                CHECK_FALSE(c == ' ');
                CHECK_FALSE(c == '\t');
            }
        }
    };
    check_clean(lex.lexicalize_tags({"DIV", "h1", "custom-tag"}));
    check_clean(lex.lexicalize_classes(
        {"NavBar", "story-feed__item", "X9", "__", "CamelCaseToken"}));
    check_clean(lex.lexicalize_text("Mixed CASE text, WITH 42 Things!"));
}

TEST_CASE("lexicalize bundles the three word strings of a block") {
    Lexicalizer lex;
    TextBlock block;
    block.tag_seq = {"div", "p"};
    block.class_seq = {"article-body"};
    block.text = "Officials said the plan works.";
    WordStrings w = lex.lexicalize(block);
    CHECK(w.tag_words == Words{"division", "paragraph"});
    CHECK(w.class_words == Words{"article", "body"});
    CHECK(w.text_words == Words{"officials", "said", "plan", "works"});
}

TEST_CASE("tables load from files and override the defaults") {
    Lexicalizer lex;
    std::string dir = SEMTEXT_FIXTURE_DIR;
    {
        std::ofstream out(dir + "/tiny_phrases.tsv");
        out << "# test\np\tword block\n";
    }
    lex.load_tag_phrases(dir + "/tiny_phrases.tsv");
    CHECK(lex.lexicalize_tags({"p"}) == Words{"word", "block"});
    CHECK(lex.lexicalize_tags({"div"}) == Words{"div"});  // no longer mapped

    CHECK_THROWS_AS(lex.load_tag_phrases(dir + "/does_not_exist.tsv"),
                    IoError);
}

TEST_CASE("shipped data files match the embedded tables") {
    std::string data = std::string(SEMTEXT_DATA_DIR);
    CHECK(slurp(data + "/tag_groups.tsv") == builtin_tag_group_text());
    CHECK(slurp(data + "/tag_phrases.tsv") ==
          Lexicalizer::builtin_tag_phrase_text());
    CHECK(slurp(data + "/abbreviations.tsv") ==
          Lexicalizer::builtin_abbreviation_text());
    CHECK(slurp(data + "/stopwords.txt") ==
          Lexicalizer::builtin_stopword_text());
}

TEST_CASE("every group-3 tag with a phrase is also in the group table") {
    // keeps the two shipped tables from drifting apart
    const TagTable& groups = TagTable::builtin();
    Lexicalizer lex;
    for (const auto& tag :
         {"div", "p", "h1", "h2", "h3", "h4", "h5", "h6", "ul", "ol", "li",
          "table", "caption", "tr", "td", "th", "section", "article", "nav",
          "aside", "header", "footer", "blockquote", "figure"}) {
        CHECK(groups.classify(tag) == TagGroup::kGroup3);
        CHECK_FALSE(lex.lexicalize_tags({tag}).empty());
    }
}
