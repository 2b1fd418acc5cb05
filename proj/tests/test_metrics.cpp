#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "semtext/errors.hpp"
#include "semtext/metrics.hpp"

using namespace semtext;

namespace {

using Labels = std::vector<std::vector<Label>>;

std::vector<Label> labels(std::initializer_list<int> xs) {
    std::vector<Label> out;
    for (int x : xs) out.push_back(x ? Label::kMain : Label::kBoilerplate);
    return out;
}

// one page assembled from pooled confusion counts
std::vector<Label> repeat(size_t n, Label l) {
    return std::vector<Label>(n, l);
}

void append(std::vector<Label>& v, const std::vector<Label>& tail) {
    v.insert(v.end(), tail.begin(), tail.end());
}

}  // namespace

TEST_CASE("f1_score combines precision and recall") {
    CHECK(f1_score(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(f1_score(0.0, 0.0) == 0.0);
    CHECK(f1_score(1.0, 0.0) == doctest::Approx(0.0));
    CHECK(f1_score(0.5, 0.5) == doctest::Approx(0.5));
    // the worked example: P=0.91, R=0.89 rounds to 0.90
    double f = f1_score(0.91, 0.89);
    CHECK(f == doctest::Approx(2.0 * 0.91 * 0.89 / 1.80).epsilon(1e-12));
    CHECK(std::round(f * 100.0) / 100.0 == doctest::Approx(0.90));
}

TEST_CASE("evaluate pools counts into the anchor precision and recall") {
    // tp=8099, fp=801, fn=1001, tn=99 gives exactly P=0.91 and R=0.89
    std::vector<Label> pred, gold;
    append(pred, repeat(8099, Label::kMain));
    append(gold, repeat(8099, Label::kMain));
    append(pred, repeat(801, Label::kMain));
    append(gold, repeat(801, Label::kBoilerplate));
    append(pred, repeat(1001, Label::kBoilerplate));
    append(gold, repeat(1001, Label::kMain));
    append(pred, repeat(99, Label::kBoilerplate));
    append(gold, repeat(99, Label::kBoilerplate));

    EvalReport r = evaluate({pred}, {gold});
    CHECK(r.tp == 8099);
    CHECK(r.fp == 801);
    CHECK(r.fn == 1001);
    CHECK(r.tn == 99);
    CHECK(r.precision == doctest::Approx(0.91).epsilon(1e-12));
    CHECK(r.recall == doctest::Approx(0.89).epsilon(1e-12));
    CHECK(std::round(r.f1 * 100.0) / 100.0 == doctest::Approx(0.90));
}

TEST_CASE("evaluate handles perfect and degenerate predictions") {
    Labels gold{labels({1, 0, 1, 1}), labels({0, 0, 1})};

    SUBCASE("perfect match") {
        EvalReport r = evaluate(gold, gold);
        CHECK(r.precision == 1.0);
        CHECK(r.recall == 1.0);
        CHECK(r.f1 == 1.0);
        CHECK(r.fp == 0);
        CHECK(r.fn == 0);
    }
    SUBCASE("all boilerplate yields zero recall without dividing by zero") {
        Labels pred{labels({0, 0, 0, 0}), labels({0, 0, 0})};
        EvalReport r = evaluate(pred, gold);
        CHECK(r.tp == 0);
        CHECK(r.precision == 0.0);  // 0/0 counts as 0
        CHECK(r.recall == 0.0);
        CHECK(r.f1 == 0.0);
    }
    SUBCASE("all main floods precision") {
        Labels pred{labels({1, 1, 1, 1}), labels({1, 1, 1})};
        EvalReport r = evaluate(pred, gold);
        CHECK(r.tp == 4);
        CHECK(r.fp == 3);
        CHECK(r.fn == 0);
        CHECK(r.precision == doctest::Approx(4.0 / 7.0));
        CHECK(r.recall == 1.0);
    }
    SUBCASE("empty input") {
        EvalReport r = evaluate({}, {});
        CHECK(r.tp == 0);
        CHECK(r.f1 == 0.0);
        CHECK(r.pages.empty());
    }
}

TEST_CASE("swapping prediction and gold swaps precision and recall") {
    Labels a{labels({1, 0, 1, 0, 1}), labels({0, 1, 1})};
    Labels b{labels({1, 1, 0, 0, 1}), labels({1, 1, 0})};
    EvalReport ab = evaluate(a, b);
    EvalReport ba = evaluate(b, a);
    CHECK(ab.precision == doctest::Approx(ba.recall));
    CHECK(ab.recall == doctest::Approx(ba.precision));
    CHECK(ab.f1 == doctest::Approx(ba.f1));
    CHECK(ab.fp == ba.fn);
    CHECK(ab.fn == ba.fp);
}

TEST_CASE("page order does not change pooled or averaged scores") {
    Labels pred{labels({1, 0}), labels({1, 1, 0}), labels({0})};
    Labels gold{labels({1, 1}), labels({1, 0, 0}), labels({1})};
    EvalReport fwd = evaluate(pred, gold);
    Labels pred_rev(pred.rbegin(), pred.rend());
    Labels gold_rev(gold.rbegin(), gold.rend());
    EvalReport rev = evaluate(pred_rev, gold_rev);
    CHECK(fwd.precision == doctest::Approx(rev.precision));
    CHECK(fwd.recall == doctest::Approx(rev.recall));
    CHECK(fwd.f1 == doctest::Approx(rev.f1));
    CHECK(fwd.macro_f1 == doctest::Approx(rev.macro_f1));
    CHECK(fwd.tp == rev.tp);
    CHECK(fwd.tn == rev.tn);
}

TEST_CASE("macro scores average non-empty pages only") {
    Labels pred{labels({1, 1}), {}, labels({1, 0})};
    Labels gold{labels({1, 1}), {}, labels({0, 0})};
    EvalReport r = evaluate(pred, gold);
    // page 1: P=R=F1=1; page 3: P=0, R=0 (no gold main), F1=0; empty skipped
    CHECK(r.macro_precision == doctest::Approx(0.5));
    CHECK(r.macro_recall == doctest::Approx(0.5));
    CHECK(r.macro_f1 == doctest::Approx(0.5));
    CHECK(r.pages.size() == 3);
    CHECK(r.pages[1].tp + r.pages[1].fp + r.pages[1].fn + r.pages[1].tn == 0);
}

TEST_CASE("page ids are carried through to the per-page scores") {
    Labels pred{labels({1}), labels({0})};
    Labels gold{labels({1}), labels({1})};
    EvalReport named = evaluate(pred, gold, {"alpha", "beta"});
    CHECK(named.pages[0].id == "alpha");
    CHECK(named.pages[1].id == "beta");
    EvalReport anon = evaluate(pred, gold);
    CHECK(anon.pages[0].id.empty());
}

TEST_CASE("evaluate rejects misaligned inputs") {
    Labels two{labels({1}), labels({0})};
    Labels one{labels({1})};
    CHECK_THROWS_AS(evaluate(two, one), LengthMismatchError);
    Labels short_page{labels({1}), labels({0, 0})};
    try {
        evaluate(two, short_page);
        FAIL("expected LengthMismatchError");
    } catch (const LengthMismatchError& e) {
        CHECK(std::string(e.what()).find("page 1") != std::string::npos);
    }
}

TEST_CASE("report_to_json emits a parseable summary") {
    Labels pred{labels({1, 0, 1}), labels({0, 1})};
    Labels gold{labels({1, 1, 1}), labels({0, 1})};
    EvalReport r = evaluate(pred, gold, {"p1", "p2"});
    nlohmann::json j = nlohmann::json::parse(report_to_json(r));
    CHECK(j["tp"].get<size_t>() == r.tp);
    CHECK(j["fp"].get<size_t>() == r.fp);
    CHECK(j["fn"].get<size_t>() == r.fn);
    CHECK(j["tn"].get<size_t>() == r.tn);
    CHECK(j["precision"].get<double>() == doctest::Approx(r.precision));
    CHECK(j["recall"].get<double>() == doctest::Approx(r.recall));
    CHECK(j["f1"].get<double>() == doctest::Approx(r.f1));
    CHECK(j["macro_f1"].get<double>() == doctest::Approx(r.macro_f1));
    REQUIRE(j["pages"].size() == 2);
    CHECK(j["pages"][0]["id"] == "p1");
    CHECK(j["pages"][1]["id"] == "p2");
    CHECK(j["pages"][0]["f1"].get<double>() == doctest::Approx(r.pages[0].f1));
}
