#include "semtext/model.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace semtext;

namespace {

ModelConfig tiny_config() {
    ModelConfig c;
    c.n = 4;
    c.m = 6;
    c.k = 3;
    c.kernel_widths = {2, 3};
    c.kernel_counts = {2, 1};
    c.hidden = 3;
    return c;
}

}  // namespace

TEST_CASE("filter accounting and feature size") {
    ModelConfig c;  // defaults
    CHECK(c.filters_per_map() == 512);
    CHECK(c.feature_size() == 1536);

    ModelConfig t = tiny_config();
    CHECK(t.filters_per_map() == 3);
    CHECK(t.feature_size() == 9);
}

TEST_CASE("kernels wider than the word limit are dropped") {
    ModelConfig c;
    c.n = 4;  // default widths are 3, 5, 7
    auto groups = c.active_groups();
    REQUIRE(groups.size() == 1);
    CHECK(groups[0] == 0);
    CHECK(c.filters_per_map() == 128);
    c.validate();  // warns but does not throw
}

TEST_CASE("config validation rejects nonsense") {
    ModelConfig c = tiny_config();
    c.n = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = tiny_config();
    c.kernel_counts = {2};
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = tiny_config();
    c.kernel_widths = {9, 11};  // all wider than n
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = tiny_config();
    c.use_tags = c.use_classes = c.use_text = false;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = tiny_config();
    c.kernel_widths = {0, 3};
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = tiny_config();
    c.subword_buckets = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("parameter views tile the flat vector exactly") {
    ModelConfig c = tiny_config();
    size_t total = param_count(c);

    // expected total from first principles
    size_t conv = 0;
    for (size_t g = 0; g < 2; ++g)
        conv += 3 * (c.kernel_widths[g] * c.k * c.kernel_counts[g] +
                     c.kernel_counts[g]);
    size_t in = c.feature_size() + c.hidden;
    size_t lstm = 2 * 4 * (c.hidden * in + c.hidden);
    size_t head = 2 * (2 * c.hidden) + 2;  // emission
    size_t crf = 4 + 2 + 2;
    CHECK(total == conv + lstm + head + crf);

    // paint every region with its own marker; overlaps or gaps would show
    Eigen::VectorXd flat =
        Eigen::VectorXd::Constant(static_cast<Eigen::Index>(total), -1.0);
    ParamViews v(c, flat.data());
    double marker = 1.0;
    std::vector<std::pair<double, size_t>> expected;
    for (size_t map = 0; map < 3; ++map)
        for (size_t gi = 0; gi < 2; ++gi) {
            auto w = v.conv_w(map, gi);
            w.setConstant(marker);
            expected.push_back({marker++, static_cast<size_t>(w.size())});
            auto b = v.conv_b(map, gi);
            b.setConstant(marker);
            expected.push_back({marker++, static_cast<size_t>(b.size())});
        }
    for (size_t dir = 0; dir < 2; ++dir)
        for (size_t gate = 0; gate < 4; ++gate) {
            auto w = v.lstm_w(dir, static_cast<Gate>(gate));
            w.setConstant(marker);
            expected.push_back({marker++, static_cast<size_t>(w.size())});
            auto b = v.lstm_b(dir, static_cast<Gate>(gate));
            b.setConstant(marker);
            expected.push_back({marker++, static_cast<size_t>(b.size())});
        }
    v.emit_w().setConstant(marker);
    expected.push_back({marker++, 2 * 2 * c.hidden});
    v.emit_b().setConstant(marker);
    expected.push_back({marker++, 2});
    v.trans().setConstant(marker);
    expected.push_back({marker++, 4});
    v.trans_start().setConstant(marker);
    expected.push_back({marker++, 2});
    v.trans_stop().setConstant(marker);
    expected.push_back({marker++, 2});

    CHECK((flat.array() == -1.0).count() == 0);
    for (auto [value, count] : expected)
        CHECK(static_cast<size_t>((flat.array() == value).count()) == count);

    // view dimensions
    CHECK(v.conv_w(0, 0).rows() == 2 * 3);
    CHECK(v.conv_w(0, 1).rows() == 3 * 3);
    CHECK(v.conv_w(2, 1).cols() == 1);
    CHECK(v.lstm_w(1, Gate::kCell).cols() ==
          static_cast<Eigen::Index>(c.feature_size() + c.hidden));
    CHECK(v.emit_w().rows() == 2);
}

TEST_CASE("seeded init is deterministic and respects its bounds") {
    ModelConfig c = tiny_config();
    ModelParams a = ModelParams::init(c, 99);
    ModelParams b = ModelParams::init(c, 99);
    CHECK(a.flat == b.flat);

    ModelParams other = ModelParams::init(c, 100);
    CHECK(a.flat != other.flat);

    ConstParamViews v = a.views();
    for (size_t map = 0; map < 3; ++map)
        for (size_t gi = 0; gi < 2; ++gi) {
            double bound = std::sqrt(
                6.0 / (c.kernel_widths[gi] * static_cast<double>(c.k) + 1.0));
            CHECK(v.conv_w(map, gi).cwiseAbs().maxCoeff() <= bound);
            CHECK(v.conv_b(map, gi).isZero());
        }
    double lstm_bound = std::sqrt(1.0 / static_cast<double>(c.hidden));
    for (size_t dir = 0; dir < 2; ++dir) {
        for (size_t gate = 0; gate < 4; ++gate)
            CHECK(v.lstm_w(dir, static_cast<Gate>(gate))
                      .cwiseAbs()
                      .maxCoeff() <= lstm_bound);
        CHECK(v.lstm_b(dir, Gate::kForget) == Eigen::VectorXd::Ones(3));
        CHECK(v.lstm_b(dir, Gate::kInput).isZero());
        CHECK(v.lstm_b(dir, Gate::kOutput).isZero());
        CHECK(v.lstm_b(dir, Gate::kCell).isZero());
    }
    CHECK(v.emit_b().isZero());
    CHECK(v.trans().isZero());
    CHECK(v.trans_start().isZero());
    CHECK(v.trans_stop().isZero());
    // weights themselves should not all be zero
    CHECK(v.emit_w().cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("config equality covers every field") {
    ModelConfig a = tiny_config();
    ModelConfig b = tiny_config();
    CHECK(a == b);
    b.conv_relu = true;
    CHECK(!(a == b));
    b = tiny_config();
    b.subword_seed = 7;
    CHECK(!(a == b));
    b = tiny_config();
    b.embeddings_path = "x.vec";
    CHECK(!(a == b));
}
