#include "doctest.h"

#include <stdexcept>

#include "urnkit/config.hpp"

using namespace urnkit;

TEST_CASE("flat key=value parsing") {
    auto cfg = ExperimentConfig::parse_text(
        "# comment line\n"
        "model.h11 = 2\n"
        "model.h12=4  # trailing comment\n"
        "model.h21 = 3\n"
        "model.h22 = 6\n"
        "\n"
        "analysis.seed = 42\n"
        "analysis.n_grid = 100, 200, 300\n");
    CHECK(cfg.get_double("model.h11") == 2.0);
    CHECK(cfg.get_double("model.h12") == 4.0);
    CHECK(cfg.get_u64("analysis.seed") == 42);
    CHECK(cfg.get_u64_list("analysis.n_grid") == std::vector<std::uint64_t>{100, 200, 300});
    CHECK(cfg.get_double("missing.key", 7.5) == 7.5);
    CHECK_THROWS_AS(cfg.get_double("missing.key"), std::invalid_argument);
}

TEST_CASE("malformed lines are rejected") {
    CHECK_THROWS_AS(ExperimentConfig::parse_text("no equals sign here\n"), std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::parse_text("= value\n"), std::invalid_argument);
    auto cfg = ExperimentConfig::parse_text("a.b = not_a_number\n");
    CHECK_THROWS_AS(cfg.get_double("a.b"), std::invalid_argument);
}

TEST_CASE("urn config construction from model keys") {
    auto cfg = ExperimentConfig::parse_text(
        "model.h11 = 2\nmodel.h12 = 4\nmodel.h21 = 3\nmodel.h22 = 6\n"
        "model.y1_0 = 1\nmodel.y2_0 = 1\nmodel.skew = power\nmodel.skew_p = 2\n");
    auto urn = cfg.urn_config();
    CHECK(urn.matrix.h1() == 5.0);
    CHECK(urn.matrix.h2() == 10.0);
    CHECK(urn.skew.family == SkewSpec::Family::Power);
    CHECK(urn.skew.power == 2.0);
}

TEST_CASE("table skew knots parse from the config") {
    auto cfg = ExperimentConfig::parse_text(
        "model.h11 = 4\nmodel.h12 = 1\nmodel.h21 = 5\nmodel.h22 = 4\n"
        "model.skew = table\nmodel.table = 0:0; 0.5:0.8; 1:1\n");
    auto urn = cfg.urn_config();
    REQUIRE(urn.skew.knots.size() == 3);
    CHECK(urn.skew.knots[1].first == 0.5);
    CHECK(urn.skew.knots[1].second == 0.8);

    CHECK_THROWS_AS(parse_knots("0:0; bad; 1:1"), std::invalid_argument);
}

TEST_CASE("unknown skew family is rejected") {
    auto cfg = ExperimentConfig::parse_text(
        "model.h11 = 2\nmodel.h12 = 4\nmodel.h21 = 3\nmodel.h22 = 6\nmodel.skew = cubic\n");
    CHECK_THROWS_AS(cfg.urn_config(), std::invalid_argument);
}
