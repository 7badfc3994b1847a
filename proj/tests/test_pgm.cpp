#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "factreason/errors.hpp"
#include "factreason/pgm.hpp"
#include "support/model_fixtures.hpp"

using namespace factreason;
namespace ft = factreason::testing;

TEST_CASE("factor value layout: last scope variable is least significant") {
    Factor f;
    f.scope = {3, 7};
    f.values = {1.0, 2.0, 3.0, 4.0};
    CHECK(f.index_of({0, 0}) == 0);
    CHECK(f.index_of({0, 1}) == 1);
    CHECK(f.index_of({1, 0}) == 2);
    CHECK(f.index_of({1, 1}) == 3);
}

TEST_CASE("validate_model flags negative factor values") {
    GraphicalModel model;
    model.variables.push_back({0, "x0", 2});
    model.factors.push_back({{0}, {0.5, -0.1}});
    const ValidationResult result = validate_model(model);
    CHECK_FALSE(result.ok);
    REQUIRE(result.violations.size() == 1);
    CHECK(result.violations[0].find("negative factor value") != std::string::npos);
}

TEST_CASE("validate_model accepts the empty model") {
    CHECK(validate_model(GraphicalModel{}).ok);
}

TEST_CASE("validate_model accepts the two-context example model") {
    CHECK(validate_model(ft::fig2_model().model).ok);
}

TEST_CASE("validate_model catches structural problems") {
    GraphicalModel model;
    model.variables.push_back({0, "x0", 2});
    model.variables.push_back({1, "x1", 2});

    SUBCASE("unknown variable in scope") {
        model.factors.push_back({{0, 5}, {1, 1, 1, 1}});
        model.factors.push_back({{1}, {1, 1}});
        CHECK_FALSE(validate_model(model).ok);
    }
    SUBCASE("wrong table length") {
        model.factors.push_back({{0, 1}, {1, 1}});
        CHECK_FALSE(validate_model(model).ok);
    }
    SUBCASE("repeated scope variable") {
        model.factors.push_back({{0, 0}, {1, 1, 1, 1}});
        model.factors.push_back({{1}, {1, 1}});
        CHECK_FALSE(validate_model(model).ok);
    }
    SUBCASE("untouched variable") {
        model.factors.push_back({{0}, {1, 1}});
        const ValidationResult result = validate_model(model);
        CHECK_FALSE(result.ok);
        CHECK(result.violations[0].find("not marked isolated") != std::string::npos);
    }
    SUBCASE("untouched variable marked isolated") {
        model.factors.push_back({{0}, {1, 1}});
        model.metadata["isolated"] = "1";
        CHECK(validate_model(model).ok);
    }
}

TEST_CASE("enumerate_joint normalizes a single prior") {
    GraphicalModel model;
    model.variables.push_back({0, "x0", 2});
    model.factors.push_back({{0}, {0.3, 0.7}});
    const JointSummary joint = enumerate_joint(model);
    CHECK(joint.marginals.p_true(0) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(joint.log_partition == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("enumerate_joint reproduces the worked two-context posterior") {
    const JointSummary joint = enumerate_joint(ft::fig2_model().model);
    CHECK(std::abs(joint.marginals.p_true(0) - ft::kFig2PTrue) < 1e-12);
    CHECK(std::abs(joint.marginals.p_true(0) - 0.3179) < 1e-4);
}

TEST_CASE("enumerate_joint keeps independent variables independent") {
    GraphicalModel model;
    model.variables.push_back({0, "x0", 2});
    model.variables.push_back({1, "x1", 2});
    model.factors.push_back({{0}, {0.6, 0.4}});
    model.factors.push_back({{1}, {0.2, 0.8}});
    const JointSummary joint = enumerate_joint(model);
    CHECK(joint.marginals.p_true(0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(joint.marginals.p_true(1) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(std::exp(joint.log_partition) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumerate_joint guards against variable blowup") {
    GraphicalModel model;
    for (int i = 0; i < 26; ++i) {
        model.variables.push_back({i, "x", 2});
        model.factors.push_back({{i}, {0.5, 0.5}});
    }
    CHECK_THROWS_AS(enumerate_joint(model), TooManyVariablesError);
}

TEST_CASE("enumerate_joint reports a zero partition function") {
    GraphicalModel model;
    model.variables.push_back({0, "x0", 2});
    model.factors.push_back({{0}, {1.0, 0.0}});
    model.factors.push_back({{0}, {0.0, 1.0}});
    CHECK_THROWS_AS(enumerate_joint(model), ZeroPartitionError);
}

TEST_CASE("marginals of random models sum to one") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const GraphicalModel model = ft::random_model(rng, 8, 14);
        REQUIRE(validate_model(model).ok);
        const JointSummary joint = enumerate_joint(model);
        for (const auto& pair : joint.marginals.probs) {
            CHECK(std::abs(pair[0] + pair[1] - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("scaling one factor shifts log Z and leaves marginals alone") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        GraphicalModel model = ft::random_model(rng, 8, 14);
        const JointSummary before = enumerate_joint(model);
        const double c = 3.25;
        for (double& v : model.factors[trial % model.factors.size()].values) v *= c;
        const JointSummary after = enumerate_joint(model);
        CHECK(std::abs(after.log_partition - before.log_partition - std::log(c)) < 1e-9);
        for (std::size_t i = 0; i < before.marginals.probs.size(); ++i) {
            CHECK(std::abs(after.marginals.probs[i][1] - before.marginals.probs[i][1]) < 1e-9);
        }
    }
}

TEST_CASE("factor order does not change enumerate_joint output at all") {
    std::mt19937_64 rng(13);
    GraphicalModel model = ft::random_model(rng, 10, 18);
    const JointSummary a = enumerate_joint(model);
    std::shuffle(model.factors.begin(), model.factors.end(), rng);
    const JointSummary b = enumerate_joint(model);
    CHECK(a.log_partition == b.log_partition);
    for (std::size_t i = 0; i < a.marginals.probs.size(); ++i) {
        CHECK(a.marginals.probs[i][0] == b.marginals.probs[i][0]);
        CHECK(a.marginals.probs[i][1] == b.marginals.probs[i][1]);
    }
}
