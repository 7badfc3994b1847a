#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "factreason/errors.hpp"
#include "factreason/inference.hpp"
#include "support/model_fixtures.hpp"

using namespace factreason;
namespace ft = factreason::testing;

namespace {

GraphicalModel chain_model(int n) {
    GraphicalModel model;
    for (int i = 0; i < n; ++i) model.variables.push_back({i, "x" + std::to_string(i), 2});
    for (int i = 0; i < n; ++i) model.factors.push_back({{i}, {0.4, 0.6}});
    for (int i = 0; i + 1 < n; ++i) model.factors.push_back({{i, i + 1}, {0.9, 0.2, 0.3, 0.8}});
    return model;
}

double max_marginal_gap(const MarginalTable& a, const MarginalTable& b) {
    double gap = 0.0;
    for (std::size_t i = 0; i < a.probs.size(); ++i) {
        gap = std::max(gap, std::abs(a.probs[i][1] - b.probs[i][1]));
        gap = std::max(gap, std::abs(a.probs[i][0] - b.probs[i][0]));
    }
    return gap;
}

}  // namespace

TEST_CASE("min_fill_order on a chain has width 1 and is deterministic") {
    const GraphicalModel model = chain_model(3);
    const EliminationOrder order = min_fill_order(model);
    CHECK(order.induced_width == 1);
    const EliminationOrder again = min_fill_order(model);
    CHECK(order.order == again.order);
}

TEST_CASE("min_fill_order on the two-context star has width 1") {
    CHECK(min_fill_order(ft::fig2_model().model).induced_width == 1);
}

TEST_CASE("min_fill_order on a triangle has width 2") {
    GraphicalModel model;
    for (int i = 0; i < 3; ++i) model.variables.push_back({i, "x", 2});
    model.factors.push_back({{0, 1}, {1, 2, 3, 4}});
    model.factors.push_back({{0, 2}, {1, 2, 3, 4}});
    model.factors.push_back({{1, 2}, {1, 2, 3, 4}});
    CHECK(min_fill_order(model).induced_width == 2);
}

TEST_CASE("ve_marginals matches enumeration on the worked example") {
    const GraphicalModel model = ft::fig2_model().model;
    const JointSummary oracle = enumerate_joint(model);
    const InferenceResult result = ve_marginals(model, min_fill_order(model));
    CHECK(result.exact);
    CHECK_FALSE(result.log_z_upper.has_value());
    CHECK(std::abs(result.marginals.p_true(0) - oracle.marginals.p_true(0)) < 1e-9);
    CHECK(std::abs(result.log_z - oracle.log_partition) < 1e-9);
}

TEST_CASE("ve_marginals is uniform for prior-only uniform models") {
    GraphicalModel model;
    for (int i = 0; i < 4; ++i) {
        model.variables.push_back({i, "x", 2});
        model.factors.push_back({{i}, {0.5, 0.5}});
    }
    const InferenceResult result = ve_marginals(model, min_fill_order(model));
    for (int i = 0; i < 4; ++i) {
        CHECK(result.marginals.p_true(i) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("ve_marginals reproduces the three-context posterior") {
    const GraphicalModel model = ft::fig3_model(0.9).model;
    const InferenceResult result = ve_marginals(model, min_fill_order(model));
    CHECK(std::abs(result.marginals.p_true(0) - 0.41159564276336813) < 1e-6);
}

TEST_CASE("ve_marginals is invariant to the elimination order") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const GraphicalModel model = ft::random_model(rng);
        EliminationOrder order = min_fill_order(model);
        const InferenceResult a = ve_marginals(model, order);
        std::reverse(order.order.begin(), order.order.end());
        order.induced_width = induced_width(model, order.order);
        const InferenceResult b = ve_marginals(model, order);
        CHECK(max_marginal_gap(a.marginals, b.marginals) < 1e-9);
        CHECK(std::abs(a.log_z - b.log_z) < 1e-9);
    }
}

TEST_CASE("ve_marginals equals brute-force enumeration on random models") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const GraphicalModel model = ft::random_model(rng);
        const JointSummary oracle = enumerate_joint(model);
        const InferenceResult result = ve_marginals(model, min_fill_order(model));
        CHECK(max_marginal_gap(result.marginals, oracle.marginals) < 1e-9);
        CHECK(std::abs(result.log_z - oracle.log_partition) < 1e-9);
    }
}

TEST_CASE("ve_marginals rejects excessive induced width") {
    GraphicalModel model;
    const int n = 24;
    for (int i = 0; i < n; ++i) model.variables.push_back({i, "x", 2});
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) model.factors.push_back({{i, j}, {1, 1, 1, 0.5}});
    }
    CHECK_THROWS_AS(ve_marginals(model, min_fill_order(model)), WidthExceededError);
}

TEST_CASE("ve_marginals reports a zero partition function") {
    GraphicalModel model;
    model.variables.push_back({0, "x0", 2});
    model.factors.push_back({{0}, {1.0, 0.0}});
    model.factors.push_back({{0}, {0.0, 1.0}});
    CHECK_THROWS_AS(ve_marginals(model, min_fill_order(model)), ZeroPartitionError);
}

TEST_CASE("isolated variables keep a uniform marginal and a doubled Z") {
    GraphicalModel model;
    model.variables.push_back({0, "x0", 2});
    model.variables.push_back({1, "x1", 2});
    model.factors.push_back({{0}, {0.3, 0.7}});
    model.metadata["isolated"] = "1";
    const InferenceResult result = ve_marginals(model, min_fill_order(model));
    CHECK(result.marginals.p_true(1) == doctest::Approx(0.5));
    CHECK(result.log_z == doctest::Approx(std::log(2.0)));
}

TEST_CASE("wmb at a generous i-bound is exact on the worked example") {
    const GraphicalModel model = ft::fig2_model().model;
    const EliminationOrder order = min_fill_order(model);
    const InferenceResult exact = ve_marginals(model, order);
    WmbConfig config;
    config.i_bound = 6;
    const InferenceResult approx = wmb_marginals(model, order, config);
    CHECK(approx.exact);
    CHECK_FALSE(approx.log_z_upper.has_value());
    CHECK(max_marginal_gap(approx.marginals, exact.marginals) < 1e-6);
    CHECK(std::abs(approx.log_z - exact.log_z) < 1e-6);
}

TEST_CASE("wmb an i-bound of 1 is exact when no bucket splits") {
    GraphicalModel model;
    model.variables.push_back({0, "x0", 2});
    model.factors.push_back({{0}, {0.25, 0.75}});
    WmbConfig config;
    config.i_bound = 1;
    const InferenceResult result = wmb_marginals(model, min_fill_order(model), config);
    CHECK(result.exact);
    CHECK(result.marginals.p_true(0) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("wmb upper-bounds log Z on loopy models") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        const GraphicalModel model = ft::random_model(rng, 10, 20);
        const JointSummary oracle = enumerate_joint(model);
        WmbConfig config;
        config.i_bound = 2;
        const InferenceResult result = wmb_marginals(model, min_fill_order(model), config);
        if (!result.exact) {
            REQUIRE(result.log_z_upper.has_value());
            CHECK(*result.log_z_upper >= oracle.log_partition - 1e-9);
        }
    }
}

TEST_CASE("wmb matches exact inference once the i-bound covers the width") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const GraphicalModel model = ft::random_model(rng);
        const EliminationOrder order = min_fill_order(model);
        const InferenceResult exact = ve_marginals(model, order);
        WmbConfig config;
        config.i_bound = order.induced_width + 1;
        const InferenceResult approx = wmb_marginals(model, order, config);
        CHECK(approx.exact);
        CHECK(max_marginal_gap(approx.marginals, exact.marginals) < 1e-6);
    }
}

TEST_CASE("wmb bound never loosens as the i-bound grows") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 25; ++trial) {
        const GraphicalModel model = ft::random_model(rng, 10, 20);
        const EliminationOrder order = min_fill_order(model);
        double previous = std::numeric_limits<double>::infinity();
        for (int i_bound = 1; i_bound <= order.induced_width + 1; ++i_bound) {
            WmbConfig config;
            config.i_bound = i_bound;
            const InferenceResult result = wmb_marginals(model, order, config);
            const double bound = result.log_z_upper.value_or(result.log_z);
            CHECK(bound <= previous + 1e-9);
            previous = bound;
        }
    }
}

TEST_CASE("wmb output is bit-identical across runs") {
    std::mt19937_64 rng(47);
    const GraphicalModel model = ft::random_model(rng, 10, 20);
    const EliminationOrder order = min_fill_order(model);
    WmbConfig config;
    config.i_bound = 2;
    config.seed = 123;
    const InferenceResult a = wmb_marginals(model, order, config);
    const InferenceResult b = wmb_marginals(model, order, config);
    CHECK(std::memcmp(a.marginals.probs.data(), b.marginals.probs.data(),
                      a.marginals.probs.size() * sizeof(a.marginals.probs[0])) == 0);
    CHECK(a.log_z == b.log_z);
}

TEST_CASE("wmb rejects a nonpositive i-bound") {
    const GraphicalModel model = ft::fig2_model().model;
    WmbConfig config;
    config.i_bound = 0;
    CHECK_THROWS_AS(wmb_marginals(model, min_fill_order(model), config), ConfigError);
}
