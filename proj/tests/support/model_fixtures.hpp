#pragma once

#include <random>
#include <vector>

#include "factreason/inference.hpp"
#include "factreason/model_builder.hpp"
#include "factreason/pgm.hpp"

namespace factreason::testing {

// One atom with two contexts: the first entails it (p=0.8), the second
// contradicts it (p=0.9). Exact P(a1) = 0.0432 / 0.1359.
constexpr double kFig2PTrue = 0.0432 / 0.1359;

inline FrModel fig2_model() {
    AtomRecord atom{"a1", "atom", std::nullopt, false};
    ContextRecord c1;
    c1.context_id = "c1";
    c1.content = "context one";
    c1.retrieved_for = {"a1"};
    ContextRecord c2;
    c2.context_id = "c2";
    c2.content = "context two";
    c2.retrieved_for = {"a1"};
    const std::vector<RelationEdge> edges = {
        make_relation_edge("c1", "a1", Relation::kEntail, 0.8),
        make_relation_edge("c2", "a1", Relation::kContradict, 0.9),
    };
    return build_fr_model({atom}, {c1, c2}, edges, FrVariant{FrKind::kFr2, 3});
}

// Fig-2 plus a third context contradicting the second with the given strength.
inline FrModel fig3_model(double contradiction_p_star) {
    AtomRecord atom{"a1", "atom", std::nullopt, false};
    std::vector<ContextRecord> contexts;
    for (int i = 1; i <= 3; ++i) {
        ContextRecord ctx;
        ctx.context_id = "c" + std::to_string(i);
        ctx.content = "context " + std::to_string(i);
        ctx.retrieved_for = {"a1"};
        contexts.push_back(std::move(ctx));
    }
    const std::vector<RelationEdge> edges = {
        make_relation_edge("c1", "a1", Relation::kEntail, 0.8),
        make_relation_edge("c2", "a1", Relation::kContradict, 0.9),
        make_relation_edge("c3", "c2", Relation::kContradict, contradiction_p_star),
    };
    return build_fr_model({atom}, contexts, edges, FrVariant{FrKind::kFr3, 3});
}

// Random connected binary model: one unary factor per variable plus random
// pairwise factors, all values in (0,1].
inline GraphicalModel random_model(std::mt19937_64& rng, int max_vars = 12, int max_factors = 20) {
    std::uniform_int_distribution<int> var_count(2, max_vars);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = var_count(rng);

    GraphicalModel model;
    for (int i = 0; i < n; ++i) model.variables.push_back({i, "x" + std::to_string(i), 2});

    auto value = [&] { return 1.0 - unit(rng); };  // (0, 1]
    for (int i = 0; i < n; ++i) {
        Factor f;
        f.scope = {i};
        f.values = {value(), value()};
        model.factors.push_back(std::move(f));
    }
    const int extra = std::uniform_int_distribution<int>(0, std::max(0, max_factors - n))(rng);
    for (int e = 0; e < extra; ++e) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        const int a = pick(rng);
        int b = pick(rng);
        if (a == b) b = (b + 1) % n;
        Factor f;
        f.scope = {a, b};
        f.values = {value(), value(), value(), value()};
        model.factors.push_back(std::move(f));
    }
    return model;
}

struct StarEdge {
    Relation relation;
    double p_star;
    double context_prior;
};

// FR1 star instance: one atom and one unshared context per edge.
inline FrModel star_model(const std::vector<StarEdge>& spokes, double atom_prior = 0.5) {
    AtomRecord atom{"a1", "atom", std::nullopt, false};
    std::vector<ContextRecord> contexts;
    std::vector<RelationEdge> edges;
    for (std::size_t i = 0; i < spokes.size(); ++i) {
        ContextRecord ctx;
        ctx.context_id = "c" + std::to_string(i + 1);
        ctx.content = "context " + std::to_string(i + 1);
        ctx.prior_true = spokes[i].context_prior;
        ctx.retrieved_for = {"a1"};
        contexts.push_back(std::move(ctx));
        edges.push_back(make_relation_edge("c" + std::to_string(i + 1), "a1",
                                           spokes[i].relation, spokes[i].p_star));
    }
    return build_fr_model({atom}, contexts, edges,
                          FrVariant{FrKind::kFr1, static_cast<int>(spokes.size()) + 1},
                          atom_prior);
}

// Closed form for star models: posterior odds of the atom are the prior odds
// times one likelihood ratio per spoke, computed from the Table-1 factor and the
// context prior. Independent of the elimination machinery.
inline double star_closed_form(const std::vector<StarEdge>& spokes, double atom_prior = 0.5) {
    double odds = atom_prior / (1.0 - atom_prior);
    for (const StarEdge& spoke : spokes) {
        const RelationEdge edge = make_relation_edge("c", "a", spoke.relation, spoke.p_star);
        const Factor g = relation_factor(edge, 0, 1);  // rows (c,a): 00,01,10,11
        const double q = spoke.context_prior;
        const double num = q * g.values[3] + (1.0 - q) * g.values[1];
        const double den = q * g.values[2] + (1.0 - q) * g.values[0];
        odds *= num / den;
    }
    return odds / (1.0 + odds);
}

inline double exact_p_true(const GraphicalModel& model, int var) {
    return ve_marginals(model, min_fill_order(model)).marginals.p_true(var);
}

}  // namespace factreason::testing
