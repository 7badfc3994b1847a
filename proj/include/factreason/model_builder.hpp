#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "factreason/pgm.hpp"

namespace factreason {

/// One atomic unit decomposed from a response.
struct AtomRecord {
    std::string atom_id;
    std::string text;
    /// Character range of the atom within the original response, when known.
    std::optional<std::pair<std::size_t, std::size_t>> source_span;
    /// Set when the reviser could not produce a standalone rewrite.
    bool revision_failed = false;
};

enum class ContextSource { kWikipedia, kWebSearch, kInline };

/// A retrieved evidence passage: the (title, link, snippet, content) tuple.
struct ContextRecord {
    std::string context_id;
    std::string title;
    std::string link;
    std::string snippet;
    std::string content;  // capped at 4000 characters by the retriever
    ContextSource source = ContextSource::kWikipedia;
    double prior_true = 0.99;
    std::set<std::string> retrieved_for;

    /// Text used when this context enters a relation prompt.
    const std::string& utterance() const { return content.empty() ? snippet : content; }
};

enum class Relation { kEntail, kContradict, kEquivalence, kNone };

/// A directed relation judgment between a context and an atom or another context.
/// Neutral pairs are never materialized as edges.
struct RelationEdge {
    std::string source_id;
    std::string target_id;
    Relation relation = Relation::kNone;
    double p_star = 0.5;
};

/// Clamps p* into [0.5, 1 - 1e-6]: below 0.5 the Table-1 encoding would invert the
/// relation's meaning, and p* = 1 would create hard zeros.
double clamp_p_star(double p_star);

/// Builds an edge with the clamp applied. Relation must not be kNone.
RelationEdge make_relation_edge(std::string source_id, std::string target_id, Relation relation,
                                double p_star);

enum class FrKind { kFr1, kFr2, kFr3 };

struct FrVariant {
    FrKind kind = FrKind::kFr2;
    int k_per_atom = 3;  // FR1 context budget
};

std::string to_string(FrKind kind);

/// Unary prior factor: (false -> 1 - prob_true, true -> prob_true).
Factor prior_factor(int variable_id, double prob_true);

/// Pairwise factor over (source, target) encoding the relation judgment.
/// Stored row-major over (source, target) assignments (0,0),(0,1),(1,0),(1,1).
Factor relation_factor(const RelationEdge& edge, int source_var, int target_var);

/// Merges duplicated contexts, order-stable. The duplicate key is the normalized
/// link when non-empty, otherwise a 64-bit stable hash of the case-folded,
/// whitespace-collapsed content. retrieved_for sets are unioned into the survivor.
std::vector<ContextRecord> dedup_contexts(const std::vector<ContextRecord>& contexts);

struct FrModel {
    GraphicalModel model;
    /// atom_id / context_id -> variable id
    std::map<std::string, int> bindings;
    /// Contexts actually materialized as variables (deduped for FR2/FR3).
    std::vector<ContextRecord> contexts;
};

/// Assembles the FR1/FR2/FR3 graphical model from atoms, contexts and extracted
/// relation edges. Atom variables come first, then context variables, each with a
/// unary prior; pairwise factors follow the variant's pairing rule. Atoms with no
/// incident edge keep their prior only. For FR2/FR3 the contexts are deduped and
/// edges must reference post-dedup context ids.
FrModel build_fr_model(const std::vector<AtomRecord>& atoms,
                       const std::vector<ContextRecord>& contexts,
                       const std::vector<RelationEdge>& edges, const FrVariant& variant,
                       double atom_prior = 0.5,
                       std::optional<double> context_prior_override = std::nullopt);

}  // namespace factreason
