#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace factreason {

/// A binary variable of a discrete graphical model. Ids are dense 0..n-1 within a
/// model; value 0 means false and value 1 means true.
struct Variable {
    int id = 0;
    std::string name;
    int cardinality = 2;
};

/// A nonnegative table over a scope of one or two variables.
///
/// Values are stored row-major over scope assignments with the *last* scope
/// variable as the least significant index: for a pairwise scope (X, Y) the order
/// is (0,0), (0,1), (1,0), (1,1). Value index 1 means true. The Table-1 relation
/// encodings in model_builder depend on this convention.
struct Factor {
    std::vector<int> scope;
    std::vector<double> values;

    /// Index into `values` for the given per-scope-variable assignment.
    std::size_t index_of(const std::vector<int>& assignment) const;
};

struct GraphicalModel {
    std::vector<Variable> variables;
    std::vector<Factor> factors;
    /// Free-form tags (variant, provenance). The key "isolated" may hold a
    /// comma-separated list of variable ids that intentionally appear in no factor.
    std::map<std::string, std::string> metadata;

    int num_vars() const { return static_cast<int>(variables.size()); }
};

/// Per-variable (P_false, P_true) pairs, indexed by variable id.
struct MarginalTable {
    std::vector<std::array<double, 2>> probs;

    double p_true(int var) const { return probs.at(static_cast<std::size_t>(var))[1]; }
    double p_false(int var) const { return probs.at(static_cast<std::size_t>(var))[0]; }
};

struct ValidationResult {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Checks every type invariant: dense binary variables, factor scopes of arity 1-2
/// referencing existing variables, nonnegative tables of the right length, and
/// every variable either touched by a factor or listed in metadata["isolated"].
/// Violations are data, not faults; nothing throws.
ValidationResult validate_model(const GraphicalModel& model);

struct JointSummary {
    MarginalTable marginals;
    double log_partition = 0.0;
};

/// Ground-truth marginals and log Z by literal summation over all 2^n assignments.
///
/// Used as the oracle for all inference testing. Factors are multiplied in a
/// canonical order so the output is bit-identical under factor permutation.
/// Throws TooManyVariablesError above 25 variables and ZeroPartitionError when
/// the model has no assignment with positive mass.
JointSummary enumerate_joint(const GraphicalModel& model);

}  // namespace factreason
