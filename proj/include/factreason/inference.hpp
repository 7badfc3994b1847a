#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factreason/pgm.hpp"

namespace factreason {

struct EliminationOrder {
    /// Variable ids in elimination sequence (a true permutation of 0..n-1).
    std::vector<int> order;
    /// Largest number of uneliminated neighbours encountered along the order.
    int induced_width = 0;
};

struct WmbConfig {
    int i_bound = 6;
    /// Moment-matching cost-shifting passes per bucket.
    int iterations = 10;
    std::uint64_t seed = 0;
};

struct InferenceResult {
    MarginalTable marginals;
    double log_z = 0.0;
    /// Upper bound on log Z from the Hoelder relaxation; absent when exact.
    std::optional<double> log_z_upper;
    bool exact = false;
};

/// Min-fill elimination order with lowest-id tie-breaking. Deterministic.
EliminationOrder min_fill_order(const GraphicalModel& model);

/// Induced width of the given permutation on the model's primal graph.
int induced_width(const GraphicalModel& model, const std::vector<int>& order);

/// Exact marginals and log Z by bucket-tree elimination along `order`.
///
/// Guard: induced width must be at most 22, otherwise WidthExceededError.
/// Throws ZeroPartitionError when Z = 0.
InferenceResult ve_marginals(const GraphicalModel& model, const EliminationOrder& order);

/// Weighted mini-bucket marginals with a partition-function upper bound.
///
/// Buckets whose combined scope exceeds the i-bound are split into mini-buckets
/// with uniform Hoelder weights; `iterations` rounds of moment matching shift
/// mass between them before elimination. When no bucket ever splits the run is
/// exact: the result carries exact = true, log_z is the true value and
/// log_z_upper is absent. Otherwise log_z equals the upper bound.
InferenceResult wmb_marginals(const GraphicalModel& model, const EliminationOrder& order,
                              const WmbConfig& config);

/// Parses the UAI MARKOV interchange format. Only binary variables and factors
/// of arity 1-2 are accepted. Errors carry line/column positions.
GraphicalModel read_uai(const std::string& text);

/// Serializes a model to UAI MARKOV text. Round trips preserve factor values
/// to at least 12 significant digits.
std::string write_uai(const GraphicalModel& model);

}  // namespace factreason
