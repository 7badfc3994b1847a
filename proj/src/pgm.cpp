#include "factreason/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>

#include "factreason/errors.hpp"

namespace factreason {

namespace {

constexpr int kEnumerationGuard = 25;

std::set<int> parse_isolated(const GraphicalModel& model) {
    std::set<int> out;
    auto it = model.metadata.find("isolated");
    if (it == model.metadata.end()) return out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.insert(std::stoi(tok));
    }
    return out;
}

}  // namespace

std::size_t Factor::index_of(const std::vector<int>& assignment) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < scope.size(); ++i) {
        idx = idx * 2 + static_cast<std::size_t>(assignment[i]);
    }
    return idx;
}

ValidationResult validate_model(const GraphicalModel& model) {
    ValidationResult result;
    auto violate = [&](const std::string& msg) {
        result.ok = false;
        result.violations.push_back(msg);
    };

    const int n = model.num_vars();
    for (int i = 0; i < n; ++i) {
        const Variable& v = model.variables[static_cast<std::size_t>(i)];
        if (v.id != i) {
            violate("variable at position " + std::to_string(i) + " has id " +
                    std::to_string(v.id) + "; ids must be dense 0..n-1");
        }
        if (v.cardinality != 2) {
            violate("variable " + std::to_string(v.id) + " has cardinality " +
                    std::to_string(v.cardinality) + "; only binary variables are supported");
        }
    }

    std::vector<bool> touched(static_cast<std::size_t>(n), false);
    for (std::size_t fi = 0; fi < model.factors.size(); ++fi) {
        const Factor& f = model.factors[fi];
        const std::string tag = "factor " + std::to_string(fi);
        if (f.scope.empty() || f.scope.size() > 2) {
            violate(tag + " has scope arity " + std::to_string(f.scope.size()) +
                    "; only unary and pairwise factors are supported");
            continue;
        }
        std::set<int> distinct(f.scope.begin(), f.scope.end());
        if (distinct.size() != f.scope.size()) {
            violate(tag + " repeats a variable in its scope");
        }
        bool scope_ok = true;
        for (int v : f.scope) {
            if (v < 0 || v >= n) {
                violate(tag + " references unknown variable " + std::to_string(v));
                scope_ok = false;
            }
        }
        if (!scope_ok) continue;
        const std::size_t expected = std::size_t{1} << f.scope.size();
        if (f.values.size() != expected) {
            violate(tag + " has table length " + std::to_string(f.values.size()) +
                    ", expected " + std::to_string(expected));
        }
        for (double v : f.values) {
            if (!(v >= 0.0) || std::isnan(v)) {
                violate(tag + " has negative factor value");
                break;
            }
        }
        for (int v : f.scope) touched[static_cast<std::size_t>(v)] = true;
    }

    const std::set<int> isolated = parse_isolated(model);
    for (int i = 0; i < n; ++i) {
        if (!touched[static_cast<std::size_t>(i)] && isolated.count(i) == 0) {
            violate("variable " + std::to_string(i) +
                    " appears in no factor and is not marked isolated");
        }
    }
    return result;
}

JointSummary enumerate_joint(const GraphicalModel& model) {
    const int n = model.num_vars();
    if (n > kEnumerationGuard) {
        throw TooManyVariablesError("enumerate_joint supports at most " +
                                    std::to_string(kEnumerationGuard) + " variables, got " +
                                    std::to_string(n));
    }

    // Canonical factor order makes the accumulation bit-identical under
    // permutation of the input factor list.
    std::vector<const Factor*> order;
    order.reserve(model.factors.size());
    for (const Factor& f : model.factors) order.push_back(&f);
    std::sort(order.begin(), order.end(), [](const Factor* a, const Factor* b) {
        if (a->scope != b->scope) return a->scope < b->scope;
        return a->values < b->values;
    });

    JointSummary out;
    out.marginals.probs.assign(static_cast<std::size_t>(n), {0.0, 0.0});
    double z = 0.0;

    const std::uint64_t total = std::uint64_t{1} << n;
    std::vector<int> assignment(static_cast<std::size_t>(n), 0);
    for (std::uint64_t code = 0; code < total; ++code) {
        for (int i = 0; i < n; ++i) {
            assignment[static_cast<std::size_t>(i)] = static_cast<int>((code >> (n - 1 - i)) & 1u);
        }
        double w = 1.0;
        for (const Factor* f : order) {
            std::size_t idx = 0;
            for (int v : f->scope) idx = idx * 2 + static_cast<std::size_t>(assignment[static_cast<std::size_t>(v)]);
            w *= f->values[idx];
            if (w == 0.0) break;
        }
        if (w == 0.0) continue;
        z += w;
        for (int i = 0; i < n; ++i) {
            out.marginals.probs[static_cast<std::size_t>(i)][static_cast<std::size_t>(
                assignment[static_cast<std::size_t>(i)])] += w;
        }
    }

    if (z <= 0.0) {
        throw ZeroPartitionError("partition function is zero: contradictory hard factors");
    }
    for (auto& pair : out.marginals.probs) {
        pair[0] /= z;
        pair[1] /= z;
    }
    out.log_partition = std::log(z);
    return out;
}

}  // namespace factreason
