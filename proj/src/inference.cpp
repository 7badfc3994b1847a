#include "factreason/inference.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "factreason/errors.hpp"

namespace factreason {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kWidthGuard = 22;

// ---------------------------------------------------------------------------
// Log-domain tables. Scope is sorted ascending; the first scope variable is the
// most significant index bit, matching the Factor value layout.
// ---------------------------------------------------------------------------

struct LogTable {
    std::vector<int> scope;
    std::vector<double> logv;
};

std::size_t table_size(std::size_t arity) { return std::size_t{1} << arity; }

LogTable from_factor(const Factor& f) {
    LogTable t;
    t.scope = f.scope;
    std::vector<std::size_t> perm(t.scope.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return f.scope[a] < f.scope[b]; });
    std::sort(t.scope.begin(), t.scope.end());

    const std::size_t k = t.scope.size();
    t.logv.assign(table_size(k), 0.0);
    for (std::size_t idx = 0; idx < t.logv.size(); ++idx) {
        // idx is an assignment over the sorted scope; map back to the factor's
        // original scope order to fetch the value.
        std::size_t fidx = 0;
        for (std::size_t fi = 0; fi < k; ++fi) {
            // position of original scope var fi within the sorted scope
            std::size_t sorted_pos = 0;
            for (std::size_t j = 0; j < k; ++j) {
                if (perm[j] == fi) {
                    sorted_pos = j;
                    break;
                }
            }
            const std::size_t bit = (idx >> (k - 1 - sorted_pos)) & 1u;
            fidx = fidx * 2 + bit;
        }
        const double v = f.values[fidx];
        t.logv[idx] = v > 0.0 ? std::log(v) : kNegInf;
    }
    return t;
}

std::vector<int> scope_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Positions (bit extractors) of `sub` variables inside assignment indices of `sup`.
std::vector<int> bit_positions(const std::vector<int>& sub, const std::vector<int>& sup) {
    std::vector<int> pos;
    pos.reserve(sub.size());
    const int k = static_cast<int>(sup.size());
    for (int v : sub) {
        const auto it = std::lower_bound(sup.begin(), sup.end(), v);
        const int p = static_cast<int>(it - sup.begin());
        pos.push_back(k - 1 - p);
    }
    return pos;
}

// Product of log tables materialized on `scope` (a sorted superset of every part).
LogTable product_on(const std::vector<const LogTable*>& parts, std::vector<int> scope) {
    LogTable out;
    out.scope = std::move(scope);
    out.logv.assign(table_size(out.scope.size()), 0.0);
    for (const LogTable* part : parts) {
        const std::vector<int> bits = bit_positions(part->scope, out.scope);
        const std::size_t pk = part->scope.size();
        for (std::size_t idx = 0; idx < out.logv.size(); ++idx) {
            std::size_t pidx = 0;
            for (std::size_t i = 0; i < pk; ++i) {
                pidx = pidx * 2 + ((idx >> bits[i]) & 1u);
            }
            out.logv[idx] += part->logv[pidx];
        }
    }
    return out;
}

double log_sum_exp2(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Weighted power sum eliminating a single variable:
//   out = w * log( sum_x exp(logv(x, rest) / w) )
// w = 1 is the ordinary sum.
LogTable power_sum_out(const LogTable& t, int var, double w) {
    const std::size_t k = t.scope.size();
    const auto it = std::lower_bound(t.scope.begin(), t.scope.end(), var);
    const std::size_t vi = static_cast<std::size_t>(it - t.scope.begin());

    LogTable out;
    out.scope.reserve(k - 1);
    for (int v : t.scope)
        if (v != var) out.scope.push_back(v);
    out.logv.assign(table_size(out.scope.size()), 0.0);

    const std::size_t var_bit = std::size_t{1} << (k - 1 - vi);
    const std::size_t low_mask = var_bit - 1;
    for (std::size_t oidx = 0; oidx < out.logv.size(); ++oidx) {
        const std::size_t high = oidx >> (k - 1 - vi);
        const std::size_t low = oidx & low_mask;
        const std::size_t base = (high << (k - vi)) | low;
        const double a0 = t.logv[base];
        const double a1 = t.logv[base | var_bit];
        if (w == 1.0) {
            out.logv[oidx] = log_sum_exp2(a0, a1);
        } else {
            out.logv[oidx] = w * log_sum_exp2(a0 / w, a1 / w);
        }
    }
    return out;
}

// Eliminates every scope variable not in `keep` (sorted), all with weight w.
LogTable power_sum_to(LogTable t, const std::vector<int>& keep, double w) {
    std::vector<int> elim;
    std::set_difference(t.scope.begin(), t.scope.end(), keep.begin(), keep.end(),
                        std::back_inserter(elim));
    for (int v : elim) t = power_sum_out(t, v, w);
    return t;
}

// ---------------------------------------------------------------------------
// Mini-bucket tree engine. i_bound caps the number of variables per mini-bucket;
// when no bucket ever splits the run is exact bucket-tree elimination.
// ---------------------------------------------------------------------------

struct Cluster {
    int elim_var = -1;
    double weight = 1.0;
    std::vector<int> scope;
    std::vector<LogTable> items;
    std::vector<int> item_child;  // sender cluster per item, -1 for original factors
    LogTable shift;               // moment-matching correction on {elim_var}
    int parent = -1;
    LogTable parent_msg;
    bool has_parent_msg = false;
};

struct PendingItem {
    LogTable table;
    int child_cluster;  // -1 for original factors
    int seq;            // deterministic tie-breaker
};

struct EngineOutput {
    MarginalTable marginals;
    double log_z = 0.0;
    bool exact = true;
};

void check_inputs(const GraphicalModel& model, const std::vector<int>& order) {
    const int n = model.num_vars();
    if (static_cast<int>(order.size()) != n) {
        throw ConfigError("elimination order length does not match variable count");
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : order) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
            throw ConfigError("elimination order is not a permutation of variable ids");
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
    for (const Factor& f : model.factors) {
        for (int v : f.scope) {
            if (v < 0 || v >= n) throw ConfigError("factor references unknown variable");
        }
        if (f.scope.empty()) throw ConfigError("factor with empty scope");
    }
}

EngineOutput run_bucket_engine(const GraphicalModel& model, const std::vector<int>& order,
                               int i_bound, int iterations) {
    check_inputs(model, order);
    const int n = model.num_vars();

    std::vector<int> position(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) position[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

    auto earliest_var = [&](const std::vector<int>& scope) {
        int best = scope.front();
        for (int v : scope) {
            if (position[static_cast<std::size_t>(v)] < position[static_cast<std::size_t>(best)]) best = v;
        }
        return best;
    };

    std::vector<std::vector<PendingItem>> pending(static_cast<std::size_t>(n));
    int seq = 0;
    for (const Factor& f : model.factors) {
        LogTable t = from_factor(f);
        const int target = earliest_var(t.scope);
        pending[static_cast<std::size_t>(target)].push_back({std::move(t), -1, seq++});
    }

    std::vector<Cluster> clusters;
    std::vector<std::vector<int>> bucket_clusters(static_cast<std::size_t>(n));
    double log_z = 0.0;
    int isolated = 0;
    bool split = false;

    for (int step = 0; step < n; ++step) {
        const int x = order[static_cast<std::size_t>(step)];
        auto items = std::move(pending[static_cast<std::size_t>(x)]);
        if (items.empty()) {
            ++isolated;  // free variable: implicit uniform, contributes a factor of 2 to Z
            continue;
        }
        std::sort(items.begin(), items.end(), [](const PendingItem& a, const PendingItem& b) {
            if (a.table.scope.size() != b.table.scope.size())
                return a.table.scope.size() > b.table.scope.size();
            if (a.table.scope != b.table.scope) return a.table.scope < b.table.scope;
            return a.seq < b.seq;
        });

        // Greedy first-fit partition into mini-buckets of at most i_bound variables.
        // An item may join a mini-bucket it does not grow beyond its own size, so
        // oversized factors still share a home with identical-scope items.
        std::vector<int> local;  // cluster indices of this bucket
        for (PendingItem& item : items) {
            int home = -1;
            for (int ci : local) {
                Cluster& c = clusters[static_cast<std::size_t>(ci)];
                std::vector<int> u = scope_union(c.scope, item.table.scope);
                const int limit = std::max<int>(
                    i_bound, static_cast<int>(std::max(c.scope.size(), item.table.scope.size())));
                if (static_cast<int>(u.size()) <= limit) {
                    c.scope = std::move(u);
                    home = ci;
                    break;
                }
            }
            if (home < 0) {
                Cluster c;
                c.elim_var = x;
                c.scope = item.table.scope;
                home = static_cast<int>(clusters.size());
                clusters.push_back(std::move(c));
                local.push_back(home);
            }
            Cluster& c = clusters[static_cast<std::size_t>(home)];
            if (item.child_cluster >= 0) {
                clusters[static_cast<std::size_t>(item.child_cluster)].parent = home;
            }
            c.items.push_back(std::move(item.table));
            c.item_child.push_back(item.child_cluster);
        }
        bucket_clusters[static_cast<std::size_t>(x)] = local;
        if (local.size() > 1) split = true;

        const double w = 1.0 / static_cast<double>(local.size());
        for (int ci : local) {
            Cluster& c = clusters[static_cast<std::size_t>(ci)];
            c.weight = w;
            c.shift.scope = {x};
            c.shift.logv.assign(2, 0.0);
        }

        // Moment matching between mini-buckets of the same bucket.
        if (local.size() > 1 && iterations > 0) {
            for (int it = 0; it < iterations; ++it) {
                std::vector<LogTable> beliefs;
                beliefs.reserve(local.size());
                for (int ci : local) {
                    Cluster& c = clusters[static_cast<std::size_t>(ci)];
                    std::vector<const LogTable*> parts;
                    for (const LogTable& t : c.items) parts.push_back(&t);
                    parts.push_back(&c.shift);
                    LogTable prod = product_on(parts, c.scope);
                    beliefs.push_back(power_sum_to(std::move(prod), {x}, c.weight));
                }
                for (int value = 0; value < 2; ++value) {
                    double geo = 0.0;
                    bool usable = true;
                    for (std::size_t q = 0; q < local.size(); ++q) {
                        const double b = beliefs[q].logv[static_cast<std::size_t>(value)];
                        if (!std::isfinite(b)) {
                            usable = false;
                            break;
                        }
                        geo += w * b;
                    }
                    if (!usable) continue;
                    for (std::size_t q = 0; q < local.size(); ++q) {
                        Cluster& c = clusters[static_cast<std::size_t>(local[q])];
                        c.shift.logv[static_cast<std::size_t>(value)] +=
                            w * (geo - beliefs[q].logv[static_cast<std::size_t>(value)]);
                    }
                }
            }
        }

        // Eliminate x from every mini-bucket and route the messages.
        for (int ci : local) {
            Cluster& c = clusters[static_cast<std::size_t>(ci)];
            std::vector<const LogTable*> parts;
            for (const LogTable& t : c.items) parts.push_back(&t);
            parts.push_back(&c.shift);
            LogTable prod = product_on(parts, c.scope);
            LogTable msg = power_sum_out(prod, x, c.weight);
            if (msg.scope.empty()) {
                log_z += msg.logv[0];
            } else {
                const int target = earliest_var(msg.scope);
                pending[static_cast<std::size_t>(target)].push_back({std::move(msg), ci, seq++});
            }
        }
    }

    log_z += static_cast<double>(isolated) * std::log(2.0);
    if (!std::isfinite(log_z)) {
        throw ZeroPartitionError("partition function is zero: contradictory hard factors");
    }

    // Upward pass: parents were created after their children, so a reverse sweep
    // visits every parent before its children.
    for (int ci = static_cast<int>(clusters.size()) - 1; ci >= 0; --ci) {
        Cluster& c = clusters[static_cast<std::size_t>(ci)];
        for (std::size_t k = 0; k < c.items.size(); ++k) {
            const int child = c.item_child[k];
            if (child < 0) continue;
            std::vector<const LogTable*> parts;
            std::vector<int> scope;
            for (std::size_t j = 0; j < c.items.size(); ++j) {
                if (j == k) continue;
                parts.push_back(&c.items[j]);
                scope = scope_union(scope, c.items[j].scope);
            }
            parts.push_back(&c.shift);
            scope = scope_union(scope, c.shift.scope);
            if (c.has_parent_msg) {
                parts.push_back(&c.parent_msg);
                scope = scope_union(scope, c.parent_msg.scope);
            }
            const std::vector<int>& sep = c.items[k].scope;
            scope = scope_union(scope, sep);
            LogTable prod = product_on(parts, scope);
            LogTable pm = power_sum_to(std::move(prod), sep, c.weight);
            clusters[static_cast<std::size_t>(child)].parent_msg = std::move(pm);
            clusters[static_cast<std::size_t>(child)].has_parent_msg = true;
        }
    }

    EngineOutput out;
    out.exact = !split;
    out.log_z = log_z;
    out.marginals.probs.assign(static_cast<std::size_t>(n), {0.5, 0.5});
    for (int v = 0; v < n; ++v) {
        const auto& local = bucket_clusters[static_cast<std::size_t>(v)];
        if (local.empty()) continue;
        double acc0 = 0.0;
        double acc1 = 0.0;
        for (int ci : local) {
            Cluster& c = clusters[static_cast<std::size_t>(ci)];
            std::vector<const LogTable*> parts;
            std::vector<int> scope = c.scope;
            for (const LogTable& t : c.items) parts.push_back(&t);
            parts.push_back(&c.shift);
            if (c.has_parent_msg) {
                parts.push_back(&c.parent_msg);
                scope = scope_union(scope, c.parent_msg.scope);
            }
            LogTable prod = product_on(parts, scope);
            LogTable b = power_sum_to(std::move(prod), {v}, c.weight);
            // normalize before the geometric combination so weights act on shape only
            const double lse = log_sum_exp2(b.logv[0], b.logv[1]);
            acc0 += c.weight * (b.logv[0] - lse);
            acc1 += c.weight * (b.logv[1] - lse);
        }
        const double lse = log_sum_exp2(acc0, acc1);
        if (!std::isfinite(lse)) {
            throw ZeroPartitionError("variable " + std::to_string(v) + " has zero belief mass");
        }
        out.marginals.probs[static_cast<std::size_t>(v)] = {std::exp(acc0 - lse),
                                                            std::exp(acc1 - lse)};
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Orders
// ---------------------------------------------------------------------------

int induced_width(const GraphicalModel& model, const std::vector<int>& order) {
    const int n = model.num_vars();
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    for (const Factor& f : model.factors) {
        for (std::size_t i = 0; i < f.scope.size(); ++i) {
            for (std::size_t j = i + 1; j < f.scope.size(); ++j) {
                adj[static_cast<std::size_t>(f.scope[i])].insert(f.scope[j]);
                adj[static_cast<std::size_t>(f.scope[j])].insert(f.scope[i]);
            }
        }
    }
    std::vector<bool> eliminated(static_cast<std::size_t>(n), false);
    int width = 0;
    for (int x : order) {
        std::vector<int> nbrs;
        for (int y : adj[static_cast<std::size_t>(x)]) {
            if (!eliminated[static_cast<std::size_t>(y)]) nbrs.push_back(y);
        }
        width = std::max(width, static_cast<int>(nbrs.size()));
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                adj[static_cast<std::size_t>(nbrs[i])].insert(nbrs[j]);
                adj[static_cast<std::size_t>(nbrs[j])].insert(nbrs[i]);
            }
        }
        eliminated[static_cast<std::size_t>(x)] = true;
    }
    return width;
}

EliminationOrder min_fill_order(const GraphicalModel& model) {
    const int n = model.num_vars();
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    for (const Factor& f : model.factors) {
        for (std::size_t i = 0; i < f.scope.size(); ++i) {
            for (std::size_t j = i + 1; j < f.scope.size(); ++j) {
                adj[static_cast<std::size_t>(f.scope[i])].insert(f.scope[j]);
                adj[static_cast<std::size_t>(f.scope[j])].insert(f.scope[i]);
            }
        }
    }

    EliminationOrder result;
    std::vector<bool> eliminated(static_cast<std::size_t>(n), false);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        long best_fill = std::numeric_limits<long>::max();
        for (int v = 0; v < n; ++v) {
            if (eliminated[static_cast<std::size_t>(v)]) continue;
            std::vector<int> nbrs;
            for (int y : adj[static_cast<std::size_t>(v)]) {
                if (!eliminated[static_cast<std::size_t>(y)]) nbrs.push_back(y);
            }
            long fill = 0;
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                    if (adj[static_cast<std::size_t>(nbrs[i])].count(nbrs[j]) == 0) ++fill;
                }
            }
            if (fill < best_fill) {  // ties break to the lowest id by scan order
                best_fill = fill;
                best = v;
            }
        }
        std::vector<int> nbrs;
        for (int y : adj[static_cast<std::size_t>(best)]) {
            if (!eliminated[static_cast<std::size_t>(y)]) nbrs.push_back(y);
        }
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                adj[static_cast<std::size_t>(nbrs[i])].insert(nbrs[j]);
                adj[static_cast<std::size_t>(nbrs[j])].insert(nbrs[i]);
            }
        }
        eliminated[static_cast<std::size_t>(best)] = true;
        result.order.push_back(best);
    }
    result.induced_width = induced_width(model, result.order);
    return result;
}

// ---------------------------------------------------------------------------
// Inference entry points
// ---------------------------------------------------------------------------

InferenceResult ve_marginals(const GraphicalModel& model, const EliminationOrder& order) {
    const int width = induced_width(model, order.order);
    if (width > kWidthGuard) {
        throw WidthExceededError("induced width " + std::to_string(width) +
                                 " exceeds the exact-inference guard of " +
                                 std::to_string(kWidthGuard));
    }
    EngineOutput eng = run_bucket_engine(model, order.order, std::numeric_limits<int>::max() / 2, 0);
    InferenceResult out;
    out.marginals = std::move(eng.marginals);
    out.log_z = eng.log_z;
    out.exact = true;
    return out;
}

InferenceResult wmb_marginals(const GraphicalModel& model, const EliminationOrder& order,
                              const WmbConfig& config) {
    if (config.i_bound < 1) throw ConfigError("i_bound must be at least 1");
    if (config.iterations < 0) throw ConfigError("iterations must be nonnegative");
    EngineOutput eng = run_bucket_engine(model, order.order, config.i_bound, config.iterations);
    InferenceResult out;
    out.marginals = std::move(eng.marginals);
    out.log_z = eng.log_z;
    out.exact = eng.exact;
    if (!eng.exact) out.log_z_upper = eng.log_z;
    return out;
}

// ---------------------------------------------------------------------------
// UAI MARKOV interchange
// ---------------------------------------------------------------------------

namespace {

struct Token {
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::optional<Token> next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            advance();
        }
        if (pos_ >= text_.size()) return std::nullopt;
        Token tok;
        tok.line = line_;
        tok.column = column_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            tok.text.push_back(text_[pos_]);
            advance();
        }
        return tok;
    }

    int line() const { return line_; }
    int column() const { return column_; }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

Token expect(Lexer& lex, const char* what) {
    auto tok = lex.next();
    if (!tok) {
        throw UaiParseError(lex.line(), lex.column(), std::string("unexpected end of input, expected ") + what);
    }
    return *tok;
}

long parse_int(const Token& tok, const char* what) {
    try {
        std::size_t used = 0;
        const long v = std::stol(tok.text, &used);
        if (used != tok.text.size()) throw std::invalid_argument(tok.text);
        return v;
    } catch (const std::exception&) {
        throw UaiParseError(tok.line, tok.column,
                            std::string("expected ") + what + ", got '" + tok.text + "'");
    }
}

double parse_real(const Token& tok) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok.text, &used);
        if (used != tok.text.size()) throw std::invalid_argument(tok.text);
        return v;
    } catch (const std::exception&) {
        throw UaiParseError(tok.line, tok.column, "expected real number, got '" + tok.text + "'");
    }
}

}  // namespace

GraphicalModel read_uai(const std::string& text) {
    Lexer lex(text);
    const Token header = expect(lex, "'MARKOV' preamble");
    if (header.text != "MARKOV") {
        throw UaiParseError(header.line, header.column,
                            "expected 'MARKOV' preamble, got '" + header.text + "'");
    }
    const long n = parse_int(expect(lex, "variable count"), "variable count");
    if (n < 0) throw UaiParseError(lex.line(), lex.column(), "negative variable count");

    GraphicalModel model;
    for (long i = 0; i < n; ++i) {
        const Token tok = expect(lex, "variable cardinality");
        const long card = parse_int(tok, "variable cardinality");
        if (card != 2) {
            throw UaiParseError(tok.line, tok.column,
                                "unsupported cardinality " + std::to_string(card) +
                                    " for variable " + std::to_string(i) + "; only binary supported");
        }
        model.variables.push_back({static_cast<int>(i), "x" + std::to_string(i), 2});
    }

    const long m = parse_int(expect(lex, "factor count"), "factor count");
    if (m < 0) throw UaiParseError(lex.line(), lex.column(), "negative factor count");

    std::vector<std::vector<int>> scopes;
    for (long fi = 0; fi < m; ++fi) {
        const Token atok = expect(lex, "factor arity");
        const long arity = parse_int(atok, "factor arity");
        if (arity < 1 || arity > 2) {
            throw UaiParseError(atok.line, atok.column,
                                "unsupported factor arity " + std::to_string(arity) +
                                    "; only unary and pairwise factors supported");
        }
        std::vector<int> scope;
        for (long j = 0; j < arity; ++j) {
            const Token vtok = expect(lex, "scope variable id");
            const long v = parse_int(vtok, "scope variable id");
            if (v < 0 || v >= n) {
                throw UaiParseError(vtok.line, vtok.column,
                                    "scope references unknown variable " + std::to_string(v));
            }
            scope.push_back(static_cast<int>(v));
        }
        scopes.push_back(std::move(scope));
    }

    for (long fi = 0; fi < m; ++fi) {
        const Token ctok = expect(lex, "table size");
        const long count = parse_int(ctok, "table size");
        const long expected = 1L << scopes[static_cast<std::size_t>(fi)].size();
        if (count != expected) {
            throw UaiParseError(ctok.line, ctok.column,
                                "table size " + std::to_string(count) + " does not match scope (expected " +
                                    std::to_string(expected) + ")");
        }
        Factor f;
        f.scope = scopes[static_cast<std::size_t>(fi)];
        for (long j = 0; j < count; ++j) {
            f.values.push_back(parse_real(expect(lex, "table value")));
        }
        model.factors.push_back(std::move(f));
    }

    if (auto tok = lex.next()) {
        throw UaiParseError(tok->line, tok->column, "unexpected trailing token '" + tok->text + "'");
    }
    return model;
}

std::string write_uai(const GraphicalModel& model) {
    std::ostringstream out;
    out << "MARKOV\n" << model.num_vars() << "\n";
    for (int i = 0; i < model.num_vars(); ++i) {
        out << (i ? " " : "") << model.variables[static_cast<std::size_t>(i)].cardinality;
    }
    out << "\n" << model.factors.size() << "\n";
    for (const Factor& f : model.factors) {
        out << f.scope.size();
        for (int v : f.scope) out << " " << v;
        out << "\n";
    }
    out << "\n";
    out << std::setprecision(17);
    for (const Factor& f : model.factors) {
        out << f.values.size() << "\n";
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            out << (i ? " " : "") << f.values[i];
        }
        out << "\n\n";
    }
    return out.str();
}

}  // namespace factreason
