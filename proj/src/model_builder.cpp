#include "factreason/model_builder.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>

#include "factreason/errors.hpp"

namespace factreason {

namespace {

std::string normalize_link(const std::string& link) {
    std::size_t begin = 0;
    std::size_t end = link.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(link[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(link[end - 1]))) --end;
    std::string out = link.substr(begin, end - begin);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    while (!out.empty() && out.back() == '/') out.pop_back();
    return out;
}

std::string normalize_content(const std::string& content) {
    std::string out;
    out.reserve(content.size());
    bool in_space = true;  // leading whitespace is dropped
    for (unsigned char c : content) {
        if (std::isspace(c)) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string dedup_key(const ContextRecord& ctx) {
    const std::string link = normalize_link(ctx.link);
    if (!link.empty()) return "link:" + link;
    return "hash:" + std::to_string(fnv1a64(normalize_content(ctx.content)));
}

}  // namespace

double clamp_p_star(double p_star) {
    return std::min(std::max(p_star, 0.5), 1.0 - 1e-6);
}

RelationEdge make_relation_edge(std::string source_id, std::string target_id, Relation relation,
                                double p_star) {
    if (relation == Relation::kNone) {
        throw ConfigError("neutral relations are never materialized as edges");
    }
    if (source_id == target_id) {
        throw ConfigError("relation edge endpoints must differ: " + source_id);
    }
    RelationEdge edge;
    edge.source_id = std::move(source_id);
    edge.target_id = std::move(target_id);
    edge.relation = relation;
    edge.p_star = clamp_p_star(p_star);
    return edge;
}

std::string to_string(FrKind kind) {
    switch (kind) {
        case FrKind::kFr1: return "FR1";
        case FrKind::kFr2: return "FR2";
        case FrKind::kFr3: return "FR3";
    }
    return "FR?";
}

Factor prior_factor(int variable_id, double prob_true) {
    if (!(prob_true >= 0.0 && prob_true <= 1.0)) {
        throw ConfigError("prior probability out of range [0,1]");
    }
    Factor f;
    f.scope = {variable_id};
    f.values = {1.0 - prob_true, prob_true};
    return f;
}

Factor relation_factor(const RelationEdge& edge, int source_var, int target_var) {
    if (edge.relation == Relation::kNone) {
        throw ConfigError("relation_factor called with a neutral edge");
    }
    const double p = edge.p_star;
    Factor f;
    f.scope = {source_var, target_var};
    // rows over (source, target): (0,0), (0,1), (1,0), (1,1)
    switch (edge.relation) {
        case Relation::kEntail:
            f.values = {p, p, 1.0 - p, p};
            break;
        case Relation::kContradict:
            f.values = {p, p, p, 1.0 - p};
            break;
        case Relation::kEquivalence:
            f.values = {p, 1.0 - p, 1.0 - p, p};
            break;
        case Relation::kNone:
            break;
    }
    return f;
}

std::vector<ContextRecord> dedup_contexts(const std::vector<ContextRecord>& contexts) {
    std::vector<ContextRecord> out;
    std::map<std::string, std::size_t> seen;  // key -> index in out
    for (const ContextRecord& ctx : contexts) {
        const std::string key = dedup_key(ctx);
        auto it = seen.find(key);
        if (it == seen.end()) {
            seen.emplace(key, out.size());
            out.push_back(ctx);
        } else {
            ContextRecord& survivor = out[it->second];
            survivor.retrieved_for.insert(ctx.retrieved_for.begin(), ctx.retrieved_for.end());
        }
    }
    return out;
}

FrModel build_fr_model(const std::vector<AtomRecord>& atoms,
                       const std::vector<ContextRecord>& contexts,
                       const std::vector<RelationEdge>& edges, const FrVariant& variant,
                       double atom_prior, std::optional<double> context_prior_override) {
    if (variant.k_per_atom < 1) throw ConfigError("k_per_atom must be at least 1");

    FrModel out;
    out.contexts =
        variant.kind == FrKind::kFr1 ? contexts : dedup_contexts(contexts);

    GraphicalModel& model = out.model;
    model.metadata["variant"] = to_string(variant.kind);

    auto bind = [&](const std::string& id, const std::string& name) {
        if (out.bindings.count(id) > 0) {
            throw ConfigError("duplicate variable id '" + id + "'");
        }
        const int var = model.num_vars();
        out.bindings.emplace(id, var);
        model.variables.push_back({var, name, 2});
        return var;
    };

    for (const AtomRecord& atom : atoms) {
        const int var = bind(atom.atom_id, atom.atom_id);
        model.factors.push_back(prior_factor(var, atom_prior));
    }
    for (const ContextRecord& ctx : out.contexts) {
        const int var = bind(ctx.context_id, ctx.context_id);
        const double prior = context_prior_override.value_or(ctx.prior_true);
        model.factors.push_back(prior_factor(var, prior));
    }

    // FR1 admits only edges into an atom from a context ranked within the first
    // k_per_atom contexts retrieved for that atom; ranking is the context list order.
    std::map<std::string, std::set<std::string>> fr1_allowed;
    if (variant.kind == FrKind::kFr1) {
        std::map<std::string, int> taken;  // atom_id -> contexts admitted so far
        for (const ContextRecord& ctx : out.contexts) {
            for (const std::string& atom_id : ctx.retrieved_for) {
                int& count = taken[atom_id];
                if (count < variant.k_per_atom) {
                    fr1_allowed[atom_id].insert(ctx.context_id);
                    ++count;
                }
            }
        }
    }

    std::set<std::string> atom_ids;
    for (const AtomRecord& atom : atoms) atom_ids.insert(atom.atom_id);

    std::set<std::pair<std::string, std::string>> context_pairs_seen;
    for (const RelationEdge& edge : edges) {
        if (edge.relation == Relation::kNone) continue;
        const auto src = out.bindings.find(edge.source_id);
        const auto dst = out.bindings.find(edge.target_id);
        if (src == out.bindings.end()) {
            throw ConfigError("edge references unknown id '" + edge.source_id + "'");
        }
        if (dst == out.bindings.end()) {
            throw ConfigError("edge references unknown id '" + edge.target_id + "'");
        }
        if (atom_ids.count(edge.source_id) > 0) {
            throw ConfigError("edge source '" + edge.source_id +
                              "' is an atom; relations originate from contexts");
        }

        const bool target_is_atom = atom_ids.count(edge.target_id) > 0;
        if (target_is_atom) {
            if (variant.kind == FrKind::kFr1) {
                const auto allowed = fr1_allowed.find(edge.target_id);
                if (allowed == fr1_allowed.end() ||
                    allowed->second.count(edge.source_id) == 0) {
                    continue;
                }
            }
        } else {
            if (variant.kind != FrKind::kFr3) continue;  // context-context pairs are FR3-only
            auto key = std::minmax(edge.source_id, edge.target_id);
            if (!context_pairs_seen.insert({key.first, key.second}).second) {
                throw ConfigError("duplicate context-context edge for pair (" + key.first + ", " +
                                  key.second + ")");
            }
        }
        model.factors.push_back(relation_factor(edge, src->second, dst->second));
    }
    return out;
}

}  // namespace factreason
