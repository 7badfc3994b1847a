#include "factreason/relations.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "factreason/concurrency.hpp"
#include "factreason/errors.hpp"
#include "factreason/prompts.hpp"

namespace factreason {

namespace {

const char* label_word(NliLabel label) {
    switch (label) {
        case NliLabel::kEntailment: return "entailment";
        case NliLabel::kContradiction: return "contradiction";
        case NliLabel::kNeutral: return "neutral";
    }
    return "";
}

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

/// A token matches a label word when one is a prefix of the other, e.g. the
/// tokenizer may emit "entail", "Entailment" or "contradiction.".
bool token_matches(const std::string& token, NliLabel label) {
    const std::string t = lowercase(trim(token));
    if (t.empty()) return false;
    const std::string word = label_word(label);
    if (t.size() <= word.size()) return word.compare(0, t.size(), t) == 0;
    return t.compare(0, word.size(), word) == 0;
}

void check_config(const RelationModelConfig& config) {
    if (!(config.fallback_p_star > 0.5 && config.fallback_p_star < 1.0)) {
        throw ConfigError("fallback_p_star must lie in (0.5, 1)");
    }
    if (config.temperature < 0.0) throw ConfigError("temperature must be nonnegative");
}

}  // namespace

std::string to_string(NliLabel label) { return label_word(label); }

std::optional<double> probability_from_logprobs(const std::vector<TokenLogprob>& token_logprobs,
                                                NliLabel parsed_label) {
    // Locate the token where the emitted label begins.
    const TokenLogprob* anchor = nullptr;
    for (const TokenLogprob& tok : token_logprobs) {
        if (token_matches(tok.token, parsed_label)) {
            anchor = &tok;
            break;
        }
    }
    if (anchor == nullptr) return std::nullopt;

    std::vector<TopLogprob> pool = anchor->top;
    const bool anchor_listed =
        std::any_of(pool.begin(), pool.end(),
                    [&](const TopLogprob& alt) { return alt.token == anchor->token; });
    if (!anchor_listed) pool.push_back({anchor->token, anchor->logprob});

    const NliLabel labels[] = {NliLabel::kEntailment, NliLabel::kContradiction,
                               NliLabel::kNeutral};
    double total = 0.0;
    double emitted = 0.0;
    for (const TopLogprob& alt : pool) {
        for (NliLabel label : labels) {
            if (token_matches(alt.token, label)) {
                const double p = std::exp(alt.logprob);
                total += p;
                if (label == parsed_label) emitted += p;
                break;
            }
        }
    }
    if (emitted <= 0.0 || total <= 0.0) return std::nullopt;
    return std::min(std::max(emitted / total, 0.5), 1.0 - 1e-6);
}

NliJudgment classify_relation(const std::string& premise, const std::string& hypothesis,
                              const std::string& context_text, const RelationModelConfig& config,
                              ChatClient& client) {
    check_config(config);
    if (trim(premise).empty() || trim(hypothesis).empty()) {
        throw ConfigError("premise and hypothesis must be non-empty");
    }
    const std::string& context = context_text.empty() ? premise : context_text;
    ChatRequest request;
    request.model = config.model_name;
    request.messages = {{"user", prompts::nli(premise, hypothesis, context)}};
    request.temperature = config.temperature;
    request.logprobs = config.request_logprobs;

    const ChatResponse response = client.complete(request);
    const std::string reply = lowercase(response.content);

    struct Hit {
        std::size_t pos;
        NliLabel label;
    };
    std::optional<Hit> best;
    for (NliLabel label :
         {NliLabel::kEntailment, NliLabel::kContradiction, NliLabel::kNeutral}) {
        // scan for the stem so "entail", "entails" and "entailment" all match
        const char* stem = label == NliLabel::kEntailment      ? "entail"
                           : label == NliLabel::kContradiction ? "contradict"
                                                                : "neutral";
        const std::size_t pos = reply.find(stem);
        if (pos != std::string::npos && (!best || pos < best->pos)) best = Hit{pos, label};
    }
    if (!best) {
        throw ReplyParseError("relation reply contains no entail/contradict/neutral keyword: '" +
                              response.content + "'");
    }

    NliJudgment judgment;
    judgment.label = best->label;
    judgment.raw_reply = response.content;
    if (judgment.label != NliLabel::kNeutral) {
        judgment.p_star = probability_from_logprobs(response.logprobs, judgment.label)
                              .value_or(config.fallback_p_star);
    }
    return judgment;
}

std::optional<RelationEdge> extract_pair_relation(const Utterance& source,
                                                  const Utterance& target, PairKind kind,
                                                  const RelationModelConfig& config,
                                                  ChatClient& client) {
    if (kind == PairKind::kContextAtom) {
        const NliJudgment j = classify_relation(source.text, target.text, "", config, client);
        switch (j.label) {
            case NliLabel::kEntailment:
                return make_relation_edge(source.id, target.id, Relation::kEntail, *j.p_star);
            case NliLabel::kContradiction:
                return make_relation_edge(source.id, target.id, Relation::kContradict, *j.p_star);
            case NliLabel::kNeutral:
                return std::nullopt;
        }
        return std::nullopt;
    }

    const NliJudgment forward = classify_relation(source.text, target.text, "", config, client);
    const NliJudgment backward = classify_relation(target.text, source.text, "", config, client);

    if (forward.label == NliLabel::kEntailment && backward.label == NliLabel::kEntailment) {
        return make_relation_edge(source.id, target.id, Relation::kEquivalence,
                                  std::min(*forward.p_star, *backward.p_star));
    }
    if (forward.label == NliLabel::kNeutral && backward.label == NliLabel::kNeutral) {
        return std::nullopt;
    }
    if (forward.label == NliLabel::kContradiction && backward.label == NliLabel::kContradiction) {
        // both orderings agree; the contradiction factor is symmetric so the
        // direction is immaterial, keep the first ordering and the weaker p*
        return make_relation_edge(source.id, target.id, Relation::kContradict,
                                  std::min(*forward.p_star, *backward.p_star));
    }
    if (forward.label != NliLabel::kNeutral && backward.label != NliLabel::kNeutral) {
        return std::nullopt;  // conflicting non-neutral labels cannot both be trusted
    }
    if (forward.label != NliLabel::kNeutral) {
        return make_relation_edge(source.id, target.id,
                                  forward.label == NliLabel::kEntailment ? Relation::kEntail
                                                                         : Relation::kContradict,
                                  *forward.p_star);
    }
    return make_relation_edge(target.id, source.id,
                              backward.label == NliLabel::kEntailment ? Relation::kEntail
                                                                      : Relation::kContradict,
                              *backward.p_star);
}

std::vector<std::optional<RelationEdge>> extract_relations(
    const std::vector<std::pair<Utterance, Utterance>>& pairs, PairKind kind,
    const RelationModelConfig& config, ChatClient& client) {
    std::vector<std::optional<RelationEdge>> out(pairs.size());
    parallel_for_indexed(pairs.size(), config.concurrency, [&](std::size_t i) {
        out[i] = extract_pair_relation(pairs[i].first, pairs[i].second, kind, config, client);
    });
    return out;
}

}  // namespace factreason
