#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "factreason/chat.hpp"
#include "factreason/model_builder.hpp"

namespace factreason {

enum class NliLabel { kEntailment, kContradiction, kNeutral };

std::string to_string(NliLabel label);

struct NliJudgment {
    NliLabel label = NliLabel::kNeutral;
    /// Confidence derived from token log-probabilities; absent for neutral.
    std::optional<double> p_star;
    std::string raw_reply;
};

struct RelationModelConfig {
    std::string endpoint;
    std::string model_name;
    double temperature = 0.0;
    int max_retries = 3;
    bool request_logprobs = true;
    /// Used when the reply carries no usable logprob block.
    double fallback_p_star = 0.95;
    /// Upper bound on concurrent classification requests.
    int concurrency = 8;
};

/// Classifies the (premise, hypothesis) pair with the few-shot NLI prompt.
/// When context_text is empty the prompt's Context line carries the premise
/// itself. The label is the first of entail/contradict/neutral appearing in the
/// reply, case-insensitively.
NliJudgment classify_relation(const std::string& premise, const std::string& hypothesis,
                              const std::string& context_text, const RelationModelConfig& config,
                              ChatClient& client);

/// Confidence of the parsed label: the emitted label token's probability
/// renormalized over whichever label tokens appear among its top alternatives,
/// clamped to [0.5, 1 - 1e-6]. Returns nullopt when the logprob block carries no
/// usable label token (caller substitutes fallback_p_star).
std::optional<double> probability_from_logprobs(const std::vector<TokenLogprob>& token_logprobs,
                                                NliLabel parsed_label);

enum class PairKind { kContextAtom, kContextContext };

struct Utterance {
    std::string id;
    std::string text;
};

/// Extracts the relation edge for a pair, or nullopt for neutral pairs.
///
/// context_atom: one call with premise = context, hypothesis = atom.
/// context_context: both orderings are classified; two entailments merge into an
/// equivalence with the weaker confidence, a single non-neutral judgment keeps
/// its direction, agreement on contradiction keeps the first ordering, and
/// conflicting non-neutral labels yield no edge.
std::optional<RelationEdge> extract_pair_relation(const Utterance& source,
                                                  const Utterance& target, PairKind kind,
                                                  const RelationModelConfig& config,
                                                  ChatClient& client);

/// Fan-out over many pairs with at most config.concurrency outstanding requests;
/// results are merged by input index.
std::vector<std::optional<RelationEdge>> extract_relations(
    const std::vector<std::pair<Utterance, Utterance>>& pairs, PairKind kind,
    const RelationModelConfig& config, ChatClient& client);

}  // namespace factreason
