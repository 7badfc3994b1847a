#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factreason/chat.hpp"
#include "factreason/inference.hpp"
#include "factreason/model_builder.hpp"
#include "factreason/relations.hpp"
#include "factreason/retriever.hpp"

namespace factreason {

struct ResponseRecord {
    std::string id;
    std::string prompt;    // the query x
    std::string response;  // the long-form response y
};

struct PipelineConfig {
    FrVariant variant;
    RelationModelConfig relations;
    /// Atomizer/Reviser model; empty means the relation model's name.
    std::string decompose_model;
    double temperature = 0.0;
    double atom_prior = 0.5;
    /// Forces every context prior; absent keeps the per-record value (default 0.99).
    std::optional<double> context_prior_override;
    /// Exact variable elimination is used up to this induced width, weighted
    /// mini-buckets beyond it.
    int exact_width_limit = 12;
    WmbConfig wmb;
    int concurrency = 8;
};

struct InferenceMeta {
    std::string engine;  // "ve" or "wmb"
    int induced_width = 0;
    double log_z = 0.0;
    std::optional<double> log_z_upper;
    bool exact = true;
};

struct AssessmentResult {
    std::vector<AtomRecord> atoms;
    std::vector<ContextRecord> contexts;  // deduped for FR2/FR3
    std::vector<RelationEdge> edges;
    /// atom_id -> (P_false, P_true)
    std::map<std::string, std::array<double, 2>> marginals;
    FrVariant variant;
    InferenceMeta inference;
};

/// The four-stage assessment pipeline: decompose the response into atoms, revise
/// them to be standalone, retrieve evidence contexts, and evaluate the atoms'
/// posteriors on the assembled graphical model.
class Pipeline {
public:
    Pipeline(PipelineConfig config, ChatClient& llm, Retriever& retriever);

    /// Decomposes a response into atoms: one per "- " reply line, order preserved.
    /// Throws on an empty decomposition.
    std::vector<AtomRecord> atomize(const std::string& response);

    /// Rewrites an atom to stand alone. When the reply carries no ####-delimited
    /// statement the original text is kept and revision_failed is set.
    AtomRecord revise(const AtomRecord& atom, const std::string& enclosing_context);

    /// Full pipeline over a response record.
    AssessmentResult assess_response(const ResponseRecord& record);

    /// Skips decomposition: retrieves for the given atoms, then evaluates.
    AssessmentResult assess_atoms(std::vector<AtomRecord> atoms);

    /// Skips decomposition and retrieval: evaluates the given atoms against the
    /// given contexts (inline evidence).
    AssessmentResult assess_with_contexts(std::vector<AtomRecord> atoms,
                                          std::vector<ContextRecord> contexts);

    const PipelineConfig& config() const { return config_; }

private:
    std::string decompose_model() const;

    PipelineConfig config_;
    ChatClient& llm_;
    Retriever& retriever_;
};

}  // namespace factreason
