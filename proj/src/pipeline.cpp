#include "factreason/pipeline.hpp"

#include <algorithm>
#include <cctype>

#include "factreason/concurrency.hpp"
#include "factreason/errors.hpp"
#include "factreason/prompts.hpp"

namespace factreason {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

Pipeline::Pipeline(PipelineConfig config, ChatClient& llm, Retriever& retriever)
    : config_(std::move(config)), llm_(llm), retriever_(retriever) {
    if (config_.concurrency < 1) throw ConfigError("concurrency must be at least 1");
}

std::string Pipeline::decompose_model() const {
    return config_.decompose_model.empty() ? config_.relations.model_name
                                           : config_.decompose_model;
}

std::vector<AtomRecord> Pipeline::atomize(const std::string& response) {
    if (trim(response).empty()) {
        throw PipelineError("atomizer", "", "response must be non-empty");
    }
    ChatRequest request;
    request.model = decompose_model();
    request.messages = {{"user", prompts::atomizer(response)}};
    request.temperature = config_.temperature;
    request.logprobs = false;

    std::string reply;
    try {
        reply = llm_.complete(request).content;
    } catch (const Error& e) {
        throw PipelineError("atomizer", "", e.what());
    }

    std::vector<AtomRecord> atoms;
    std::size_t pos = 0;
    while (pos <= reply.size()) {
        const std::size_t eol = reply.find('\n', pos);
        std::string line = reply.substr(pos, eol == std::string::npos ? std::string::npos
                                                                      : eol - pos);
        pos = eol == std::string::npos ? reply.size() + 1 : eol + 1;
        line = trim(line);
        if (line.size() < 2 || line.compare(0, 2, "- ") != 0) continue;
        const std::string text = trim(line.substr(2));
        if (text.empty()) continue;
        AtomRecord atom;
        atom.atom_id = "a" + std::to_string(atoms.size() + 1);
        atom.text = text;
        const std::size_t span = response.find(text);
        if (span != std::string::npos) atom.source_span = {span, span + text.size()};
        atoms.push_back(std::move(atom));
    }
    if (atoms.empty()) {
        throw PipelineError("atomizer", "", "reply decomposed into zero atoms: '" + reply + "'");
    }
    return atoms;
}

AtomRecord Pipeline::revise(const AtomRecord& atom, const std::string& enclosing_context) {
    ChatRequest request;
    request.model = decompose_model();
    request.messages = {{"user", prompts::reviser(enclosing_context, atom.text)}};
    request.temperature = config_.temperature;
    request.logprobs = false;

    std::string reply;
    try {
        reply = llm_.complete(request).content;
    } catch (const Error& e) {
        throw PipelineError("reviser", atom.atom_id, e.what());
    }

    AtomRecord out = atom;
    const std::size_t open = reply.find("####");
    const std::size_t close = open == std::string::npos ? std::string::npos
                                                        : reply.find("####", open + 4);
    if (open == std::string::npos || close == std::string::npos) {
        out.revision_failed = true;
        return out;
    }
    const std::string inner = trim(reply.substr(open + 4, close - open - 4));
    if (inner.empty()) {
        out.revision_failed = true;
        return out;
    }
    out.text = inner;
    return out;
}

AssessmentResult Pipeline::assess_response(const ResponseRecord& record) {
    std::vector<AtomRecord> atoms = atomize(record.response);

    // Reviser sees the full original response as the enclosing context.
    std::vector<AtomRecord> revised(atoms.size());
    parallel_for_indexed(atoms.size(), config_.concurrency, [&](std::size_t i) {
        revised[i] = revise(atoms[i], record.response);
    });
    return assess_atoms(std::move(revised));
}

AssessmentResult Pipeline::assess_atoms(std::vector<AtomRecord> atoms) {
    std::vector<std::vector<ContextRecord>> per_atom(atoms.size());
    parallel_for_indexed(atoms.size(), config_.concurrency, [&](std::size_t i) {
        try {
            per_atom[i] = retriever_.retrieve(atoms[i]);
        } catch (const QuotaError&) {
            throw;
        } catch (const Error& e) {
            throw PipelineError("retriever", atoms[i].atom_id, e.what());
        }
    });

    std::vector<ContextRecord> contexts;
    for (std::vector<ContextRecord>& batch : per_atom) {
        for (ContextRecord& ctx : batch) {
            ctx.context_id = "c" + std::to_string(contexts.size() + 1);
            contexts.push_back(std::move(ctx));
        }
    }
    return assess_with_contexts(std::move(atoms), std::move(contexts));
}

AssessmentResult Pipeline::assess_with_contexts(std::vector<AtomRecord> atoms,
                                                std::vector<ContextRecord> contexts) {
    AssessmentResult result;
    result.variant = config_.variant;

    if (config_.variant.kind != FrKind::kFr1) {
        contexts = dedup_contexts(contexts);
    }

    // Pair list per variant. FR1 pairs an atom only with contexts retrieved for
    // it (within the per-atom budget); FR2/FR3 pair every atom with every context.
    std::vector<std::pair<Utterance, Utterance>> atom_pairs;
    if (config_.variant.kind == FrKind::kFr1) {
        std::map<std::string, int> taken;
        for (const ContextRecord& ctx : contexts) {
            for (const AtomRecord& atom : atoms) {
                if (ctx.retrieved_for.count(atom.atom_id) == 0) continue;
                int& count = taken[atom.atom_id];
                if (count >= config_.variant.k_per_atom) continue;
                ++count;
                atom_pairs.push_back({Utterance{ctx.context_id, ctx.utterance()},
                                      Utterance{atom.atom_id, atom.text}});
            }
        }
    } else {
        for (const AtomRecord& atom : atoms) {
            for (const ContextRecord& ctx : contexts) {
                atom_pairs.push_back({Utterance{ctx.context_id, ctx.utterance()},
                                      Utterance{atom.atom_id, atom.text}});
            }
        }
    }

    std::vector<std::pair<Utterance, Utterance>> context_pairs;
    if (config_.variant.kind == FrKind::kFr3) {
        for (std::size_t i = 0; i < contexts.size(); ++i) {
            for (std::size_t j = i + 1; j < contexts.size(); ++j) {
                context_pairs.push_back(
                    {Utterance{contexts[i].context_id, contexts[i].utterance()},
                     Utterance{contexts[j].context_id, contexts[j].utterance()}});
            }
        }
    }

    RelationModelConfig relation_config = config_.relations;
    relation_config.concurrency = config_.concurrency;

    std::vector<RelationEdge> edges;
    try {
        for (auto& maybe :
             extract_relations(atom_pairs, PairKind::kContextAtom, relation_config, llm_)) {
            if (maybe) edges.push_back(std::move(*maybe));
        }
        for (auto& maybe : extract_relations(context_pairs, PairKind::kContextContext,
                                             relation_config, llm_)) {
            if (maybe) edges.push_back(std::move(*maybe));
        }
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError("evaluator", "relation extraction", e.what());
    }

    FrModel fr = build_fr_model(atoms, contexts, edges, config_.variant, config_.atom_prior,
                                config_.context_prior_override);

    const EliminationOrder order = min_fill_order(fr.model);
    InferenceResult inference;
    if (order.induced_width <= config_.exact_width_limit) {
        inference = ve_marginals(fr.model, order);
        result.inference.engine = "ve";
    } else {
        inference = wmb_marginals(fr.model, order, config_.wmb);
        result.inference.engine = "wmb";
    }
    result.inference.induced_width = order.induced_width;
    result.inference.log_z = inference.log_z;
    result.inference.log_z_upper = inference.log_z_upper;
    result.inference.exact = inference.exact;

    for (const AtomRecord& atom : atoms) {
        const int var = fr.bindings.at(atom.atom_id);
        result.marginals[atom.atom_id] = {inference.marginals.p_false(var),
                                          inference.marginals.p_true(var)};
    }
    result.atoms = std::move(atoms);
    result.contexts = std::move(fr.contexts);
    result.edges = std::move(edges);
    return result;
}

}  // namespace factreason
