#include "factreason/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "factreason/baselines.hpp"
#include "factreason/cache.hpp"
#include "factreason/concurrency.hpp"
#include "factreason/errors.hpp"
#include "factreason/pipeline.hpp"

namespace factreason {

using nlohmann::json;

std::string to_string(Assessor assessor) {
    switch (assessor) {
        case Assessor::kFr1: return "fr1";
        case Assessor::kFr2: return "fr2";
        case Assessor::kFr3: return "fr3";
        case Assessor::kFactScore: return "fs";
        case Assessor::kFactVerify: return "fv";
        case Assessor::kVeriScore: return "vs";
        case Assessor::kDeepseek: return "deepseek";
    }
    return "?";
}

std::optional<Assessor> assessor_from_string(const std::string& name) {
    if (name == "fr1") return Assessor::kFr1;
    if (name == "fr2") return Assessor::kFr2;
    if (name == "fr3") return Assessor::kFr3;
    if (name == "fs") return Assessor::kFactScore;
    if (name == "fv") return Assessor::kFactVerify;
    if (name == "vs") return Assessor::kVeriScore;
    if (name == "deepseek") return Assessor::kDeepseek;
    return std::nullopt;
}

namespace {

bool is_fr(Assessor a) {
    return a == Assessor::kFr1 || a == Assessor::kFr2 || a == Assessor::kFr3;
}

FrVariant variant_for(Assessor a, int k_per_atom) {
    FrVariant v;
    v.kind = a == Assessor::kFr1 ? FrKind::kFr1 : a == Assessor::kFr3 ? FrKind::kFr3
                                                                      : FrKind::kFr2;
    v.k_per_atom = k_per_atom;
    return v;
}

class BudgetedTransport : public HttpTransport {
public:
    BudgetedTransport(HttpTransport& inner, RequestBudget& budget)
        : inner_(inner), budget_(budget) {}
    HttpResponse get(const std::string& url, const HttpHeaders& headers) override {
        RequestBudget::Lease lease = budget_.acquire();
        return inner_.get(url, headers);
    }
    HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body,
                      const std::string& content_type) override {
        RequestBudget::Lease lease = budget_.acquire();
        return inner_.post(url, headers, body, content_type);
    }

private:
    HttpTransport& inner_;
    RequestBudget& budget_;
};

std::vector<AtomRecord> atoms_from_gold(const std::vector<GoldAtom>& gold) {
    std::vector<AtomRecord> atoms;
    atoms.reserve(gold.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
        AtomRecord atom;
        atom.atom_id = "a" + std::to_string(i + 1);
        atom.text = gold[i].text;
        atoms.push_back(std::move(atom));
    }
    return atoms;
}

std::vector<ContextRecord> contexts_from_inline(const std::vector<InlineContext>& inline_contexts,
                                                double prior, const std::string& claim_id) {
    std::vector<ContextRecord> contexts;
    for (std::size_t i = 0; i < inline_contexts.size(); ++i) {
        ContextRecord ctx;
        ctx.context_id = "c" + std::to_string(i + 1);
        ctx.content = inline_contexts[i].text;
        ctx.source = ContextSource::kInline;
        ctx.prior_true = prior;
        ctx.retrieved_for = {claim_id};
        contexts.push_back(std::move(ctx));
    }
    return contexts;
}

std::vector<bool> gold_bools(const std::vector<GoldAtom>& gold) {
    std::vector<bool> out;
    out.reserve(gold.size());
    for (const GoldAtom& g : gold) out.push_back(g.label == GoldLabel::kSupported);
    return out;
}

struct EntryWorker {
    const RunConfig& config;
    Pipeline& pipeline;
    Retriever& retriever;
    ChatClient& llm;

    BaselineVerdict run_baseline(const AtomRecord& atom,
                                 const std::vector<ContextRecord>& contexts) const {
        const BaselineConfig bc{config.llm_model, config.temperature};
        switch (config.assessor) {
            case Assessor::kFactScore: return fs_assess(atom, contexts, bc, llm);
            case Assessor::kFactVerify: return fv_assess(atom, contexts, bc, llm);
            case Assessor::kVeriScore: return vs_assess(atom, contexts, bc, llm);
            case Assessor::kDeepseek: return deepseek_assess(atom, contexts, bc, llm);
            default: throw ConfigError("not a prompt-based assessor");
        }
    }

    /// Prompt-based verdicts over fixed atoms; atoms with no retrievable context
    /// stay undecided without an LLM call.
    std::vector<AtomVerdict> baseline_verdicts(const std::vector<AtomRecord>& atoms) const {
        std::vector<AtomVerdict> verdicts(atoms.size());
        parallel_for_indexed(atoms.size(), config.concurrency, [&](std::size_t i) {
            const std::vector<ContextRecord> contexts = retriever.retrieve(atoms[i]);
            AtomVerdict v;
            v.atom_id = atoms[i].atom_id;
            v.p_true = 0.5;
            v.label = contexts.empty() ? AtomLabel::kUndecided
                                       : run_baseline(atoms[i], contexts).label;
            verdicts[i] = v;
        });
        return verdicts;
    }

    std::vector<AtomVerdict> fr_verdicts(const std::vector<AtomRecord>& atoms,
                                         const AssessmentResult& result) const {
        std::vector<AtomVerdict> verdicts;
        verdicts.reserve(atoms.size());
        for (const AtomRecord& atom : atoms) {
            AtomVerdict v;
            v.atom_id = atom.atom_id;
            v.p_true = result.marginals.at(atom.atom_id)[1];
            v.label = classify_atom(v.p_true);
            verdicts.push_back(std::move(v));
        }
        return verdicts;
    }

    EntryResult process(const DatasetEntry& entry) const {
        EntryResult out;
        out.id = entry.id;

        if (entry.inline_contexts) {  // conflicts entry: single claim, inline evidence
            AtomRecord claim;
            claim.atom_id = "a1";
            claim.text = entry.claim;
            const std::vector<ContextRecord> contexts = contexts_from_inline(
                *entry.inline_contexts, config.default_context_prior, claim.atom_id);
            if (is_fr(config.assessor)) {
                AssessmentResult result =
                    pipeline.assess_with_contexts({claim}, contexts);
                out.claim_p_true = result.marginals.at(claim.atom_id)[1];
                out.claim_supported = classify_atom(*out.claim_p_true) == AtomLabel::kSupported;
            } else {
                out.claim_supported =
                    run_baseline(claim, contexts).label == AtomLabel::kSupported;
            }
            return out;
        }

        if (entry.gold_atoms) {  // labeled entry: fixed atom set, gold labels
            const std::vector<AtomRecord> atoms = atoms_from_gold(*entry.gold_atoms);
            std::vector<AtomVerdict> verdicts;
            bool posteriors = false;
            if (is_fr(config.assessor)) {
                AssessmentResult result = pipeline.assess_atoms(atoms);
                verdicts = fr_verdicts(atoms, result);
                posteriors = true;
            } else {
                verdicts = baseline_verdicts(atoms);
            }
            out.report = make_report(std::move(verdicts), config.k_for_f1, posteriors,
                                     gold_bools(*entry.gold_atoms));
            return out;
        }

        // unlabeled entry: decompose, then assess
        if (is_fr(config.assessor)) {
            AssessmentResult result =
                pipeline.assess_response({entry.id, entry.prompt, entry.response});
            out.report =
                make_report(fr_verdicts(result.atoms, result), config.k_for_f1, true);
        } else {
            std::vector<AtomRecord> atoms = pipeline.atomize(entry.response);
            std::vector<AtomRecord> revised(atoms.size());
            parallel_for_indexed(atoms.size(), config.concurrency, [&](std::size_t i) {
                revised[i] = pipeline.revise(atoms[i], entry.response);
            });
            out.report =
                make_report(baseline_verdicts(revised), config.k_for_f1, false);
        }
        return out;
    }
};

Aggregates aggregate_results(const std::vector<EntryResult>& entries) {
    Aggregates agg;
    double s = 0, c = 0, u = 0, pr = 0, f1 = 0, e = 0, brier = 0;
    int with_e = 0, with_brier = 0, with_claim = 0, claims_right = 0;
    std::vector<double> pred_pr, true_pr;
    for (const EntryResult& entry : entries) {
        if (entry.failed) {
            ++agg.failed;
            continue;
        }
        if (entry.claim_supported) {
            ++with_claim;
            if (*entry.claim_supported) ++claims_right;
            ++agg.evaluated;
            continue;
        }
        if (!entry.report) continue;
        const FactualityReport& r = *entry.report;
        ++agg.evaluated;
        s += r.supported;
        c += r.contradicted;
        u += r.undecided;
        pr += r.precision;
        f1 += r.f1_at_k;
        if (r.e_measure) {
            e += *r.e_measure;
            ++with_e;
        }
        if (r.truth_precision) {
            pred_pr.push_back(r.precision);
            true_pr.push_back(*r.truth_precision);
        }
        if (r.brier) {
            brier += *r.brier;
            ++with_brier;
        }
    }
    const int n = agg.evaluated - with_claim;
    if (n > 0) {
        agg.mean_supported = s / n;
        agg.mean_contradicted = c / n;
        agg.mean_undecided = u / n;
        agg.mean_precision = pr / n;
        agg.mean_f1_at_k = f1 / n;
    }
    if (with_e > 0) agg.mean_e_measure = e / with_e;
    if (!pred_pr.empty()) agg.mae = mae(pred_pr, true_pr);
    if (with_brier > 0) agg.mean_brier = brier / with_brier;
    if (with_claim > 0) agg.accuracy = static_cast<double>(claims_right) / with_claim;
    return agg;
}

}  // namespace

ExperimentResult run_experiment(const std::vector<DatasetEntry>& entries, const RunConfig& config,
                                ChatClient& llm, HttpTransport& transport) {
    RequestBudget budget(config.concurrency);
    BudgetedChatClient budgeted_llm(llm, budget);
    BudgetedTransport budgeted_transport(transport, budget);

    std::unique_ptr<DiskCache> cache;
    std::unique_ptr<CachingChatClient> caching_llm;
    if (!config.cache_dir.empty()) {
        cache = std::make_unique<DiskCache>(config.cache_dir);
        caching_llm = std::make_unique<CachingChatClient>(budgeted_llm, *cache);
    }
    ChatClient& client = caching_llm ? static_cast<ChatClient&>(*caching_llm)
                                     : static_cast<ChatClient&>(budgeted_llm);

    Retriever retriever(config.retriever, budgeted_transport, cache.get());

    PipelineConfig pc;
    pc.variant = variant_for(config.assessor, config.retriever.k);
    pc.relations.model_name = config.llm_model;
    pc.relations.temperature = config.temperature;
    pc.relations.fallback_p_star = config.fallback_p_star;
    pc.relations.concurrency = config.concurrency;
    pc.temperature = config.temperature;
    pc.atom_prior = config.atom_prior;
    pc.exact_width_limit = config.exact_width_limit;
    pc.wmb = config.wmb;
    pc.wmb.seed = config.seed;
    pc.concurrency = config.concurrency;
    Pipeline pipeline(pc, client, retriever);

    const EntryWorker worker{config, pipeline, retriever, client};

    ExperimentResult result;
    result.assessor = to_string(config.assessor);
    result.dataset = config.dataset_name;
    result.k = config.k_for_f1;
    result.entries.resize(entries.size());
    parallel_for_indexed(entries.size(), config.concurrency, [&](std::size_t i) {
        try {
            result.entries[i] = worker.process(entries[i]);
        } catch (const std::exception& e) {
            result.entries[i].id = entries[i].id;
            result.entries[i].failed = true;
            result.entries[i].error = e.what();
        }
    });

    std::sort(result.entries.begin(), result.entries.end(),
              [](const EntryResult& a, const EntryResult& b) { return a.id < b.id; });
    result.aggregate = aggregate_results(result.entries);
    return result;
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fixed6_or_empty(const std::optional<double>& v) {
    return v ? fixed6(*v) : std::string();
}

/// Canonical JSON: keys sorted (nlohmann objects iterate sorted), floats fixed
/// to 6 decimals, no insignificant whitespace.
void dump_canonical(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out.push_back('{');
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out.push_back(',');
                first = false;
                out += json(key).dump();
                out.push_back(':');
                dump_canonical(value, out);
            }
            out.push_back('}');
            break;
        }
        case json::value_t::array: {
            out.push_back('[');
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out.push_back(',');
                dump_canonical(j[i], out);
            }
            out.push_back(']');
            break;
        }
        case json::value_t::number_float:
            out += fixed6(j.get<double>());
            break;
        default:
            out += j.dump();
            break;
    }
}

json entry_to_json(const EntryResult& entry) {
    json out;
    out["id"] = entry.id;
    if (entry.failed) {
        out["error"] = entry.error;
        return out;
    }
    if (entry.claim_supported) {
        out["claim_supported"] = *entry.claim_supported;
        if (entry.claim_p_true) out["p_claim"] = *entry.claim_p_true;
        return out;
    }
    if (entry.report) {
        const FactualityReport& r = *entry.report;
        out["s"] = r.supported;
        out["c"] = r.contradicted;
        out["u"] = r.undecided;
        out["precision"] = r.precision;
        out["recall_at_k"] = r.recall_at_k;
        out["f1_at_k"] = r.f1_at_k;
        if (r.e_measure) out["e_measure"] = *r.e_measure;
        if (r.truth_precision) out["truth_precision"] = *r.truth_precision;
        if (r.brier) out["brier"] = *r.brier;
        json verdicts = json::array();
        for (const AtomVerdict& v : r.verdicts) {
            verdicts.push_back(
                {{"atom_id", v.atom_id}, {"p_true", v.p_true}, {"label", to_string(v.label)}});
        }
        out["verdicts"] = std::move(verdicts);
    }
    return out;
}

json result_to_json(const ExperimentResult& result) {
    json agg;
    agg["s"] = result.aggregate.mean_supported;
    agg["c"] = result.aggregate.mean_contradicted;
    agg["u"] = result.aggregate.mean_undecided;
    agg["precision"] = result.aggregate.mean_precision;
    agg["f1_at_k"] = result.aggregate.mean_f1_at_k;
    if (result.aggregate.mean_e_measure) agg["e_measure"] = *result.aggregate.mean_e_measure;
    if (result.aggregate.mae) agg["mae"] = *result.aggregate.mae;
    if (result.aggregate.mean_brier) agg["brier"] = *result.aggregate.mean_brier;
    if (result.aggregate.accuracy) agg["accuracy"] = *result.aggregate.accuracy;
    agg["evaluated"] = result.aggregate.evaluated;
    agg["failed"] = result.aggregate.failed;

    json out;
    out["assessor"] = result.assessor;
    out["dataset"] = result.dataset;
    out["k"] = result.k;
    out["aggregate"] = std::move(agg);
    json entries = json::array();
    for (const EntryResult& entry : result.entries) entries.push_back(entry_to_json(entry));
    out["entries"] = std::move(entries);
    return out;
}

const char* kCsvHeader = "assessor,dataset,S,C,U,Pr,F1atK,E,MAE,Brier,accuracy";

std::string csv_row(const ExperimentResult& result) {
    const Aggregates& a = result.aggregate;
    std::ostringstream row;
    row << result.assessor << ',' << result.dataset << ',' << fixed6(a.mean_supported) << ','
        << fixed6(a.mean_contradicted) << ',' << fixed6(a.mean_undecided) << ','
        << fixed6(a.mean_precision) << ',' << fixed6(a.mean_f1_at_k) << ','
        << fixed6_or_empty(a.mean_e_measure) << ',' << fixed6_or_empty(a.mae) << ','
        << fixed6_or_empty(a.mean_brier) << ',' << fixed6_or_empty(a.accuracy);
    return row.str();
}

}  // namespace

std::string render_report(const ExperimentResult& result, ReportFormat format) {
    if (result.entries.empty()) {
        throw ConfigError("write_report requires a non-empty result set");
    }
    switch (format) {
        case ReportFormat::kJson: {
            std::string out;
            dump_canonical(result_to_json(result), out);
            out.push_back('\n');
            return out;
        }
        case ReportFormat::kCsv:
            return std::string(kCsvHeader) + "\n" + csv_row(result) + "\n";
        case ReportFormat::kMarkdown: {
            std::ostringstream out;
            out << "| assessor | dataset | S | C | U | Pr | F1atK | E | MAE | Brier | accuracy |\n";
            out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
            const Aggregates& a = result.aggregate;
            out << "| " << result.assessor << " | " << result.dataset << " | "
                << fixed6(a.mean_supported) << " | " << fixed6(a.mean_contradicted) << " | "
                << fixed6(a.mean_undecided) << " | " << fixed6(a.mean_precision) << " | "
                << fixed6(a.mean_f1_at_k) << " | " << fixed6_or_empty(a.mean_e_measure) << " | "
                << fixed6_or_empty(a.mae) << " | " << fixed6_or_empty(a.mean_brier) << " | "
                << fixed6_or_empty(a.accuracy) << " |\n";
            return out.str();
        }
    }
    throw ConfigError("unknown report format");
}

void write_report(const ExperimentResult& result, const std::filesystem::path& path,
                  ReportFormat format) {
    const std::string text = render_report(result, format);
    std::ofstream out(path);
    if (!out) throw Error("cannot open report file " + path.string());
    out << text;
    if (!out) throw Error("failed writing report file " + path.string());
}

}  // namespace factreason
