#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "factreason/errors.hpp"
#include "factreason/harness.hpp"
#include "factreason/inference.hpp"
#include "factreason/pgm.hpp"

namespace fr = factreason;

namespace {

constexpr const char* kVersion = "0.1.0";

int run_assess(const std::string& input, const std::string& format_name,
               const std::string& assessor_name, int k_for_f1, const std::string& retriever_name,
               int k, double atom_prior, double context_prior, int i_bound,
               const std::string& llm_endpoint, const std::string& llm_model,
               const std::string& cache_dir, std::uint64_t seed, const std::string& output,
               const std::string& report_format_name, const std::string& fixture,
               int concurrency) {
    fr::DatasetFormat format;
    if (format_name == "labeled") {
        format = fr::DatasetFormat::kLabeled;
    } else if (format_name == "unlabeled") {
        format = fr::DatasetFormat::kUnlabeled;
    } else if (format_name == "conflicts") {
        format = fr::DatasetFormat::kConflicts;
    } else {
        std::cerr << "unknown dataset format: " << format_name << "\n";
        return 2;
    }

    const auto assessor = fr::assessor_from_string(assessor_name);
    if (!assessor) {
        std::cerr << "unknown assessor: " << assessor_name << "\n";
        return 2;
    }

    fr::RunConfig config;
    config.assessor = *assessor;
    config.k_for_f1 = k_for_f1;
    config.atom_prior = atom_prior;
    config.default_context_prior = context_prior;
    config.wmb.i_bound = i_bound;
    config.llm_model = llm_model;
    config.cache_dir = cache_dir;
    config.seed = seed;
    config.concurrency = concurrency;
    config.dataset_name = std::filesystem::path(input).stem().string();

    if (retriever_name == "wikipedia") {
        config.retriever = fr::RetrieverConfig::for_source(fr::RetrieverSource::kWikipedia);
    } else if (retriever_name == "web") {
        config.retriever = fr::RetrieverConfig::for_source(fr::RetrieverSource::kWebSearch);
    } else if (retriever_name == "fixture") {
        config.retriever = fr::RetrieverConfig::for_source(fr::RetrieverSource::kCachedFixture);
        config.retriever.fixture_path = fixture;
    } else {
        std::cerr << "unknown retriever: " << retriever_name << "\n";
        return 2;
    }
    if (k > 0) config.retriever.k = k;

    fr::ReportFormat report_format;
    if (report_format_name == "json") {
        report_format = fr::ReportFormat::kJson;
    } else if (report_format_name == "csv") {
        report_format = fr::ReportFormat::kCsv;
    } else if (report_format_name == "markdown") {
        report_format = fr::ReportFormat::kMarkdown;
    } else {
        std::cerr << "unknown report format: " << report_format_name << "\n";
        return 2;
    }

    const std::vector<fr::DatasetEntry> entries = fr::load_dataset(input, format);

    fr::HttplibTransport transport;
    fr::ChatEndpointConfig endpoint;
    endpoint.endpoint = llm_endpoint;
    fr::HttpChatClient llm(transport, endpoint);

    const fr::ExperimentResult result = fr::run_experiment(entries, config, llm, transport);
    if (output.empty()) {
        std::cout << fr::render_report(result, report_format);
    } else {
        fr::write_report(result, output, report_format);
    }
    if (result.aggregate.failed > 0) {
        std::cerr << result.aggregate.failed << " of " << result.entries.size()
                  << " entries failed\n";
        return 1;
    }
    return 0;
}

int run_infer(const std::string& model_path, const std::string& query, int i_bound) {
    std::ifstream in(model_path);
    if (!in) {
        std::cerr << "cannot open " << model_path << "\n";
        return 2;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const fr::GraphicalModel model = fr::read_uai(buffer.str());

    const fr::ValidationResult validation = fr::validate_model(model);
    if (!validation.ok) {
        for (const std::string& v : validation.violations) std::cerr << v << "\n";
        return 1;
    }

    const fr::EliminationOrder order = fr::min_fill_order(model);
    fr::InferenceResult result;
    std::string engine;
    if (i_bound > 0) {
        fr::WmbConfig wmb;
        wmb.i_bound = i_bound;
        result = fr::wmb_marginals(model, order, wmb);
        engine = "wmb";
    } else if (order.induced_width <= 12) {
        result = fr::ve_marginals(model, order);
        engine = "ve";
    } else {
        result = fr::wmb_marginals(model, order, fr::WmbConfig{});
        engine = "wmb";
    }

    if (query == "marginals") {
        for (const fr::Variable& v : model.variables) {
            std::printf("%s P(false)=%.9f P(true)=%.9f\n", v.name.c_str(),
                        result.marginals.p_false(v.id), result.marginals.p_true(v.id));
        }
    }
    std::printf("log_z %.9f%s (engine=%s width=%d%s)\n", result.log_z,
                result.exact ? "" : " [upper bound]", engine.c_str(), order.induced_width,
                result.exact ? " exact" : "");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Long-form factuality assessment over probabilistic evidence models"};
    app.require_subcommand(1);

    // assess
    auto* assess = app.add_subcommand("assess", "Assess a dataset of responses or claims");
    std::string input, format_name = "unlabeled", assessor_name = "fr2";
    std::string retriever_name = "wikipedia", llm_endpoint, llm_model;
    std::string cache_dir, output, report_format_name = "json", fixture;
    int k_for_f1 = 22, k = 0, i_bound = 6, concurrency = 8;
    double atom_prior = 0.5, context_prior = 0.99;
    std::uint64_t seed = 0;
    assess->add_option("--input", input, "JSONL dataset file")->required();
    assess->add_option("--format", format_name, "labeled|unlabeled|conflicts");
    assess->add_option("--assessor", assessor_name, "fr1|fr2|fr3|fs|fv|vs|deepseek");
    assess->add_option("--K", k_for_f1, "K for F1@K (default 22)");
    assess->add_option("--retriever", retriever_name, "wikipedia|web|fixture");
    assess->add_option("--k", k, "contexts per atom (default 3 wikipedia / 5 web)");
    assess->add_option("--atom-prior", atom_prior, "atom prior probability (default 0.5)");
    assess->add_option("--context-prior", context_prior, "context prior probability (default 0.99)");
    assess->add_option("--ibound", i_bound, "i-bound for approximate inference (default 6)");
    assess->add_option("--llm-endpoint", llm_endpoint, "chat-completions URL")->required();
    assess->add_option("--llm-model", llm_model, "model name")->required();
    assess->add_option("--cache", cache_dir, "request/response cache directory");
    assess->add_option("--seed", seed, "random seed");
    assess->add_option("--output", output, "report file (default: stdout)");
    assess->add_option("--report-format", report_format_name, "json|csv|markdown");
    assess->add_option("--fixture", fixture, "retrieval fixture file (fixture retriever)");
    assess->add_option("--concurrency", concurrency, "max outstanding requests (default 8)");

    // infer
    auto* infer = app.add_subcommand("infer", "Run marginal inference on a UAI model");
    std::string model_path, query = "marginals";
    int infer_ibound = 0;
    infer->add_option("--model", model_path, "UAI MARKOV file")->required();
    infer->add_option("--query", query, "marginals");
    infer->add_option("--ibound", infer_ibound, "force weighted mini-buckets at this i-bound");

    auto* version = app.add_subcommand("version", "Print version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (assess->parsed()) {
            return run_assess(input, format_name, assessor_name, k_for_f1, retriever_name, k,
                              atom_prior, context_prior, i_bound, llm_endpoint, llm_model,
                              cache_dir, seed, output, report_format_name, fixture, concurrency);
        }
        if (infer->parsed()) {
            return run_infer(model_path, query, infer_ibound);
        }
        if (version->parsed()) {
            std::cout << "factreason " << kVersion << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
