#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "factreason/chat.hpp"
#include "factreason/dataset.hpp"
#include "factreason/inference.hpp"
#include "factreason/metrics.hpp"
#include "factreason/retriever.hpp"

namespace factreason {

enum class Assessor { kFr1, kFr2, kFr3, kFactScore, kFactVerify, kVeriScore, kDeepseek };

std::string to_string(Assessor assessor);
std::optional<Assessor> assessor_from_string(const std::string& name);

struct RunConfig {
    Assessor assessor = Assessor::kFr2;
    /// K for F1@K; the unlabeled runs in the evaluation protocol use 22.
    int k_for_f1 = 22;
    RetrieverConfig retriever;
    double atom_prior = 0.5;
    double default_context_prior = 0.99;
    int exact_width_limit = 12;
    WmbConfig wmb;
    std::string llm_model;
    double temperature = 0.0;
    double fallback_p_star = 0.95;
    /// Empty disables the request/response cache.
    std::string cache_dir;
    std::uint64_t seed = 0;
    int concurrency = 8;
    std::string dataset_name;
};

struct EntryResult {
    std::string id;
    bool failed = false;
    std::string error;
    /// Per-response factuality report (labeled/unlabeled entries).
    std::optional<FactualityReport> report;
    /// Conflicts entries: whether the claim was judged supported, and its
    /// posterior when the assessor computes one.
    std::optional<bool> claim_supported;
    std::optional<double> claim_p_true;
};

struct Aggregates {
    double mean_supported = 0.0;
    double mean_contradicted = 0.0;
    double mean_undecided = 0.0;
    double mean_precision = 0.0;
    double mean_f1_at_k = 0.0;
    std::optional<double> mean_e_measure;
    std::optional<double> mae;
    std::optional<double> mean_brier;
    /// Conflicts: fraction of claims judged supported (gold is always true).
    std::optional<double> accuracy;
    int evaluated = 0;
    int failed = 0;
};

struct ExperimentResult {
    std::string assessor;
    std::string dataset;
    int k = 1;
    std::vector<EntryResult> entries;  // sorted by entry id
    Aggregates aggregate;
};

/// Runs one assessor over the dataset entries. Per-entry failures are collected
/// and the run continues; aggregates are arithmetic means over evaluated entries.
/// Outbound requests are capped at config.concurrency outstanding and served
/// through the cache when cache_dir is set, which also makes runs resumable.
ExperimentResult run_experiment(const std::vector<DatasetEntry>& entries, const RunConfig& config,
                                ChatClient& llm, HttpTransport& transport);

enum class ReportFormat { kJson, kCsv, kMarkdown };

/// Canonical rendering: JSON has sorted keys and fixed 6-decimal floats so equal
/// results serialize byte-identically; CSV/Markdown render the aggregate row.
std::string render_report(const ExperimentResult& result, ReportFormat format);

void write_report(const ExperimentResult& result, const std::filesystem::path& path,
                  ReportFormat format);

}  // namespace factreason
