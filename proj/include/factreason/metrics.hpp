#pragma once

#include <optional>
#include <string>
#include <vector>

namespace factreason {

enum class AtomLabel { kSupported, kContradicted, kUndecided };

std::string to_string(AtomLabel label);

struct AtomVerdict {
    std::string atom_id;
    double p_true = 0.5;
    AtomLabel label = AtomLabel::kUndecided;
};

/// Labels an atom from its posterior: supported above 0.5 + tau, contradicted
/// below 0.5 - tau, undecided inside the band. Atoms with no incident evidence
/// sit at exactly 0.5 and land undecided.
AtomLabel classify_atom(double p_true, double tau = 1e-6);

/// Factual precision: supported count over total atoms.
double precision(const std::vector<AtomVerdict>& verdicts);

/// Recall up to the K-th supported atom: min(S/K, 1).
double recall_at_k(const std::vector<AtomVerdict>& verdicts, int k);

/// Harmonic mean of precision and recall@K; 0 when no atom is supported.
double f1_at_k(const std::vector<AtomVerdict>& verdicts, int k);

/// Mean of -p * log10(p) over atom posteriors, p clamped to [epsilon, 1].
/// 0.150515 when every posterior is 0.5; 0 when every posterior is 1.
double e_measure(const std::vector<double>& p_trues, double epsilon = 1e-12);

/// Mean absolute error between predicted and ground-truth precisions.
double mae(const std::vector<double>& predicted, const std::vector<double>& truth);

/// Mean squared difference between posteriors and binary ground-truth labels.
double brier(const std::vector<double>& p_trues, const std::vector<bool>& truth_labels);

struct FactualityReport {
    std::vector<AtomVerdict> verdicts;
    int supported = 0;
    int contradicted = 0;
    int undecided = 0;
    double precision = 0.0;
    double recall_at_k = 0.0;
    double f1_at_k = 0.0;
    /// Absent for assessors that do not produce posteriors.
    std::optional<double> e_measure;
    int k = 1;
    /// Ground-truth precision, when gold labels exist (MAE input).
    std::optional<double> truth_precision;
    std::optional<double> brier;
};

/// Assembles the per-response report from verdicts. `p_trues_for_e` should be the
/// posteriors when the assessor has them; pass std::nullopt for prompt-based
/// assessors. Gold labels (aligned with verdicts) enable truth_precision and Brier.
FactualityReport make_report(std::vector<AtomVerdict> verdicts, int k,
                             bool has_posteriors = true,
                             const std::optional<std::vector<bool>>& gold_labels = std::nullopt);

}  // namespace factreason
