#include "factreason/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "factreason/errors.hpp"

namespace factreason {

std::string to_string(AtomLabel label) {
    switch (label) {
        case AtomLabel::kSupported: return "supported";
        case AtomLabel::kContradicted: return "contradicted";
        case AtomLabel::kUndecided: return "undecided";
    }
    return "?";
}

AtomLabel classify_atom(double p_true, double tau) {
    if (p_true > 0.5 + tau) return AtomLabel::kSupported;
    if (p_true < 0.5 - tau) return AtomLabel::kContradicted;
    return AtomLabel::kUndecided;
}

namespace {

int supported_count(const std::vector<AtomVerdict>& verdicts) {
    return static_cast<int>(std::count_if(verdicts.begin(), verdicts.end(), [](const AtomVerdict& v) {
        return v.label == AtomLabel::kSupported;
    }));
}

void require_atoms(const std::vector<AtomVerdict>& verdicts) {
    if (verdicts.empty()) throw ConfigError("metrics require at least one atom");
}

void require_k(int k) {
    if (k < 1) throw ConfigError("K must be at least 1");
}

}  // namespace

double precision(const std::vector<AtomVerdict>& verdicts) {
    require_atoms(verdicts);
    return static_cast<double>(supported_count(verdicts)) / static_cast<double>(verdicts.size());
}

double recall_at_k(const std::vector<AtomVerdict>& verdicts, int k) {
    require_atoms(verdicts);
    require_k(k);
    return std::min(static_cast<double>(supported_count(verdicts)) / static_cast<double>(k), 1.0);
}

double f1_at_k(const std::vector<AtomVerdict>& verdicts, int k) {
    require_atoms(verdicts);
    require_k(k);
    const int s = supported_count(verdicts);
    if (s == 0) return 0.0;
    const double pr = precision(verdicts);
    const double rk = recall_at_k(verdicts, k);
    return 2.0 * pr * rk / (pr + rk);
}

double e_measure(const std::vector<double>& p_trues, double epsilon) {
    if (p_trues.empty()) throw ConfigError("e_measure requires at least one atom");
    double sum = 0.0;
    for (double p : p_trues) {
        const double clamped = std::min(std::max(p, epsilon), 1.0);
        sum += -clamped * std::log10(clamped);
    }
    return sum / static_cast<double>(p_trues.size());
}

double mae(const std::vector<double>& predicted, const std::vector<double>& truth) {
    if (predicted.empty() || predicted.size() != truth.size()) {
        throw ConfigError("mae requires equal-length, non-empty lists");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        sum += std::abs(predicted[i] - truth[i]);
    }
    return sum / static_cast<double>(predicted.size());
}

double brier(const std::vector<double>& p_trues, const std::vector<bool>& truth_labels) {
    if (p_trues.empty() || p_trues.size() != truth_labels.size()) {
        throw ConfigError("brier requires equal-length, non-empty lists");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p_trues.size(); ++i) {
        const double diff = p_trues[i] - (truth_labels[i] ? 1.0 : 0.0);
        sum += diff * diff;
    }
    return sum / static_cast<double>(p_trues.size());
}

FactualityReport make_report(std::vector<AtomVerdict> verdicts, int k, bool has_posteriors,
                             const std::optional<std::vector<bool>>& gold_labels) {
    require_atoms(verdicts);
    require_k(k);
    FactualityReport report;
    report.k = k;
    for (const AtomVerdict& v : verdicts) {
        switch (v.label) {
            case AtomLabel::kSupported: ++report.supported; break;
            case AtomLabel::kContradicted: ++report.contradicted; break;
            case AtomLabel::kUndecided: ++report.undecided; break;
        }
    }
    report.precision = precision(verdicts);
    report.recall_at_k = recall_at_k(verdicts, k);
    report.f1_at_k = f1_at_k(verdicts, k);
    if (has_posteriors) {
        std::vector<double> ps;
        ps.reserve(verdicts.size());
        for (const AtomVerdict& v : verdicts) ps.push_back(v.p_true);
        report.e_measure = e_measure(ps);
    }
    if (gold_labels) {
        if (gold_labels->size() != verdicts.size()) {
            throw ConfigError("gold labels must align with verdicts");
        }
        int gold_supported = 0;
        for (bool b : *gold_labels)
            if (b) ++gold_supported;
        report.truth_precision =
            static_cast<double>(gold_supported) / static_cast<double>(verdicts.size());
        if (has_posteriors) {
            std::vector<double> ps;
            ps.reserve(verdicts.size());
            for (const AtomVerdict& v : verdicts) ps.push_back(v.p_true);
            report.brier = brier(ps, *gold_labels);
        }
    }
    report.verdicts = std::move(verdicts);
    return report;
}

}  // namespace factreason
