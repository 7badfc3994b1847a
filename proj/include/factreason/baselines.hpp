#pragma once

#include <string>
#include <vector>

#include "factreason/chat.hpp"
#include "factreason/metrics.hpp"
#include "factreason/model_builder.hpp"

namespace factreason {

struct BaselineVerdict {
    std::string atom_id;
    AtomLabel label = AtomLabel::kUndecided;
    std::string raw_reply;
};

struct BaselineConfig {
    std::string model;
    double temperature = 0.0;
};

/// FactScore: "True or False?" over numbered passages. True maps to supported,
/// False to contradicted; the grammar has no undecided verdict.
BaselineVerdict fs_assess(const AtomRecord& atom, const std::vector<ContextRecord>& contexts,
                          const BaselineConfig& config, ChatClient& client);

/// FactVerify: reasoning reply whose last bracketed token of
/// [Supported]/[Contradicted]/[Undecided] wins.
BaselineVerdict fv_assess(const AtomRecord& atom, const std::vector<ContextRecord>& contexts,
                          const BaselineConfig& config, ChatClient& client);

/// VeriScore: search-result styled evidence; the last ###-delimited decision wins.
BaselineVerdict vs_assess(const AtomRecord& atom, const std::vector<ContextRecord>& contexts,
                          const BaselineConfig& config, ChatClient& client);

/// DeepSeek-style reference prompt; same bracket grammar as FactVerify.
BaselineVerdict deepseek_assess(const AtomRecord& atom, const std::vector<ContextRecord>& contexts,
                                const BaselineConfig& config, ChatClient& client);

}  // namespace factreason
