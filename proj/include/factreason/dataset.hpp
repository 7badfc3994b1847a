#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace factreason {

enum class DatasetFormat { kLabeled, kUnlabeled, kConflicts };

enum class GoldLabel { kSupported, kNotSupported };

struct GoldAtom {
    std::string text;
    GoldLabel label = GoldLabel::kSupported;
};

enum class Stance { kSupport, kConflict };

struct InlineContext {
    std::string text;
    Stance stance = Stance::kSupport;
};

struct DatasetEntry {
    std::string id;
    std::string prompt;
    std::string response;  // populated for labeled/unlabeled entries
    std::string claim;     // populated for conflicts entries
    std::optional<std::vector<GoldAtom>> gold_atoms;
    std::optional<std::vector<InlineContext>> inline_contexts;
};

/// Loads a JSON-Lines dataset. Schemas by format:
///   labeled    {"id","prompt","response","atoms":[{"text","label":"S"|"NS"}]}
///   unlabeled  {"id","prompt","response"}
///   conflicts  {"id","claim","contexts":[{"text","stance":"support"|"conflict"}]}
/// Every parse or schema violation names the offending line.
std::vector<DatasetEntry> load_dataset(const std::filesystem::path& path, DatasetFormat format);

/// Same, over in-memory text (used by tests).
std::vector<DatasetEntry> parse_dataset(const std::string& text, DatasetFormat format);

}  // namespace factreason
