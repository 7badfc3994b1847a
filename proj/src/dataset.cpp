#include "factreason/dataset.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "factreason/errors.hpp"

namespace factreason {

using nlohmann::json;

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw DatasetError("line " + std::to_string(line) + ": " + what);
}

std::string require_string(const json& obj, const char* field, int line) {
    if (!obj.contains(field) || !obj[field].is_string()) {
        fail(line, std::string("missing or non-string field \"") + field + "\"");
    }
    return obj[field].get<std::string>();
}

DatasetEntry parse_entry(const json& obj, DatasetFormat format, int line) {
    DatasetEntry entry;
    entry.id = require_string(obj, "id", line);

    switch (format) {
        case DatasetFormat::kLabeled: {
            entry.prompt = require_string(obj, "prompt", line);
            entry.response = require_string(obj, "response", line);
            if (entry.response.empty()) fail(line, "response must be non-empty");
            if (!obj.contains("atoms") || !obj["atoms"].is_array() || obj["atoms"].empty()) {
                fail(line, "labeled entry requires a non-empty \"atoms\" array");
            }
            std::vector<GoldAtom> atoms;
            for (const json& a : obj["atoms"]) {
                GoldAtom atom;
                atom.text = require_string(a, "text", line);
                const std::string label = require_string(a, "label", line);
                if (label == "S") {
                    atom.label = GoldLabel::kSupported;
                } else if (label == "NS") {
                    atom.label = GoldLabel::kNotSupported;
                } else {
                    fail(line, "atom label must be \"S\" or \"NS\", got \"" + label + "\"");
                }
                atoms.push_back(std::move(atom));
            }
            entry.gold_atoms = std::move(atoms);
            break;
        }
        case DatasetFormat::kUnlabeled: {
            entry.prompt = require_string(obj, "prompt", line);
            entry.response = require_string(obj, "response", line);
            if (entry.response.empty()) fail(line, "response must be non-empty");
            break;
        }
        case DatasetFormat::kConflicts: {
            entry.claim = require_string(obj, "claim", line);
            if (entry.claim.empty()) fail(line, "claim must be non-empty");
            if (!obj.contains("contexts") || !obj["contexts"].is_array() ||
                obj["contexts"].empty()) {
                fail(line, "conflicts entry requires a non-empty \"contexts\" array");
            }
            std::vector<InlineContext> contexts;
            for (const json& c : obj["contexts"]) {
                InlineContext ctx;
                ctx.text = require_string(c, "text", line);
                const std::string stance = require_string(c, "stance", line);
                if (stance == "support") {
                    ctx.stance = Stance::kSupport;
                } else if (stance == "conflict") {
                    ctx.stance = Stance::kConflict;
                } else {
                    fail(line, "stance must be \"support\" or \"conflict\", got \"" + stance +
                                   "\"");
                }
                contexts.push_back(std::move(ctx));
            }
            entry.inline_contexts = std::move(contexts);
            break;
        }
    }
    return entry;
}

}  // namespace

std::vector<DatasetEntry> parse_dataset(const std::string& text, DatasetFormat format) {
    std::vector<DatasetEntry> entries;
    std::istringstream in(text);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        bool blank = true;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                blank = false;
                break;
            }
        }
        if (blank) continue;
        json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (obj.is_discarded() || !obj.is_object()) {
            fail(line_number, "invalid JSON object");
        }
        entries.push_back(parse_entry(obj, format, line_number));
    }
    return entries;
}

std::vector<DatasetEntry> load_dataset(const std::filesystem::path& path, DatasetFormat format) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open dataset file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dataset(buffer.str(), format);
}

}  // namespace factreason
