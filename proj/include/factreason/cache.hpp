#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace factreason {

/// Content-addressed request/response cache.
///
/// Layout: <root>/<kind>/<first-2-hex>/<sha256>.json with value
/// {request, response, created_at}. Entries are immutable; writers go through an
/// atomic temp-file rename, so concurrent readers never observe partial entries.
class DiskCache {
public:
    explicit DiskCache(std::filesystem::path root);

    /// SHA-256 over (kind, canonicalized request payload).
    static std::string key_for(const std::string& kind, const nlohmann::json& request);

    std::optional<nlohmann::json> get(const std::string& kind, const nlohmann::json& request) const;
    void put(const std::string& kind, const nlohmann::json& request,
             const nlohmann::json& response) const;

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path entry_path(const std::string& kind, const std::string& key) const;

    std::filesystem::path root_;
};

std::string sha256_hex(const std::string& data);

}  // namespace factreason
