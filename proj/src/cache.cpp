#include "factreason/cache.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>

#include "factreason/errors.hpp"

namespace factreason {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, data.data(), data.size());
    EVP_DigestFinal_ex(ctx, digest, &length);
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

DiskCache::DiskCache(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
}

std::string DiskCache::key_for(const std::string& kind, const nlohmann::json& request) {
    return sha256_hex(kind + "\n" + request.dump());
}

std::filesystem::path DiskCache::entry_path(const std::string& kind, const std::string& key) const {
    return root_ / kind / key.substr(0, 2) / (key + ".json");
}

std::optional<nlohmann::json> DiskCache::get(const std::string& kind,
                                             const nlohmann::json& request) const {
    const std::filesystem::path path = entry_path(kind, key_for(kind, request));
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json entry = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (entry.is_discarded() || !entry.contains("response")) return std::nullopt;
    return entry["response"];
}

void DiskCache::put(const std::string& kind, const nlohmann::json& request,
                    const nlohmann::json& response) const {
    const std::string key = key_for(kind, request);
    const std::filesystem::path path = entry_path(kind, key);
    std::filesystem::create_directories(path.parent_path());
    if (std::filesystem::exists(path)) return;  // entries are immutable

    nlohmann::json entry;
    entry["request"] = request;
    entry["response"] = response;
    const auto now = std::chrono::system_clock::now();
    entry["created_at"] =
        static_cast<std::int64_t>(std::chrono::duration_cast<std::chrono::seconds>(
                                      now.time_since_epoch())
                                      .count());

    // Unique temp name per writer, then an atomic rename.
    static std::atomic<std::uint64_t> counter{0};
    const std::filesystem::path tmp =
        path.parent_path() / (key + ".tmp" + std::to_string(counter.fetch_add(1)) + "." +
                              std::to_string(::getpid()));
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write cache entry " + tmp.string());
        out << entry.dump(2) << "\n";
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        if (!std::filesystem::exists(path)) {
            throw Error("cannot finalize cache entry " + path.string() + ": " + ec.message());
        }
    }
}

}  // namespace factreason
