#pragma once

#include <map>
#include <string>
#include <vector>

#include "factreason/http.hpp"
#include "factreason/model_builder.hpp"

namespace factreason {

class DiskCache;

enum class RetrieverSource { kWikipedia, kWebSearch, kCachedFixture };

struct RetrieverConfig {
    RetrieverSource source = RetrieverSource::kWikipedia;
    /// Top-k contexts per query: 3 for Wikipedia, 5 for web search by default.
    int k = 3;
    int content_cap = 4000;
    /// Serper key; when empty the FACTREASON_SERPER_KEY environment variable is used.
    std::string api_key;
    std::string wikipedia_base = "https://en.wikipedia.org";
    std::string serper_url = "https://google.serper.dev/search";
    /// JSON file mapping query text to result lists, for the cached_fixture source.
    std::string fixture_path;
    int max_retries = 3;

    static RetrieverConfig for_source(RetrieverSource source);
    void validate() const;
};

/// Retrieves up to k evidence contexts for an atom, capped at content_cap
/// characters, in provider rank order. Each returned record carries
/// retrieved_for = {atom_id}; context ids are assigned by the caller.
class Retriever {
public:
    Retriever(RetrieverConfig config, HttpTransport& transport, DiskCache* cache = nullptr);

    std::vector<ContextRecord> retrieve(const AtomRecord& atom);

    const RetrieverConfig& config() const { return config_; }

private:
    std::vector<ContextRecord> search_wikipedia(const std::string& query);
    std::vector<ContextRecord> search_web(const std::string& query);
    std::vector<ContextRecord> lookup_fixture(const std::string& query) const;

    RetrieverConfig config_;
    HttpTransport& transport_;
    DiskCache* cache_;
    std::map<std::string, std::vector<ContextRecord>> fixture_;
};

/// Hard cut at `cap` bytes, backing off so a UTF-8 sequence is never split.
std::string cap_content(const std::string& content, int cap);

/// Drops HTML tags and collapses entities commonly present in search snippets.
std::string strip_html(const std::string& html);

}  // namespace factreason
