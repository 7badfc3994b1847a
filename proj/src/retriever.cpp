#include "factreason/retriever.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "factreason/cache.hpp"
#include "factreason/errors.hpp"

namespace factreason {

using nlohmann::json;

RetrieverConfig RetrieverConfig::for_source(RetrieverSource source) {
    RetrieverConfig config;
    config.source = source;
    config.k = source == RetrieverSource::kWebSearch ? 5 : 3;
    return config;
}

void RetrieverConfig::validate() const {
    if (k < 1) throw ConfigError("retriever k must be at least 1");
    if (content_cap <= 0) throw ConfigError("content_cap must be positive");
    if (source == RetrieverSource::kCachedFixture && fixture_path.empty()) {
        throw ConfigError("cached_fixture retriever requires a fixture path");
    }
}

std::string cap_content(const std::string& content, int cap) {
    if (static_cast<int>(content.size()) <= cap) return content;
    std::size_t cut = static_cast<std::size_t>(cap);
    // back off over UTF-8 continuation bytes so the cut lands on a boundary
    while (cut > 0 && (static_cast<unsigned char>(content[cut]) & 0xC0) == 0x80) --cut;
    return content.substr(0, cut);
}

std::string strip_html(const std::string& html) {
    std::string out;
    out.reserve(html.size());
    bool in_tag = false;
    for (char c : html) {
        if (c == '<') {
            in_tag = true;
        } else if (c == '>') {
            in_tag = false;
        } else if (!in_tag) {
            out.push_back(c);
        }
    }
    // frequent entities in MediaWiki snippets
    const std::pair<const char*, const char*> entities[] = {
        {"&quot;", "\""}, {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&#39;", "'"}};
    for (const auto& [from, to] : entities) {
        std::size_t pos = 0;
        while ((pos = out.find(from, pos)) != std::string::npos) {
            out.replace(pos, std::string(from).size(), to);
            pos += std::string(to).size();
        }
    }
    return out;
}

Retriever::Retriever(RetrieverConfig config, HttpTransport& transport, DiskCache* cache)
    : config_(std::move(config)), transport_(transport), cache_(cache) {
    config_.validate();
    if (config_.api_key.empty()) {
        if (const char* key = std::getenv("FACTREASON_SERPER_KEY")) config_.api_key = key;
    }
    if (config_.source == RetrieverSource::kCachedFixture) {
        std::ifstream in(config_.fixture_path);
        if (!in) throw ConfigError("cannot open retrieval fixture " + config_.fixture_path);
        json data = json::parse(in, nullptr, /*allow_exceptions=*/false);
        if (data.is_discarded() || !data.is_object()) {
            throw ConfigError("retrieval fixture must be a JSON object mapping query to results");
        }
        for (const auto& [query, results] : data.items()) {
            std::vector<ContextRecord> records;
            for (const json& r : results) {
                ContextRecord ctx;
                ctx.title = r.value("title", "");
                ctx.link = r.value("link", "");
                ctx.snippet = r.value("snippet", "");
                ctx.content = cap_content(r.value("content", ""), config_.content_cap);
                ctx.source = ContextSource::kInline;
                records.push_back(std::move(ctx));
            }
            fixture_.emplace(query, std::move(records));
        }
    }
}

namespace {

json contexts_to_json(const std::vector<ContextRecord>& contexts) {
    json out = json::array();
    for (const ContextRecord& c : contexts) {
        out.push_back({{"title", c.title},
                       {"link", c.link},
                       {"snippet", c.snippet},
                       {"content", c.content}});
    }
    return out;
}

std::vector<ContextRecord> contexts_from_json(const json& data, ContextSource source) {
    std::vector<ContextRecord> out;
    for (const json& r : data) {
        ContextRecord c;
        c.title = r.value("title", "");
        c.link = r.value("link", "");
        c.snippet = r.value("snippet", "");
        c.content = r.value("content", "");
        c.source = source;
        out.push_back(std::move(c));
    }
    return out;
}

const char* source_name(RetrieverSource source) {
    switch (source) {
        case RetrieverSource::kWikipedia: return "wikipedia";
        case RetrieverSource::kWebSearch: return "web_search";
        case RetrieverSource::kCachedFixture: return "cached_fixture";
    }
    return "?";
}

}  // namespace

std::vector<ContextRecord> Retriever::retrieve(const AtomRecord& atom) {
    const std::string& query = atom.text;
    const ContextSource record_source = config_.source == RetrieverSource::kWikipedia
                                            ? ContextSource::kWikipedia
                                            : config_.source == RetrieverSource::kWebSearch
                                                  ? ContextSource::kWebSearch
                                                  : ContextSource::kInline;

    json cache_request;
    if (cache_ != nullptr) {
        cache_request = {{"source", source_name(config_.source)},
                         {"query", query},
                         {"k", config_.k},
                         {"content_cap", config_.content_cap}};
        if (auto hit = cache_->get("retrieval", cache_request)) {
            std::vector<ContextRecord> cached = contexts_from_json(*hit, record_source);
            for (ContextRecord& c : cached) c.retrieved_for = {atom.atom_id};
            return cached;
        }
    }

    std::vector<ContextRecord> results;
    switch (config_.source) {
        case RetrieverSource::kWikipedia:
            results = search_wikipedia(query);
            break;
        case RetrieverSource::kWebSearch:
            results = search_web(query);
            break;
        case RetrieverSource::kCachedFixture:
            results = lookup_fixture(query);
            break;
    }
    if (static_cast<int>(results.size()) > config_.k) {
        results.resize(static_cast<std::size_t>(config_.k));
    }
    for (ContextRecord& c : results) {
        c.content = cap_content(c.content, config_.content_cap);
        c.retrieved_for = {atom.atom_id};
    }
    if (cache_ != nullptr) {
        cache_->put("retrieval", cache_request, contexts_to_json(results));
    }
    return results;
}

namespace {

/// Retries connection failures and 5xx responses; 429 is a quota signal and is
/// not retried.
HttpResponse fetch_with_retries(HttpTransport& transport, const std::string& url,
                                const HttpHeaders& headers, int max_retries,
                                const std::string* post_body = nullptr) {
    std::string last_error;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        try {
            HttpResponse response = post_body == nullptr
                                        ? transport.get(url, headers)
                                        : transport.post(url, headers, *post_body,
                                                         "application/json");
            if (response.status == 429) {
                throw QuotaError("provider returned status 429 for " + url);
            }
            if (response.status >= 500) {
                last_error = "status " + std::to_string(response.status);
                continue;
            }
            return response;
        } catch (const QuotaError&) {
            throw;
        } catch (const TransportError& e) {
            last_error = e.what();
        }
    }
    throw TransportError("request to " + url + " failed after " +
                         std::to_string(max_retries + 1) + " attempts: " + last_error);
}

}  // namespace

std::vector<ContextRecord> Retriever::search_wikipedia(const std::string& query) {
    const std::string search_url = config_.wikipedia_base +
                                   "/w/api.php?action=query&list=search&format=json&srsearch=" +
                                   url_encode(query) + "&srlimit=" + std::to_string(config_.k);
    const HttpResponse search = fetch_with_retries(transport_, search_url, {}, config_.max_retries);
    if (search.status != 200) {
        throw TransportError("wikipedia search returned status " + std::to_string(search.status));
    }
    json parsed = json::parse(search.body, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) throw TransportError("wikipedia search returned malformed JSON");

    std::vector<ContextRecord> out;
    for (const json& item : parsed.value("query", json::object()).value("search", json::array())) {
        if (static_cast<int>(out.size()) >= config_.k) break;
        ContextRecord ctx;
        ctx.title = item.value("title", "");
        ctx.snippet = strip_html(item.value("snippet", ""));
        std::string link_title = ctx.title;
        std::replace(link_title.begin(), link_title.end(), ' ', '_');
        ctx.link = config_.wikipedia_base + "/wiki/" + url_encode(link_title);
        ctx.source = ContextSource::kWikipedia;

        const std::string content_url =
            config_.wikipedia_base +
            "/w/api.php?action=query&prop=extracts&explaintext=1&redirects=1&format=json&titles=" +
            url_encode(ctx.title);
        const HttpResponse page =
            fetch_with_retries(transport_, content_url, {}, config_.max_retries);
        if (page.status == 200) {
            json page_json = json::parse(page.body, nullptr, /*allow_exceptions=*/false);
            if (!page_json.is_discarded()) {
                const json pages = page_json.value("query", json::object())
                                       .value("pages", json::object());
                for (const auto& [_, p] : pages.items()) {
                    ctx.content = p.value("extract", "");
                    break;
                }
            }
        }
        if (ctx.content.empty()) ctx.content = ctx.snippet;
        out.push_back(std::move(ctx));
    }
    return out;
}

std::vector<ContextRecord> Retriever::search_web(const std::string& query) {
    if (config_.api_key.empty()) {
        throw ConfigError("web search requires FACTREASON_SERPER_KEY");
    }
    const json body = {{"q", query}, {"num", config_.k}};
    const std::string body_text = body.dump();
    HttpHeaders headers{{"X-API-KEY", config_.api_key}};
    const HttpResponse response =
        fetch_with_retries(transport_, config_.serper_url, headers, config_.max_retries,
                           &body_text);
    if (response.status != 200) {
        throw TransportError("web search returned status " + std::to_string(response.status));
    }
    json parsed = json::parse(response.body, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) throw TransportError("web search returned malformed JSON");

    std::vector<ContextRecord> out;
    for (const json& item : parsed.value("organic", json::array())) {
        if (static_cast<int>(out.size()) >= config_.k) break;
        ContextRecord ctx;
        ctx.title = item.value("title", "");
        ctx.link = item.value("link", "");
        ctx.snippet = item.value("snippet", "");
        ctx.source = ContextSource::kWebSearch;
        if (!ctx.link.empty()) {
            try {
                const HttpResponse page =
                    fetch_with_retries(transport_, ctx.link, {}, config_.max_retries);
                if (page.status == 200) ctx.content = strip_html(page.body);
            } catch (const TransportError&) {
                // page fetch is best-effort; the snippet still carries the evidence
            }
        }
        if (ctx.content.empty()) ctx.content = ctx.snippet;
        out.push_back(std::move(ctx));
    }
    return out;
}

std::vector<ContextRecord> Retriever::lookup_fixture(const std::string& query) const {
    const auto it = fixture_.find(query);
    if (it == fixture_.end()) return {};
    return it->second;
}

}  // namespace factreason
