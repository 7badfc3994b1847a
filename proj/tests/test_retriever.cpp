#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "factreason/cache.hpp"
#include "factreason/errors.hpp"
#include "factreason/retriever.hpp"
#include "support/mock_chat.hpp"

using namespace factreason;
using nlohmann::json;
namespace ft = factreason::testing;

namespace {

AtomRecord atom(const std::string& id, const std::string& text) {
    AtomRecord a;
    a.atom_id = id;
    a.text = text;
    return a;
}

std::filesystem::path write_fixture(const json& data, const std::string& name) {
    const std::filesystem::path path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << data.dump();
    return path;
}

}  // namespace

TEST_CASE("k below one is rejected at construction") {
    ft::ScriptedTransport transport;
    RetrieverConfig config = RetrieverConfig::for_source(RetrieverSource::kWikipedia);
    config.k = 0;
    CHECK_THROWS_AS(Retriever(config, transport), ConfigError);
    config.k = 3;
    config.content_cap = 0;
    CHECK_THROWS_AS(Retriever(config, transport), ConfigError);
}

TEST_CASE("source defaults follow the evaluation protocol") {
    CHECK(RetrieverConfig::for_source(RetrieverSource::kWikipedia).k == 3);
    CHECK(RetrieverConfig::for_source(RetrieverSource::kWebSearch).k == 5);
}

TEST_CASE("fixture retrieval passes entries through in order") {
    const json fixture = {
        {"the atom text",
         json::array({{{"title", "First"}, {"link", "https://x/1"}, {"snippet", "s1"},
                       {"content", "c1"}},
                      {{"title", "Second"}, {"link", "https://x/2"}, {"snippet", "s2"},
                       {"content", "c2"}}})}};
    ft::ScriptedTransport transport;
    RetrieverConfig config = RetrieverConfig::for_source(RetrieverSource::kCachedFixture);
    config.fixture_path = write_fixture(fixture, "fr_fixture_pass.json").string();
    Retriever retriever(config, transport);

    const auto contexts = retriever.retrieve(atom("a1", "the atom text"));
    REQUIRE(contexts.size() == 2);
    CHECK(contexts[0].title == "First");
    CHECK(contexts[1].title == "Second");
    CHECK(contexts[0].retrieved_for == std::set<std::string>{"a1"});
    CHECK(transport.calls() == 0);

    CHECK(retriever.retrieve(atom("a2", "unknown query")).empty());
}

TEST_CASE("oversized pages are capped at exactly the configured length") {
    const std::string long_content(9000, 'x');
    const json fixture = {
        {"q", json::array({{{"title", "T"}, {"link", ""}, {"snippet", "s"},
                            {"content", long_content}}})}};
    ft::ScriptedTransport transport;
    RetrieverConfig config = RetrieverConfig::for_source(RetrieverSource::kCachedFixture);
    config.fixture_path = write_fixture(fixture, "fr_fixture_cap.json").string();
    Retriever retriever(config, transport);
    const auto contexts = retriever.retrieve(atom("a1", "q"));
    REQUIRE(contexts.size() == 1);
    CHECK(contexts[0].content.size() == 4000);
}

TEST_CASE("the hard cut respects UTF-8 boundaries") {
    // Multi-byte character straddling the cut must be dropped whole.
    std::string content(3999, 'a');
    content += "\xC3\xA9";  // two-byte character starting at index 3999
    CHECK(cap_content(content, 4000).size() == 3999);
    CHECK(cap_content("plain", 4000) == "plain");
}

TEST_CASE("wikipedia results map onto the context tuple") {
    ft::ScriptedTransport transport;
    const json search = {
        {"query",
         {{"search", json::array({{{"title", "Alpha Page"}, {"snippet", "a <span>snip</span>"}},
                                  {{"title", "Beta"}, {"snippet", "b"}}})}}}};
    const json alpha_page = {
        {"query", {{"pages", {{"123", {{"extract", std::string(5000, 'A')}}}}}}}};
    const json beta_page = {{"query", {{"pages", {{"9", {{"extract", "Beta body"}}}}}}}};
    transport.add("list=search", 200, search.dump());
    transport.add("titles=Alpha%20Page", 200, alpha_page.dump());
    transport.add("titles=Beta", 200, beta_page.dump());

    RetrieverConfig config = RetrieverConfig::for_source(RetrieverSource::kWikipedia);
    config.k = 2;
    Retriever retriever(config, transport);
    const auto contexts = retriever.retrieve(atom("a1", "alpha beta"));
    REQUIRE(contexts.size() == 2);
    CHECK(contexts[0].title == "Alpha Page");
    CHECK(contexts[0].link == "https://en.wikipedia.org/wiki/Alpha_Page");
    CHECK(contexts[0].snippet == "a snip");
    CHECK(contexts[0].content.size() == 4000);
    CHECK(contexts[0].source == ContextSource::kWikipedia);
    CHECK(contexts[1].content == "Beta body");
}

TEST_CASE("web search maps organic results and fetches page content") {
    ft::ScriptedTransport transport;
    const json organic = {{"organic", json::array({{{"title", "T1"},
                                                    {"link", "https://site.test/page"},
                                                    {"snippet", "snippet text"}}})}};
    transport.add("serper", 200, organic.dump());
    transport.add("site.test/page", 200, "<html><body>Body text</body></html>");

    RetrieverConfig config = RetrieverConfig::for_source(RetrieverSource::kWebSearch);
    config.api_key = "key-123";
    Retriever retriever(config, transport);
    const auto contexts = retriever.retrieve(atom("a1", "the query"));
    REQUIRE(contexts.size() == 1);
    CHECK(contexts[0].title == "T1");
    CHECK(contexts[0].content == "Body text");
    CHECK(contexts[0].source == ContextSource::kWebSearch);
    CHECK(transport.last_headers().count("X-API-KEY") == 0);  // page fetch carries no key

    const json sent = json::parse(transport.last_body());
    CHECK(sent["q"] == "the query");
    CHECK(sent["num"] == 5);
}

TEST_CASE("quota exhaustion surfaces as its own signal") {
    ft::ScriptedTransport transport;
    transport.add("list=search", 429, "quota");
    RetrieverConfig config = RetrieverConfig::for_source(RetrieverSource::kWikipedia);
    Retriever retriever(config, transport);
    CHECK_THROWS_AS(retriever.retrieve(atom("a1", "q")), QuotaError);
}

TEST_CASE("retrieval results are cached and replayed without outbound calls") {
    const std::filesystem::path root =
        std::filesystem::temp_directory_path() / "fr_retrieval_cache";
    std::filesystem::remove_all(root);
    DiskCache cache(root);

    ft::ScriptedTransport transport;
    const json search = {
        {"query", {{"search", json::array({{{"title", "Only"}, {"snippet", "s"}}})}}}};
    const json page = {{"query", {{"pages", {{"1", {{"extract", "content"}}}}}}}};
    transport.add("list=search", 200, search.dump());
    transport.add("titles=Only", 200, page.dump());

    RetrieverConfig config = RetrieverConfig::for_source(RetrieverSource::kWikipedia);
    Retriever retriever(config, transport, &cache);
    const auto first = retriever.retrieve(atom("a1", "q"));
    const int outbound = transport.calls();
    CHECK(outbound > 0);
    const auto second = retriever.retrieve(atom("a1", "q"));
    CHECK(transport.calls() == outbound);
    REQUIRE(second.size() == first.size());
    CHECK(second[0].content == first[0].content);
    std::filesystem::remove_all(root);
}
