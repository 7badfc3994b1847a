#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "factreason/baselines.hpp"
#include "factreason/errors.hpp"
#include "support/mock_chat.hpp"

using namespace factreason;
namespace ft = factreason::testing;

namespace {

AtomRecord atom(const std::string& text) { return {"a1", text, std::nullopt, false}; }

ContextRecord context(const std::string& content, const std::string& title = "Title",
                      const std::string& link = "https://x/1") {
    ContextRecord ctx;
    ctx.context_id = "c1";
    ctx.title = title;
    ctx.link = link;
    ctx.content = content;
    return ctx;
}

const BaselineConfig kConfig{"test-model", 0.0};

}  // namespace

TEST_CASE("FactScore parses True and False replies") {
    ft::ScriptedChatClient client;
    SUBCASE("bare True") {
        client.set_default(ft::text_reply("True"));
        CHECK(fs_assess(atom("x"), {context("c")}, kConfig, client).label ==
              AtomLabel::kSupported);
    }
    SUBCASE("prefixed False") {
        client.set_default(ft::text_reply("Output: False."));
        CHECK(fs_assess(atom("x"), {context("c")}, kConfig, client).label ==
              AtomLabel::kContradicted);
    }
    SUBCASE("first occurrence wins") {
        client.set_default(ft::text_reply("False, it is not true."));
        CHECK(fs_assess(atom("x"), {context("c")}, kConfig, client).label ==
              AtomLabel::kContradicted);
    }
    SUBCASE("unparseable") {
        client.set_default(ft::text_reply("maybe"));
        CHECK_THROWS_AS(fs_assess(atom("x"), {context("c")}, kConfig, client), ReplyParseError);
    }
    SUBCASE("requires a context") {
        CHECK_THROWS_AS(fs_assess(atom("x"), {}, kConfig, client), ConfigError);
    }
}

TEST_CASE("FactScore prompts carry numbered passages and the question") {
    std::string seen;
    ft::ScriptedChatClient client;
    client.add_rule([&](const std::string& prompt) {
        seen = prompt;
        return true;
    }, ft::text_reply("True"));
    fs_assess(atom("The sky is blue."), {context("passage one"), context("passage two")},
              kConfig, client);
    CHECK(seen.find("Context 1: passage one") != std::string::npos);
    CHECK(seen.find("Context 2: passage two") != std::string::npos);
    CHECK(seen.find("Input: The sky is blue. True or False?") != std::string::npos);
}

TEST_CASE("FactVerify takes the last bracketed answer") {
    ft::ScriptedChatClient client;
    SUBCASE("supported") {
        client.set_default(ft::text_reply("Reasoning...\n[Supported]"));
        CHECK(fv_assess(atom("x"), {context("c")}, kConfig, client).label ==
              AtomLabel::kSupported);
    }
    SUBCASE("last wins") {
        client.set_default(ft::text_reply("[Contradicted] ... but overall [Undecided]"));
        CHECK(fv_assess(atom("x"), {context("c")}, kConfig, client).label ==
              AtomLabel::kUndecided);
    }
    SUBCASE("no brackets") {
        client.set_default(ft::text_reply("Supported"));
        CHECK_THROWS_AS(fv_assess(atom("x"), {context("c")}, kConfig, client), ReplyParseError);
    }
}

TEST_CASE("VeriScore takes the last ###-delimited decision") {
    ft::ScriptedChatClient client;
    SUBCASE("supported") {
        client.set_default(ft::text_reply("Your decision: ###Supported###"));
        CHECK(vs_assess(atom("x"), {context("c")}, kConfig, client).label ==
              AtomLabel::kSupported);
    }
    SUBCASE("contradicted") {
        client.set_default(ft::text_reply("###Contradicted###"));
        CHECK(vs_assess(atom("x"), {context("c")}, kConfig, client).label ==
              AtomLabel::kContradicted);
    }
    SUBCASE("undecided") {
        client.set_default(ft::text_reply("###Undecided###"));
        CHECK(vs_assess(atom("x"), {context("c")}, kConfig, client).label ==
              AtomLabel::kUndecided);
    }
    SUBCASE("missing delimiters") {
        client.set_default(ft::text_reply("Supported"));
        CHECK_THROWS_AS(vs_assess(atom("x"), {context("c")}, kConfig, client), ReplyParseError);
    }
}

TEST_CASE("VeriScore formats contexts as search results") {
    std::string seen;
    ft::ScriptedChatClient client;
    client.add_rule([&](const std::string& prompt) {
        seen = prompt;
        return true;
    }, ft::text_reply("###Supported###"));
    vs_assess(atom("The championship match of the FIFA World Cup 2026 will be hosted by the "
                   "United States."),
              {context("match schedule", "World Cup 2026", "https://fifa.test/final")}, kConfig,
              client);
    CHECK(seen.find("Search result 1\nTitle: World Cup 2026\nContent: match schedule\nLink: "
                    "https://fifa.test/final") != std::string::npos);
    CHECK(seen.find("Claim: The championship match") != std::string::npos);
}

TEST_CASE("the DeepSeek prompt shares the bracket grammar") {
    ft::ScriptedChatClient client;
    SUBCASE("supported") {
        client.set_default(ft::text_reply("[Supported]"));
        CHECK(deepseek_assess(atom("x"), {context("c")}, kConfig, client).label ==
              AtomLabel::kSupported);
    }
    SUBCASE("undecided") {
        client.set_default(ft::text_reply("[Undecided]"));
        CHECK(deepseek_assess(atom("x"), {context("c")}, kConfig, client).label ==
              AtomLabel::kUndecided);
    }
    SUBCASE("empty reply") {
        client.set_default(ft::text_reply(""));
        CHECK_THROWS_AS(deepseek_assess(atom("x"), {context("c")}, kConfig, client),
                        ReplyParseError);
    }
}

TEST_CASE("each assessor costs exactly one completion per atom") {
    ft::ScriptedChatClient client;
    client.set_default(ft::text_reply("True [Supported] ###Supported###"));
    const std::vector<ContextRecord> contexts = {context("c")};
    fs_assess(atom("x"), contexts, kConfig, client);
    CHECK(client.calls() == 1);
    fv_assess(atom("x"), contexts, kConfig, client);
    CHECK(client.calls() == 2);
    vs_assess(atom("x"), contexts, kConfig, client);
    CHECK(client.calls() == 3);
    deepseek_assess(atom("x"), contexts, kConfig, client);
    CHECK(client.calls() == 4);
}
