#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "factreason/dataset.hpp"
#include "factreason/errors.hpp"

using namespace factreason;

TEST_CASE("a valid unlabeled file loads entry per line") {
    const std::string text =
        R"({"id":"e1","prompt":"who?","response":"Somebody did something."})"
        "\n\n"
        R"({"id":"e2","prompt":"when?","response":"In 1969."})"
        "\n";
    const auto entries = parse_dataset(text, DatasetFormat::kUnlabeled);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].id == "e1");
    CHECK(entries[1].response == "In 1969.");
    CHECK_FALSE(entries[0].gold_atoms.has_value());
}

TEST_CASE("labeled entries carry gold atoms") {
    const std::string text =
        R"({"id":"b1","prompt":"bio","response":"text","atoms":[{"text":"fact one","label":"S"},{"text":"fact two","label":"NS"}]})"
        "\n";
    const auto entries = parse_dataset(text, DatasetFormat::kLabeled);
    REQUIRE(entries.size() == 1);
    REQUIRE(entries[0].gold_atoms.has_value());
    REQUIRE(entries[0].gold_atoms->size() == 2);
    CHECK((*entries[0].gold_atoms)[0].label == GoldLabel::kSupported);
    CHECK((*entries[0].gold_atoms)[1].label == GoldLabel::kNotSupported);
}

TEST_CASE("a missing atom label names the line") {
    const std::string text =
        "{\"id\":\"ok\",\"prompt\":\"p\",\"response\":\"r\",\"atoms\":[{\"text\":\"t\",\"label\":\"S\"}]}\n"
        "{\"id\":\"bad\",\"prompt\":\"p\",\"response\":\"r\",\"atoms\":[{\"text\":\"t\"}]}\n";
    try {
        parse_dataset(text, DatasetFormat::kLabeled);
        FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("label") != std::string::npos);
    }
}

TEST_CASE("conflicts entries pair a claim with stanced contexts") {
    const std::string text =
        R"({"id":"c1","claim":"X attended Y.","contexts":[{"text":"X studied at Y.","stance":"support"},{"text":"X studied at Z.","stance":"conflict"}]})"
        "\n";
    const auto entries = parse_dataset(text, DatasetFormat::kConflicts);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].claim == "X attended Y.");
    REQUIRE(entries[0].inline_contexts.has_value());
    REQUIRE(entries[0].inline_contexts->size() == 2);
    CHECK((*entries[0].inline_contexts)[0].stance == Stance::kSupport);
    CHECK((*entries[0].inline_contexts)[1].stance == Stance::kConflict);
    CHECK(entries[0].response.empty());
}

TEST_CASE("schema violations are reported with their line") {
    CHECK_THROWS_WITH_AS(parse_dataset("not json\n", DatasetFormat::kUnlabeled),
                         doctest::Contains("line 1"), DatasetError);
    CHECK_THROWS_WITH_AS(
        parse_dataset(R"({"id":"x","prompt":"p"})" "\n", DatasetFormat::kUnlabeled),
        doctest::Contains("response"), DatasetError);
    CHECK_THROWS_WITH_AS(
        parse_dataset(R"({"id":"x","claim":"c","contexts":[{"text":"t","stance":"huh"}]})" "\n",
                      DatasetFormat::kConflicts),
        doctest::Contains("stance"), DatasetError);
    CHECK_THROWS_AS(load_dataset("/nonexistent/path.jsonl", DatasetFormat::kUnlabeled),
                    DatasetError);
}
