#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bcuav/errors.hpp"
#include "bcuav/scenario.hpp"
#include "helpers.hpp"

using namespace bcuav;

TEST_CASE("generation matches the requested shape and stake range") {
    const Scenario s = testing::table_scenario(6, 10, 1);
    CHECK(s.num_clusters() == 6);
    int total_nodes = 0;
    for (const ClusterSpec& c : s.clusters) {
        total_nodes += static_cast<int>(c.nodes.size());
        CHECK(c.stake >= 90.0);
        CHECK(c.stake <= 100.0);
        for (const Vec2& w : c.nodes) CHECK(s.area.contains(w));
    }
    CHECK(total_nodes == 60);
}

TEST_CASE("generation is deterministic for a fixed seed") {
    GenerationConfig gen;
    gen.num_clusters = 2;
    gen.nodes_per_cluster = 1;
    const Scenario a = generate_scenario(gen, RadioParams{}, EconomicParams{}, 7);
    const Scenario b = generate_scenario(gen, RadioParams{}, EconomicParams{}, 7);
    CHECK(a == b);
    const Scenario c = generate_scenario(gen, RadioParams{}, EconomicParams{}, 8);
    CHECK(a != c);
}

TEST_CASE("a single cluster is rejected") {
    GenerationConfig gen;
    gen.num_clusters = 1;
    CHECK_THROWS_AS(generate_scenario(gen, RadioParams{}, EconomicParams{}, 1), ConfigError);
}

TEST_CASE("clustered placement keeps nodes inside the area") {
    GenerationConfig gen;
    gen.num_clusters = 4;
    gen.nodes_per_cluster = 8;
    gen.placement = NodePlacement::Clustered;
    gen.cluster_radius = 400.0;
    const Scenario s = generate_scenario(gen, RadioParams{}, EconomicParams{}, 3);
    for (const ClusterSpec& c : s.clusters)
        for (const Vec2& w : c.nodes) CHECK(s.area.contains(w));
}

TEST_CASE("save/load round-trips bit-exactly") {
    const Scenario s = testing::table_scenario(3, 4, 99);
    const auto path = std::filesystem::temp_directory_path() / "bcuav_scenario_rt.json";
    save_scenario(s, path.string());
    const Scenario loaded = load_scenario(path.string());
    CHECK(loaded == s);
    std::filesystem::remove(path);
}

TEST_CASE("negative bandwidth fails validation with the field name") {
    Scenario s = testing::table_scenario(2, 2, 5);
    std::string text = scenario_to_json(s);
    const auto at = text.find("\"bandwidth_ag\":");
    REQUIRE(at != std::string::npos);
    text.insert(at + 16, "-");
    try {
        scenario_from_json(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bandwidth_ag") != std::string::npos);
    }
}

TEST_CASE("missing clusters is a parse error") {
    CHECK_THROWS_AS(scenario_from_json(R"({"area":{"width":1,"height":1}})"), ParseError);
    CHECK_THROWS_AS(scenario_from_json("not json at all"), ParseError);
}

TEST_CASE("coordinates outside the area are rejected") {
    Scenario s = testing::table_scenario(2, 2, 5);
    s.clusters[0].nodes[0].x = s.area.width + 1.0;
    CHECK_THROWS_AS(validate(s), ConfigError);
}
