// Copyright 2026 The pmfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "pmfix/serialization.hpp"
#include "pmfix/solver.hpp"

using namespace pmfix;
using nlohmann::json;

namespace {

json canonical_space_json() {
    json beta = json::array();
    const std::vector<double> values{0.0, 1.0, 0.5, 0.25, 0.125, 0.0625};
    for (std::size_t i = 0; i < 6; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < 6; ++j) {
            row.push_back(i == j ? 0.0 : std::max(values[i], values[j]));
        }
        beta.push_back(std::move(row));
    }
    return json{{"points", {"0", "1", "1/2", "1/4", "1/8", "1/16"}},
                {"mode", {{"triangle", "tau_pointwise"}, {"tnorm", "min"}}},
                {"ultrametric_plateau", {{"beta", std::move(beta)}}}};
}

json halving_map_json() {
    // Parsed rather than brace-built: a list of two-string pairs in an
    // initializer would collapse into an object.
    return json::parse(R"({"type": "table", "pairs": [
        ["0", "0"], ["1", "1/2"], ["1/2", "1/4"],
        ["1/4", "1/8"], ["1/8", "1/16"], ["1/16", "0"]]})");
}

}  // namespace

TEST_CASE("distribution functions round-trip through json") {
    SUBCASE("breakpoints survive unchanged") {
        const Ddf f{{{0.5, 0.25}, {1.0, 0.5}}};
        const json j = ddf_to_json(f);
        CHECK(j == json::parse("[[0.5, 0.25], [1.0, 0.5]]"));
        CHECK(ddf_from_json(j) == f);
    }
    SUBCASE("the empty distribution is an empty array") {
        CHECK(ddf_to_json(Ddf()) == json::array());
        CHECK(ddf_from_json(json::array()) == Ddf());
    }
    SUBCASE("an inf threshold is accepted on input and dropped canonically") {
        const Ddf f = ddf_from_json(json::parse(R"([[0.5, 0.5], ["inf", 1.0]])"));
        CHECK(f == Ddf{{{0.5, 0.5}}});
        CHECK(ddf_to_json(f).size() == 1);
    }
    SUBCASE("schema errors are config errors") {
        CHECK_THROWS_AS(ddf_from_json(json::parse("{}")), ConfigError);
        CHECK_THROWS_AS(ddf_from_json(json::parse("[[1.0]]")), ConfigError);
        CHECK_THROWS_AS(ddf_from_json(json::parse(R"([["nan", 1.0]])")), ConfigError);
        CHECK_THROWS_AS(ddf_from_json(json::parse(R"([[1.0, "x"]])")), ConfigError);
    }
    SUBCASE("value errors from construction are wrapped, not leaked") {
        // An out-of-range value is a construction error; through json it
        // must surface as ConfigError rather than invalid_argument.
        const json bad = json::parse("[[1.0, 1.5]]");
        CHECK_THROWS_AS(ddf_from_json(bad), ConfigError);
        CHECK_THROWS_WITH_AS(ddf_from_json(bad), doctest::Contains("distribution"), ConfigError);
    }
}

TEST_CASE("t-norms parse from names and tables") {
    SUBCASE("builtin names round-trip as strings") {
        for (const char* name : {"min", "product", "lukasiewicz"}) {
            const TNorm t = tnorm_from_json(json(name));
            CHECK(t.name() == name);
            CHECK(tnorm_to_json(t) == json(name));
        }
        CHECK_THROWS_AS(tnorm_from_json(json("nope")), ConfigError);
    }
    SUBCASE("a table parses unverified") {
        const json j = json::parse(R"({"table": {"grid_points": 2, "values": [0, 0, 0, 1]}})");
        const TNorm t = tnorm_from_json(j);
        CHECK_FALSE(t.verified());
        CHECK(t.apply(1.0, 1.0) == 1.0);
        CHECK(t.apply(0.5, 0.5) == 0.25);
        const json out = tnorm_to_json(t);
        CHECK(out["kind"] == "table");
    }
    SUBCASE("malformed tables are config errors") {
        CHECK_THROWS_AS(tnorm_from_json(json::parse(R"({"table": {"grid_points": 2}})")),
                        ConfigError);
        CHECK_THROWS_AS(
            tnorm_from_json(json::parse(R"({"table": {"grid_points": 3, "values": [0, 1]}})")),
            ConfigError);
        CHECK_THROWS_AS(tnorm_from_json(json(42)), ConfigError);
    }
}

TEST_CASE("spaces parse from the three input forms") {
    SUBCASE("the plateau shorthand builds the canonical space") {
        const PMSpace s = space_from_json(canonical_space_json());
        CHECK(s.size() == 6);
        CHECK(s.distance(s.require_index("1"), s.require_index("0")) == Ddf::plateau(1.0));
        CHECK(s.mode().kind == TriangleKind::Pointwise);
        CHECK(s.completeness_assumed());
    }
    SUBCASE("a broken ultrametric surfaces as a semantic error") {
        json j = canonical_space_json();
        j["ultrametric_plateau"]["beta"][1][2] = 0.125;
        j["ultrametric_plateau"]["beta"][2][1] = 0.125;
        // The shape is fine, the content is not: this is invalid_argument,
        // not ConfigError, so callers can tell schema from substance.
        CHECK_THROWS_AS(space_from_json(j), std::invalid_argument);
    }
    SUBCASE("the simple shorthand scales a shape") {
        const json j{{"points", {"x", "y"}},
                     {"mode", {{"triangle", "tau_star"}, {"tnorm", "min"}}},
                     {"simple",
                      {{"metric", {{0.0, 2.0}, {2.0, 0.0}}},
                       {"shape", {{1.0, 0.5}, {2.0, 0.75}}}}}};
        const PMSpace s = space_from_json(j);
        CHECK(s.distance(0, 1) == Ddf{{{2.0, 0.5}, {4.0, 0.75}}});
        CHECK(s.mode().kind == TriangleKind::SupConvolution);
    }
    SUBCASE("a full distance table accepts names and indices") {
        const json j = json::parse(
            R"({"points": ["a", "b"], "distance": [["a", 1, [[1.0, 0.5]]]]})");
        const PMSpace s = space_from_json(j);
        CHECK(s.distance(0, 1) == Ddf{{{1.0, 0.5}}});
        CHECK(s.mode().kind == TriangleKind::SupConvolution);  // default mode
    }
    SUBCASE("exactly one input form is required") {
        json both = canonical_space_json();
        both["distance"] = json::array();
        CHECK_THROWS_WITH_AS(space_from_json(both), doctest::Contains("exactly one"),
                             ConfigError);
        json none{{"points", {"a", "b"}}};
        CHECK_THROWS_AS(space_from_json(none), ConfigError);
    }
    SUBCASE("serialized spaces parse back equal") {
        const PMSpace s = space_from_json(canonical_space_json());
        const PMSpace back = space_from_json(space_to_json(s));
        REQUIRE(back.size() == s.size());
        CHECK(back.points() == s.points());
        CHECK(back.mode().kind == s.mode().kind);
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t q = 0; q < s.size(); ++q) {
                CHECK(back.distance(i, q) == s.distance(i, q));
            }
        }
    }
}

TEST_CASE("self-maps parse with schema and coverage errors split") {
    const PMSpace s = space_from_json(canonical_space_json());
    SUBCASE("the halving table parses") {
        const SelfMap f = self_map_from_json(s, halving_map_json());
        CHECK(f.apply(s.require_index("1")) == s.require_index("1/2"));
        const SelfMap back = self_map_from_json(s, self_map_to_json(s, f));
        CHECK(back.images() == f.images());
    }
    SUBCASE("unknown names are config errors") {
        json j = halving_map_json();
        j["pairs"][0][1] = "missing";
        CHECK_THROWS_AS(self_map_from_json(s, j), ConfigError);
    }
    SUBCASE("incomplete coverage is a semantic error") {
        json j = halving_map_json();
        j["pairs"].erase(0);
        CHECK_THROWS_AS(self_map_from_json(s, j), std::invalid_argument);
    }
    SUBCASE("only table maps are supported") {
        CHECK_THROWS_AS(self_map_from_json(s, json{{"type", "formula"}}), ConfigError);
    }
}

TEST_CASE("reports serialize their optional fields honestly") {
    const PMSpace s = space_from_json(canonical_space_json());
    const SelfMap f = self_map_from_json(s, halving_map_json());
    SUBCASE("a vacuous triggered check serializes a null defect") {
        using Entries = std::vector<std::tuple<std::size_t, std::size_t, Ddf>>;
        const PMSpace tiny = PMSpace::build({"a", "b"}, Entries{{0, 1, Ddf()}},
                                            {TriangleKind::Pointwise, TNorm::minimum()});
        const SelfMap id(std::vector<std::size_t>{0, 1});
        const ContractionReport report =
            h_contraction_check(tiny, id, 0.5, std::vector<double>{0.5});
        const json j = contraction_report_to_json(tiny, report);
        CHECK(j["max_defect"].is_null());
        CHECK(j["holds"] == true);
    }
    SUBCASE("scaled-family witnesses carry their order") {
        const ContractionReport report =
            tsr_p_defect(s, f, 0.5, std::vector<double>{1.0}, 4);
        const json j = contraction_report_to_json(s, report);
        REQUIRE(j.contains("witness"));
        CHECK(j["witness"].contains("m"));
        CHECK(j["m_max"] == 4);
        CHECK(j["class"] == "TSR_P");
    }
    SUBCASE("min-k results serialize the scan") {
        const MinKResult result =
            estimate_min_k(s, f, ContractionClass::TSR, std::vector<double>{1.0});
        const json j = min_k_to_json(result);
        CHECK(j["k"] == 0.5);
        CHECK(j["monotone"] == true);
        CHECK(j["scan"].size() == 31);
        MinKResult none = result;
        none.k.reset();
        CHECK(min_k_to_json(none)["k"].is_null());
    }
}

TEST_CASE("dumped json is deterministic and newline-terminated") {
    const json j{{"b", 1}, {"a", 2}};
    const std::string text = dump_json(j);
    CHECK(text == "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
    const PMSpace s = space_from_json(canonical_space_json());
    CHECK(dump_json(space_to_json(s)) == dump_json(space_to_json(s)));
}

TEST_CASE("solve traces export to csv rows") {
    const PMSpace s = space_from_json(canonical_space_json());
    const SelfMap f = self_map_from_json(s, halving_map_json());
    const IterationTrace trace = picard(s, f, s.require_index("1"), SolveMode::Thm41, 0.5,
                                        std::vector<double>{1.0}, 1e-9, 64);
    const std::string csv = trace_to_csv(s, trace);
    CHECK(csv.rfind("n,x,residual,bound,step,certified\n", 0) == 0);
    CHECK(csv.find("0,1/2,1,0,0,true\n") != std::string::npos);
    CHECK(csv.find("1,1/4,0.5,0.5,0.5,true\n") != std::string::npos);
    CHECK(csv.find("4,0,0.0625,0.9375,0.9375,true\n") != std::string::npos);
    // One row per recorded step.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

    const json jt = trace_to_json(s, trace);
    CHECK(jt["outcome"] == "converged");
    CHECK(jt["fixed_point"] == "0");
    CHECK(jt["certified"] == true);
    CHECK(jt["iterates"].size() == 7);
}
