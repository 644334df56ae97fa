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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmfix/solver.hpp"

using namespace pmfix;

namespace {

const std::vector<std::string> kPoints{"0", "1", "1/2", "1/4", "1/8", "1/16"};
const std::vector<double> kValues{0.0, 1.0, 0.5, 0.25, 0.125, 0.0625};

PMSpace canonical_space(TriangleKind kind = TriangleKind::Pointwise,
                        TNorm tnorm = TNorm::minimum()) {
    std::vector<std::vector<double>> beta(6, std::vector<double>(6, 0.0));
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            if (i != j) beta[i][j] = std::max(kValues[i], kValues[j]);
        }
    }
    return PMSpace::ultrametric_plateau(kPoints, beta, {kind, std::move(tnorm)});
}

SelfMap halving_map(const PMSpace& s) {
    return SelfMap::from_pairs(s, {{"0", "0"},
                                   {"1", "1/2"},
                                   {"1/2", "1/4"},
                                   {"1/4", "1/8"},
                                   {"1/8", "1/16"},
                                   {"1/16", "0"}});
}

PMSpace swap_space() {
    using Entries = std::vector<std::tuple<std::size_t, std::size_t, Ddf>>;
    return PMSpace::build({"a", "b"}, Entries{{0, 1, Ddf::plateau(0.5)}},
                          {TriangleKind::Pointwise, TNorm::minimum()});
}

bool has_note(const IterationTrace& trace, const std::string& needle) {
    return std::any_of(trace.notes.begin(), trace.notes.end(), [&](const std::string& note) {
        return note.find(needle) != std::string::npos;
    });
}

}  // namespace

TEST_CASE("pointwise run on the halving map certifies every step exactly") {
    const PMSpace s = canonical_space();
    const SelfMap f = halving_map(s);
    const IterationTrace trace =
        picard(s, f, s.require_index("1"), SolveMode::Thm41, 0.5,
               std::vector<double>{1.0}, 1e-9, 64);

    CHECK(trace.iterates == std::vector<std::size_t>{1, 2, 3, 4, 5, 0, 0});
    CHECK(trace.outcome == Outcome::Converged);
    CHECK(trace.fixed_point == 0);
    CHECK(trace.steps == 5);
    CHECK(trace.exact_fixpoint);
    CHECK(trace.residuals == std::vector<double>{1.0, 0.5, 0.25, 0.125, 0.0625, 0.0});

    // The geometric chain 1 - 2^-n is attained with equality until the
    // orbit hits the fixed point.
    REQUIRE(trace.bounds.size() == 6);
    for (const BoundRecord& b : trace.bounds) {
        CHECK(b.t == 1.0);
        CHECK(b.bound == 1.0 - std::ldexp(1.0, -static_cast<int>(b.n)));
        CHECK(b.ok_at_t);
        CHECK(b.ok_at_scaled);
        if (b.n <= 4) {
            CHECK(b.step_at_t == b.bound);
        } else {
            CHECK(b.step_at_t == 1.0);
        }
    }
    REQUIRE(trace.cauchy.size() == 21);
    for (const CauchyRecord& c : trace.cauchy) {
        CHECK(c.ok);
        if (c.n <= 4) CHECK(c.lhs == c.bound);
    }
    CHECK(trace.contraction.holds);
    CHECK(trace.contraction.max_defect == 0.0);
    CHECK(trace.tnorm_dominant);
    CHECK(trace.certified);
    CHECK(trace.notes.empty());
}

TEST_CASE("starting on the fixed point settles in zero steps") {
    const PMSpace s = canonical_space();
    const IterationTrace trace =
        picard(s, halving_map(s), s.require_index("0"), SolveMode::Thm41, 0.5,
               std::vector<double>{1.0}, 1e-9, 64);
    CHECK(trace.iterates == std::vector<std::size_t>{0, 0});
    CHECK(trace.steps == 0);
    CHECK(trace.outcome == Outcome::Converged);
    CHECK(trace.residuals == std::vector<double>{0.0});
    CHECK(trace.certified);
}

TEST_CASE("a two-cycle is detected and never certified") {
    const PMSpace s = swap_space();
    const SelfMap swap(std::vector<std::size_t>{1, 0});
    const IterationTrace trace = picard(s, swap, 0, SolveMode::Thm41, 0.5,
                                        std::vector<double>{1.0}, 1e-9, 64);
    CHECK(trace.outcome == Outcome::CycleDetected);
    CHECK(trace.iterates == std::vector<std::size_t>{0, 1, 0});
    CHECK_FALSE(trace.fixed_point.has_value());
    CHECK_FALSE(trace.contraction.holds);
    CHECK_FALSE(trace.certified);
    CHECK(has_note(trace, "cycle"));
    CHECK(has_note(trace, "contraction hypothesis fails"));
}

TEST_CASE("sup-convolution mode certifies the scaled chain") {
    const PMSpace s = canonical_space(TriangleKind::SupConvolution);
    const SelfMap f = halving_map(s);
    const IterationTrace trace = picard(s, f, s.require_index("1"), SolveMode::Thm33, 0.5,
                                        std::vector<double>{1.0}, 1e-9, 64);
    CHECK(trace.mode == SolveMode::Thm33);
    CHECK(trace.contraction.cls == ContractionClass::TSR_P);
    CHECK(trace.contraction.holds);
    CHECK(trace.outcome == Outcome::Converged);
    CHECK(trace.fixed_point == 0);
    for (const BoundRecord& b : trace.bounds) {
        CHECK(b.ok_at_scaled);
        // Plateau distances evaluate identically at t and k^n t, so both
        // recorded views agree here.
        CHECK(b.step_at_scaled == b.step_at_t);
    }
    CHECK(trace.certified);
}

TEST_CASE("mode preconditions are hard errors, not failed certificates") {
    const PMSpace pointwise = canonical_space(TriangleKind::Pointwise);
    const PMSpace supconv = canonical_space(TriangleKind::SupConvolution);
    const SelfMap f = halving_map(pointwise);
    const std::vector<double> grid{1.0};
    CHECK_THROWS_WITH_AS(picard(pointwise, f, 1, SolveMode::Thm33, 0.5, grid, 1e-9, 64),
                         doctest::Contains("sup-convolution"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(picard(supconv, f, 1, SolveMode::Thm33, 0.6, grid, 1e-9, 64),
                         doctest::Contains("k <= 1/2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(picard(supconv, f, 1, SolveMode::Thm41, 0.5, grid, 1e-9, 64),
                         doctest::Contains("pointwise"), std::invalid_argument);
    CHECK_THROWS_AS(picard(pointwise, f, 99, SolveMode::Thm41, 0.5, grid, 1e-9, 64),
                    std::invalid_argument);
    CHECK_THROWS_AS(picard(pointwise, f, 1, SolveMode::Thm41, 0.5, grid, -1.0, 64),
                    std::invalid_argument);
}

TEST_CASE("a residual stop without an exact fixed point is not certified") {
    const PMSpace s = canonical_space();
    const IterationTrace trace =
        picard(s, halving_map(s), s.require_index("1"), SolveMode::Thm41, 0.5,
               std::vector<double>{1.0}, 0.5, 64);
    CHECK(trace.outcome == Outcome::Converged);
    CHECK(trace.iterates == std::vector<std::size_t>{1, 2, 3});
    CHECK_FALSE(trace.exact_fixpoint);
    CHECK_FALSE(trace.certified);
    CHECK(has_note(trace, "not exactly fixed"));
}

TEST_CASE("an exhausted budget can still carry a valid certificate") {
    const PMSpace s = canonical_space();
    const IterationTrace trace =
        picard(s, halving_map(s), s.require_index("1"), SolveMode::Thm41, 0.5,
               std::vector<double>{1.0}, 1e-9, 2);
    CHECK(trace.outcome == Outcome::BudgetExhausted);
    CHECK_FALSE(trace.fixed_point.has_value());
    // Certification covers the recorded steps; it does not assert
    // convergence.
    CHECK(trace.certified);
    CHECK(has_note(trace, "budget exhausted"));
}

TEST_CASE("a non-dominant t-norm blocks certification") {
    const PMSpace s = canonical_space(TriangleKind::Pointwise, TNorm::product());
    const IterationTrace trace =
        picard(s, halving_map(s), s.require_index("1"), SolveMode::Thm41, 0.5,
               std::vector<double>{1.0}, 1e-9, 64);
    CHECK(trace.outcome == Outcome::Converged);
    CHECK(trace.contraction.holds);
    CHECK_FALSE(trace.tnorm_dominant);
    CHECK_FALSE(trace.certified);
    CHECK(has_note(trace, "idempotent dominance"));
}

TEST_CASE("sphere-localized run around a near-fixed start") {
    const PMSpace s = canonical_space();
    const SelfMap f = halving_map(s);
    const std::vector<double> u_grid{0.25, 1.0};
    const std::vector<double> t_grid{1.0};

    SUBCASE("the gate holds at 1/4 and the orbit stays inside") {
        const SphereRunResult result = picard_in_sphere(
            s, f, s.require_index("1/4"), 0.5, 0.3, 1.0, u_grid, t_grid, 1e-9, 64);
        CHECK(result.hypothesis_ok);
        CHECK_FALSE(result.hypothesis_witness.has_value());
        CHECK(result.sphere == std::vector<std::size_t>{0, 3, 4, 5});
        CHECK(result.map_closed_on_sphere);
        CHECK_FALSE(result.escape_index.has_value());
        CHECK(result.trace.outcome == Outcome::Converged);
        CHECK(result.trace.fixed_point == 0);
        CHECK(result.trace.contraction.pair_subset == result.sphere);
        CHECK(result.trace.certified);
    }
    SUBCASE("the gate fails at 1 and the run is reported uncertified") {
        const SphereRunResult result = picard_in_sphere(
            s, f, s.require_index("1"), 0.5, 0.3, 1.0, u_grid, t_grid, 1e-9, 64);
        CHECK_FALSE(result.hypothesis_ok);
        REQUIRE(result.hypothesis_witness.has_value());
        CHECK(*result.hypothesis_witness == 0.25);
        CHECK(result.sphere == std::vector<std::size_t>{1});
        CHECK_FALSE(result.map_closed_on_sphere);
        CHECK(result.escape_index == 1);
        // The orbit still converges; only the certificate is withheld.
        CHECK(result.trace.outcome == Outcome::Converged);
        CHECK_FALSE(result.trace.certified);
        CHECK(has_note(result.trace, "sphere hypothesis fails"));
        CHECK(has_note(result.trace, "escapes the closed sphere at iterate 1"));
    }
    SUBCASE("parameters are validated") {
        CHECK_THROWS_AS(picard_in_sphere(s, f, 3, 0.5, 1.5, 1.0, u_grid, t_grid, 1e-9, 64),
                        std::invalid_argument);
        CHECK_THROWS_AS(picard_in_sphere(s, f, 3, 0.5, 0.3, 0.0, u_grid, t_grid, 1e-9, 64),
                        std::invalid_argument);
        CHECK_THROWS_AS(picard_in_sphere(s, f, 99, 0.5, 0.3, 1.0, u_grid, t_grid, 1e-9, 64),
                        std::invalid_argument);
    }
}

TEST_CASE("power runs square the map and transport the conclusion") {
    const PMSpace s = canonical_space();
    const SelfMap f = halving_map(s);
    const std::vector<double> grid{1.0};

    SUBCASE("the squared halving map contracts at k = 1/4") {
        const PowerRunResult result =
            power_picard(s, f, 2, s.require_index("1"), 0.25, grid, 1e-9, 64);
        CHECK(result.m == 2);
        CHECK(result.power_contraction_ok);
        CHECK_FALSE(result.refused);
        CHECK(result.g_report.max_defect == 0.0);
        CHECK(result.trace.iterates == std::vector<std::size_t>{1, 3, 5, 0, 0});
        CHECK(result.trace.steps == 3);
        CHECK(result.trace.fixed_point == 0);
        CHECK(result.f_fixes_limit);
        CHECK(result.trace.certified);
        // The transported chain is tight while the orbit moves.
        REQUIRE(result.aux_chain.size() >= 3);
        for (const AuxChainRecord& rec : result.aux_chain) {
            CHECK(rec.ok);
            if (rec.n <= 2) CHECK(rec.lhs == rec.bound);
        }
        CHECK(result.aux_chain[1].bound == 0.75);
        CHECK(result.aux_chain[2].bound == 0.9375);
        for (const ContinuityProbe& probe : result.continuity) CHECK(probe.ok);
    }
    SUBCASE("power one reproduces the plain run") {
        const PowerRunResult result =
            power_picard(s, f, 1, s.require_index("1"), 0.5, grid, 1e-9, 64);
        const IterationTrace plain = picard(s, f, s.require_index("1"), SolveMode::Thm41, 0.5,
                                            grid, 1e-9, 64);
        CHECK(result.trace.iterates == plain.iterates);
        CHECK(result.trace.residuals == plain.residuals);
        CHECK(result.trace.steps == plain.steps);
        CHECK(result.trace.certified == plain.certified);
        CHECK(result.f_fixes_limit);
    }
    SUBCASE("a swap map is refused because its square is the identity") {
        const PMSpace two = swap_space();
        const SelfMap swap(std::vector<std::size_t>{1, 0});
        const PowerRunResult refused = power_picard(two, swap, 2, 0, 0.5, grid, 1e-9, 64);
        CHECK(refused.refused);
        CHECK_FALSE(refused.power_contraction_ok);
        CHECK(refused.trace.outcome == Outcome::BudgetExhausted);
        CHECK(has_note(refused.trace, "refused"));

        const PowerRunResult forced =
            power_picard(two, swap, 2, 0, 0.5, grid, 1e-9, 64, /*force=*/true);
        CHECK_FALSE(forced.refused);
        CHECK(forced.trace.outcome == Outcome::Converged);
        CHECK(forced.trace.steps == 0);
        // The identity fixes the start, but f itself does not.
        CHECK_FALSE(forced.f_fixes_limit);
        CHECK_FALSE(forced.trace.certified);
        CHECK(has_note(forced.trace, "not fixed by the map itself"));
    }
    SUBCASE("power runs demand a pointwise space and a positive exponent") {
        const PMSpace supconv = canonical_space(TriangleKind::SupConvolution);
        CHECK_THROWS_AS(power_picard(supconv, f, 2, 1, 0.25, grid, 1e-9, 64),
                        std::invalid_argument);
        CHECK_THROWS_AS(power_picard(s, f, 0, 1, 0.25, grid, 1e-9, 64), std::invalid_argument);
        CHECK_THROWS_AS(power_picard(s, f, 2, 99, 0.25, grid, 1e-9, 64), std::invalid_argument);
        CHECK_THROWS_AS(power_picard(s, f, 2, 1, 0.25, grid, 1e-9, 64, false,
                                     std::vector<double>{2.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("uniqueness audit compares two claimed fixed points") {
    const PMSpace s = canonical_space();
    const SelfMap f = halving_map(s);
    const std::vector<double> grid{1.0};

    SUBCASE("non-fixed inputs are rejected") {
        CHECK_THROWS_WITH_AS(
            verify_uniqueness(s, f, s.require_index("0"), s.require_index("1"), 0.5, grid),
            doctest::Contains("fixed"), std::invalid_argument);
    }
    SUBCASE("the unique fixed point agrees with itself") {
        const UniquenessReport report =
            verify_uniqueness(s, f, s.require_index("0"), s.require_index("0"), 0.5, grid);
        CHECK(report.inputs_fixed);
        CHECK(report.unique);
        CHECK(report.max_deviation == 0.0);
        CHECK_FALSE(report.witness_t.has_value());
    }
    SUBCASE("two genuinely distinct fixed points contradict the hypothesis") {
        using Entries = std::vector<std::tuple<std::size_t, std::size_t, Ddf>>;
        const PMSpace abc = PMSpace::build({"a", "b", "c"},
                                           Entries{{0, 1, Ddf::plateau(0.5)},
                                                   {0, 2, Ddf::plateau(0.5)},
                                                   {1, 2, Ddf::plateau(0.5)}},
                                           {TriangleKind::Pointwise, TNorm::minimum()});
        const SelfMap g(std::vector<std::size_t>{0, 1, 0});
        const UniquenessReport report = verify_uniqueness(abc, g, 0, 1, 0.5, grid);
        CHECK(report.inputs_fixed);
        CHECK_FALSE(report.unique);
        CHECK(report.max_deviation == 0.5);
        CHECK(report.witness_t == 1.0);
        // Consistency: with two fixed points the contraction hypothesis
        // must fail somewhere.
        CHECK_FALSE(tsr_defect(abc, g, 0.5, grid).holds);
    }
}

TEST_CASE("an empty t grid defaults to a single probe at 1") {
    const PMSpace s = canonical_space();
    const IterationTrace trace = picard(s, halving_map(s), s.require_index("1"),
                                        SolveMode::Thm41, 0.5, {}, 1e-9, 64);
    CHECK(trace.t_grid == std::vector<double>{1.0});
    CHECK(trace.certified);
}
