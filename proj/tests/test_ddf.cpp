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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "pmfix/ddf.hpp"

using namespace pmfix;

namespace {

// Reference evaluation straight from the definition: the supremum of the
// recorded values strictly below t, zero when nothing qualifies. Works on
// raw, unsorted, duplicated breakpoints, so it is independent of the
// canonicalization under test.
double reference_eval(const std::vector<Breakpoint>& raw, double t) {
    if (std::isinf(t) && t > 0) return 1.0;
    double best = 0.0;
    for (const Breakpoint& bp : raw) {
        if (bp.threshold < t) best = std::max(best, bp.value);
    }
    return best;
}

// Dyadic random breakpoints keep every comparison exact.
std::vector<Breakpoint> random_raw(std::mt19937& rng) {
    std::vector<Breakpoint> raw;
    const std::size_t n = rng() % 6;
    for (std::size_t i = 0; i < n; ++i) {
        raw.push_back({static_cast<double>(rng() % 33) / 8.0,
                       static_cast<double>(rng() % 17) / 16.0});
    }
    return raw;
}

}  // namespace

TEST_CASE("eval matches the direct definition on random inputs") {
    std::mt19937 rng(20260819);
    for (int trial = 0; trial < 500; ++trial) {
        const auto raw = random_raw(rng);
        const Ddf f{raw};
        for (int j = 0; j <= 80; ++j) {
            const double t = static_cast<double>(j) / 16.0;
            CAPTURE(trial);
            CAPTURE(t);
            REQUIRE(f.eval(t) == reference_eval(raw, t));
        }
        CHECK(f.eval(kInfinity) == 1.0);
    }
}

TEST_CASE("eval is a strict left limit at thresholds") {
    const Ddf f = Ddf::dirac(2.0);
    CHECK(f.eval(2.0) == 0.0);
    CHECK(f.eval_above(2.0) == 1.0);
    CHECK(f.eval(2.0 + 1e-9) == 1.0);
    CHECK(f.eval(kInfinity) == 1.0);

    const Ddf empty;
    CHECK(empty.eval(1e18) == 0.0);
    CHECK(empty.eval_above(1e18) == 0.0);
    CHECK(empty.eval(kInfinity) == 1.0);
}

TEST_CASE("named constructors") {
    CHECK(Ddf::dirac(1.5).breakpoints() == std::vector<Breakpoint>{{1.5, 1.0}});
    CHECK(Ddf::plateau(0.25).breakpoints() == std::vector<Breakpoint>{{0.0, 0.75}});
    CHECK(Ddf::plateau(0.0) == Ddf::h0());
    CHECK(Ddf::h0() == Ddf::dirac(0.0));
    CHECK(Ddf::plateau(1.0).breakpoints().empty());
    // A jump at infinity carries no information below it.
    CHECK(Ddf::dirac(kInfinity).breakpoints().empty());
}

TEST_CASE("canonicalization keeps only the strictly increasing envelope") {
    SUBCASE("duplicate thresholds keep the larger value") {
        const Ddf f{{{1.0, 0.25}, {1.0, 0.5}}};
        CHECK(f.breakpoints() == std::vector<Breakpoint>{{1.0, 0.5}});
    }
    SUBCASE("dominated later values are dropped") {
        const Ddf f{{{1.0, 0.75}, {2.0, 0.5}, {3.0, 0.75}}};
        CHECK(f.breakpoints() == std::vector<Breakpoint>{{1.0, 0.75}});
    }
    SUBCASE("zero values are dropped") {
        const Ddf f{{{1.0, 0.0}, {2.0, 0.5}}};
        CHECK(f.breakpoints() == std::vector<Breakpoint>{{2.0, 0.5}});
    }
    SUBCASE("out-of-order input is sorted") {
        const Ddf f{{{3.0, 1.0}, {1.0, 0.25}}};
        CHECK(f.breakpoints() == std::vector<Breakpoint>{{1.0, 0.25}, {3.0, 1.0}});
    }
    SUBCASE("canonical input is unchanged") {
        const std::vector<Breakpoint> bps{{0.5, 0.25}, {1.0, 0.75}, {2.0, 1.0}};
        CHECK(Ddf{bps}.breakpoints() == bps);
    }
}

TEST_CASE("construction rejects malformed breakpoints") {
    CHECK_THROWS_AS((Ddf{{{std::nan(""), 0.5}}}), std::invalid_argument);
    CHECK_THROWS_AS((Ddf{{{-1.0, 0.5}}}), std::invalid_argument);
    CHECK_THROWS_AS((Ddf{{{1.0, 1.5}}}), std::invalid_argument);
    CHECK_THROWS_AS((Ddf{{{1.0, -0.1}}}), std::invalid_argument);
    CHECK_THROWS_AS((Ddf{{{1.0, std::nan("")}}}), std::invalid_argument);
}

TEST_CASE("is_h0 decides the maximal element exactly") {
    CHECK(Ddf::h0().is_h0());
    CHECK_FALSE(Ddf::plateau(0.5).is_h0());
    CHECK_FALSE(Ddf::dirac(1.0).is_h0());
    CHECK_FALSE(Ddf{}.is_h0());
    // Tolerance admits values within tol of 1 just above zero.
    CHECK(Ddf::plateau(1e-13).is_h0(1e-12));
    CHECK_FALSE(Ddf::plateau(1e-13).is_h0());
    CHECK_FALSE(Ddf::dirac(1e-13).is_h0(1e-12));
}

TEST_CASE("geq agrees with a dense probe comparison on random pairs") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 400; ++trial) {
        const Ddf f{random_raw(rng)};
        const Ddf g{random_raw(rng)};
        // Probing at and just above every merged threshold covers every
        // value either function ever takes.
        bool expected = true;
        for (double c : merged_thresholds(f, g)) {
            if (f.eval(c) < g.eval(c) || f.eval_above(c) < g.eval_above(c)) {
                expected = false;
                break;
            }
        }
        CAPTURE(trial);
        REQUIRE(geq(f, g) == expected);
    }
}

TEST_CASE("geq is a partial order compatible with eval") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Ddf f{random_raw(rng)};
        const Ddf g{random_raw(rng)};
        CHECK(geq(f, f));
        if (geq(f, g) && geq(g, f)) {
            // Antisymmetry up to pointwise equality, hence canonical form.
            CHECK(f == g);
        }
        if (geq(f, g)) {
            for (int j = 0; j <= 40; ++j) {
                const double t = static_cast<double>(j) / 8.0;
                REQUIRE(f.eval(t) >= g.eval(t));
            }
        }
    }
    CHECK(geq(Ddf::h0(), Ddf::plateau(0.5)));
    CHECK_FALSE(geq(Ddf::plateau(0.5), Ddf::h0()));
    CHECK(geq(Ddf::dirac(1.0), Ddf::dirac(2.0)));
    CHECK_FALSE(geq(Ddf::dirac(2.0), Ddf::dirac(1.0)));
}

TEST_CASE("eval is non-decreasing and left-continuous") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const Ddf f{random_raw(rng)};
        double prev = 0.0;
        for (int j = 0; j <= 80; ++j) {
            const double t = static_cast<double>(j) / 16.0;
            const double cur = f.eval(t);
            REQUIRE(cur >= prev);
            prev = cur;
        }
        for (const Breakpoint& bp : f.breakpoints()) {
            // The value at a threshold is the limit from the left, which
            // any sample just below must already attain.
            REQUIRE(f.eval(bp.threshold) == f.eval(bp.threshold - 1e-12));
            REQUIRE(f.eval_above(bp.threshold) == bp.value);
        }
    }
}

TEST_CASE("geq_within and approx_equal") {
    // plateau(b) has value 1 - b, so the smaller parameter dominates.
    CHECK(geq_within(Ddf::plateau(0.5), Ddf::plateau(0.5 + 1e-13), 0.0));
    CHECK(geq_within(Ddf::plateau(0.5 + 1e-13), Ddf::plateau(0.5), 1e-12));
    CHECK_FALSE(geq_within(Ddf::plateau(0.6), Ddf::plateau(0.5), 1e-12));

    CHECK(approx_equal(Ddf::plateau(0.5), Ddf::plateau(0.5), 0.0));
    // Zero tolerance is structural equality.
    CHECK_FALSE(approx_equal(Ddf::plateau(0.5), Ddf::plateau(0.5 - 1e-14), 0.0));
    CHECK(approx_equal(Ddf::plateau(0.5), Ddf::plateau(0.5 - 1e-14), 1e-12));
    CHECK_FALSE(approx_equal(Ddf::dirac(1.0), Ddf::dirac(2.0), 1e-12));
}

TEST_CASE("merged_thresholds is sorted and unique") {
    const Ddf f{{{1.0, 0.5}, {3.0, 1.0}}};
    const Ddf g{{{1.0, 0.25}, {2.0, 0.75}}};
    CHECK(merged_thresholds(f, g) == std::vector<double>{1.0, 2.0, 3.0});
}
