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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmfix/contraction.hpp"
#include "pmfix/ddf.hpp"
#include "pmfix/space.hpp"

namespace pmfix {

/// Which convergence argument certifies the Picard run.
///
/// Thm33 is the sup-convolution route: it requires the space to combine
/// distances with the sup-convolution operator, a contraction ratio
/// k <= 1/2, and the iterated (TSR-P) contraction hypothesis. Thm41 is the
/// pointwise route: any k in (0,1) with the plain TSR hypothesis, on a
/// space whose triangle operator is the pointwise one.
enum class SolveMode { Thm33, Thm41 };

std::string to_string(SolveMode mode);
SolveMode solve_mode_from_name(const std::string& name);

/// One certified inequality of the per-step bound chain:
///
///   d(x_{n+1}, x_n)(t') >= 1 - k^n * (1 - d(x_1, x_0)(t))
///
/// evaluated both at t' = t (the pointwise route) and at t' = k^n * t (the
/// sup-convolution route). Both evaluations are recorded for every run; the
/// mode decides which one must hold for the run to be certified.
struct BoundRecord {
    std::size_t n = 0;       ///< iteration index the bound applies to
    double t = 0.0;          ///< grid point the bound is anchored at
    double bound = 0.0;      ///< 1 - k^n * (1 - d(x1,x0)(t))
    double step_at_t = 0.0;  ///< d(x_{n+1}, x_n) evaluated at t
    double step_at_scaled = 0.0;  ///< d(x_{n+1}, x_n) evaluated at k^n * t
    bool ok_at_t = false;
    bool ok_at_scaled = false;
};

/// One certified Cauchy-tail inequality:
///
///   d(x_{n+p}, x_n)(t) >= 1 - k^n * (1 - d(x_1, x_0)(t))
struct CauchyRecord {
    std::size_t n = 0;
    std::size_t p = 0;
    double t = 0.0;
    double lhs = 0.0;
    double bound = 0.0;
    bool ok = false;
};

enum class Outcome { Converged, CycleDetected, BudgetExhausted };

std::string to_string(Outcome outcome);

/// Full record of one Picard iteration run. Every numeric claim in the
/// trace is recomputed and checked against the recorded iterates, so a
/// trace can be audited without rerunning the solver.
struct IterationTrace {
    SolveMode mode = SolveMode::Thm41;
    double k = 0.0;
    double eps = 0.0;
    std::vector<double> t_grid;

    std::vector<std::size_t> iterates;      ///< x_0, x_1, ..., point indices
    std::vector<Ddf> step_distance;         ///< d(x_{n+1}, x_n) for each step
    std::vector<double> residuals;          ///< 1 - min_t step_distance[n](t)
    std::vector<BoundRecord> bounds;        ///< per-step certified inequalities
    std::vector<CauchyRecord> cauchy;       ///< Cauchy-tail inequalities

    Outcome outcome = Outcome::BudgetExhausted;
    std::optional<std::size_t> fixed_point;  ///< point index, when converged
    std::size_t steps = 0;                   ///< first index where the orbit settles
    bool exact_fixpoint = false;             ///< f(limit) == limit verified exactly

    ContractionReport contraction;  ///< hypothesis check for the active mode
    bool tnorm_dominant = false;    ///< t-norm satisfies a*a >= a on probes
    bool certified = false;         ///< hypothesis, dominance and chain all hold
    std::vector<std::string> notes;
};

/// Runs Picard iteration x_{n+1} = f(x_n) from x0 and certifies each step
/// against the geometric bound chain for the requested mode.
///
/// Thm33 demands a sup-convolution space and k <= 1/2 (violations are
/// invalid_argument, not a failed certificate); Thm41 demands a pointwise
/// space. Iteration stops on an exact fixed point, on residual <= eps, on
/// an orbit cycle, or after max_iter steps. An empty t_grid defaults
/// to {1.0}.
IterationTrace picard(const PMSpace& space, const SelfMap& f, std::size_t x0, SolveMode mode,
                      double k, std::span<const double> t_grid, double eps,
                      std::size_t max_iter, int m_max = 4);

/// Result of a sphere-localized run: the global hypothesis is replaced by
/// the requirement that x0 stays r-close to f(x0) at every positive u, and
/// the contraction is only required on the closed sphere around x0.
struct SphereRunResult {
    bool hypothesis_ok = false;
    std::optional<double> hypothesis_witness;  ///< a u where the gate fails
    std::vector<std::size_t> sphere;           ///< closed-sphere member indices
    bool map_closed_on_sphere = false;         ///< all iterates stayed inside
    std::optional<std::size_t> escape_index;   ///< first iterate outside, if any
    IterationTrace trace;
};

/// Picard iteration localized to the closed sphere of radius r at
/// tolerance t around x0. The gate d(x0, f(x0))(u) > 1 - r is decided for
/// all u > 0 at once (left-continuity reduces it to the limit at 0+);
/// u_grid only adds reporting probes. Mode is chosen by the space kind.
SphereRunResult picard_in_sphere(const PMSpace& space, const SelfMap& f, std::size_t x0,
                                 double k, double r, double t, std::span<const double> u_grid,
                                 std::span<const double> t_grid, double eps,
                                 std::size_t max_iter, bool force = false);

/// One exact continuity probe at a point pair: if x is t-close to a, f(x)
/// must stay (t, eps)-close to f(a). On a finite space this is a complete
/// scan of the candidate witnesses, but success at the probed (t, eps)
/// pairs is evidence, not proof, of continuity.
struct ContinuityProbe {
    double t = 0.0;
    double eps = 0.0;
    bool ok = false;
    std::optional<std::size_t> witness_x;
    std::optional<std::size_t> witness_a;
};

/// One link of the auxiliary chain transported by f:
///
///   d(g^n(f(x0)), g^n(x0))(t) >= 1 - k^n * (1 - d(f(x0), x0)(t))
struct AuxChainRecord {
    std::size_t n = 0;
    double t = 0.0;
    double lhs = 0.0;
    double bound = 0.0;
    bool ok = false;
};

/// Result of running Picard on the power map g = f^m and transporting the
/// conclusion back to f. The fixed point of g is checked to be fixed by f
/// itself; the aux chain certifies that f's orbit is dragged to the same
/// limit.
struct PowerRunResult {
    int m = 0;
    bool power_contraction_ok = false;  ///< TSR holds for g = f^m
    bool refused = false;               ///< g fails TSR and force was not set
    IterationTrace trace;               ///< the run on g
    bool f_fixes_limit = false;         ///< f(y) == y for the g-limit y
    std::vector<ContinuityProbe> continuity;
    std::vector<AuxChainRecord> aux_chain;
    ContractionReport g_report;
};

/// Runs Picard for g = f^m (m >= 1) on a pointwise space and certifies the
/// transported conclusion for f. If g fails the TSR hypothesis at k the
/// run is refused unless force is set.
PowerRunResult power_picard(const PMSpace& space, const SelfMap& f, int m, std::size_t x0,
                            double k, std::span<const double> t_grid, double eps,
                            std::size_t max_iter, bool force = false,
                            std::span<const double> eps_grid = {});

/// Uniqueness audit for two claimed fixed points y, z: under a TSR-type
/// contraction the deviation 1 - d(y,z)(t) satisfies dev <= k * dev, which
/// forces dev = 0 at every t. Any probe with dev > tol is a contradiction
/// witness against the contraction hypothesis.
struct UniquenessReport {
    bool inputs_fixed = false;  ///< both inputs verified as fixed points
    bool unique = false;        ///< d(y,z) is the distribution of distance 0
    double max_deviation = 0.0;
    std::optional<double> witness_t;
    double tolerance = 0.0;
};

UniquenessReport verify_uniqueness(const PMSpace& space, const SelfMap& f, std::size_t y,
                                   std::size_t z, double k, std::span<const double> t_grid,
                                   double tol = 0.0);

}  // namespace pmfix
