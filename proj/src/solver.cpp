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

#include "pmfix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmfix/tnorm.hpp"
#include "pmfix/triangle.hpp"

namespace pmfix {

std::string to_string(SolveMode mode) {
    return mode == SolveMode::Thm33 ? "thm33" : "thm41";
}

SolveMode solve_mode_from_name(const std::string& name) {
    if (name == "thm33") return SolveMode::Thm33;
    if (name == "thm41") return SolveMode::Thm41;
    throw std::invalid_argument("unknown solve mode: " + name);
}

std::string to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Converged: return "converged";
        case Outcome::CycleDetected: return "cycle_detected";
        case Outcome::BudgetExhausted: return "budget_exhausted";
    }
    return "budget_exhausted";
}

namespace {

std::vector<double> effective_grid(std::span<const double> t_grid) {
    if (t_grid.empty()) return {1.0};
    std::vector<double> grid(t_grid.begin(), t_grid.end());
    for (double t : grid) {
        if (!(t > 0.0) || std::isinf(t)) {
            throw std::invalid_argument("t grid entries must be positive finite reals");
        }
    }
    return grid;
}

IterationTrace run_picard(const PMSpace& space, const SelfMap& f, std::size_t x0, SolveMode mode,
                          double k, std::span<const double> t_grid, double eps,
                          std::size_t max_iter, int m_max,
                          std::span<const std::size_t> subset) {
    if (f.size() != space.size()) throw std::invalid_argument("self-map and space sizes differ");
    if (x0 >= space.size()) throw std::invalid_argument("start point index out of range");
    if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("k must lie in (0, 1)");
    if (!(eps >= 0.0)) throw std::invalid_argument("eps must be non-negative");
    if (mode == SolveMode::Thm33) {
        if (space.mode().kind != TriangleKind::SupConvolution) {
            throw std::invalid_argument("sup-convolution mode requires a sup-convolution space");
        }
        if (k > 0.5) throw std::invalid_argument("sup-convolution mode requires k <= 1/2");
    } else if (space.mode().kind != TriangleKind::Pointwise) {
        throw std::invalid_argument("pointwise mode requires a pointwise space");
    }

    IterationTrace trace;
    trace.mode = mode;
    trace.k = k;
    trace.eps = eps;
    trace.t_grid = effective_grid(t_grid);

    trace.contraction =
        mode == SolveMode::Thm33
            ? tsr_p_defect(space, f, k, trace.t_grid, m_max, /*tolerance=*/0.0, subset)
            : tsr_defect(space, f, k, trace.t_grid, /*tolerance=*/0.0, subset);
    trace.tnorm_dominant = is_idempotent_dominant(space.mode().tnorm);

    // Picard loop with cycle detection over the finite point set.
    trace.iterates.push_back(x0);
    std::vector<char> seen(space.size(), 0);
    seen[x0] = 1;
    bool stopped = false;
    while (trace.iterates.size() <= max_iter && !stopped) {
        const std::size_t cur = trace.iterates.back();
        const std::size_t next = f.apply(cur);
        const Ddf& step = space.distance(next, cur);
        trace.step_distance.push_back(step);
        trace.iterates.push_back(next);

        double min_eval = 1.0;
        for (double t : trace.t_grid) min_eval = std::min(min_eval, step.eval(t));
        trace.residuals.push_back(1.0 - min_eval);

        if (next == cur) {
            trace.outcome = Outcome::Converged;
            stopped = true;
        } else if (trace.residuals.back() <= eps) {
            trace.outcome = Outcome::Converged;
            stopped = true;
        } else if (seen[next]) {
            trace.outcome = Outcome::CycleDetected;
            stopped = true;
        } else {
            seen[next] = 1;
        }
    }
    if (!stopped) trace.outcome = Outcome::BudgetExhausted;

    if (trace.outcome == Outcome::Converged) {
        const std::size_t limit = trace.iterates.back();
        trace.fixed_point = limit;
        trace.exact_fixpoint = f.apply(limit) == limit;
        const auto first = std::find(trace.iterates.begin(), trace.iterates.end(), limit);
        trace.steps = static_cast<std::size_t>(first - trace.iterates.begin());
    } else {
        trace.steps = trace.step_distance.size();
    }

    // Certify every step against the geometric chain anchored at d(x1, x0).
    bool chain_ok = true;
    bool cauchy_ok = true;
    if (!trace.step_distance.empty()) {
        const Ddf& d10 = trace.step_distance.front();
        double kn = 1.0;
        for (std::size_t n = 0; n < trace.step_distance.size(); ++n, kn *= k) {
            const Ddf& step = trace.step_distance[n];
            for (double t : trace.t_grid) {
                BoundRecord rec;
                rec.n = n;
                rec.t = t;
                rec.bound = 1.0 - kn * (1.0 - d10.eval(t));
                rec.step_at_t = step.eval(t);
                rec.step_at_scaled = step.eval(kn * t);
                rec.ok_at_t = rec.step_at_t >= rec.bound;
                rec.ok_at_scaled = rec.step_at_scaled >= rec.bound;
                const bool active_ok =
                    mode == SolveMode::Thm33 ? rec.ok_at_scaled : rec.ok_at_t;
                if (!active_ok && chain_ok) {
                    chain_ok = false;
                    trace.notes.push_back("bound chain fails at step " + std::to_string(n) +
                                          ", t = " + std::to_string(t));
                }
                trace.bounds.push_back(rec);
            }
        }

        constexpr std::size_t kCauchyCap = 4096;
        const std::size_t last = trace.iterates.size() - 1;
        double kn_outer = 1.0;
        for (std::size_t n = 0; n < last && trace.cauchy.size() < kCauchyCap;
             ++n, kn_outer *= k) {
            for (std::size_t p = 1; n + p <= last && trace.cauchy.size() < kCauchyCap; ++p) {
                const Ddf& d = space.distance(trace.iterates[n + p], trace.iterates[n]);
                for (double t : trace.t_grid) {
                    CauchyRecord rec;
                    rec.n = n;
                    rec.p = p;
                    rec.t = t;
                    rec.lhs = d.eval(t);
                    rec.bound = 1.0 - kn_outer * (1.0 - d10.eval(t));
                    rec.ok = rec.lhs >= rec.bound;
                    if (!rec.ok && cauchy_ok) {
                        cauchy_ok = false;
                        trace.notes.push_back("cauchy bound fails at (n = " + std::to_string(n) +
                                              ", p = " + std::to_string(p) +
                                              ", t = " + std::to_string(t) + ")");
                    }
                    trace.cauchy.push_back(rec);
                }
            }
        }
    }

    if (!trace.contraction.holds) {
        trace.notes.push_back("contraction hypothesis fails at k = " + std::to_string(k));
    }
    if (!trace.tnorm_dominant) {
        trace.notes.push_back(
            "t-norm lacks idempotent dominance (a * a >= a); chain not certified");
    }
    const bool limit_ok = trace.outcome != Outcome::Converged || trace.exact_fixpoint;
    if (!limit_ok) {
        trace.notes.push_back("stopped on residual but the final point is not exactly fixed");
    }
    if (trace.outcome == Outcome::CycleDetected) {
        trace.notes.push_back("orbit entered a cycle without converging");
    } else if (trace.outcome == Outcome::BudgetExhausted) {
        trace.notes.push_back("iteration budget exhausted before convergence");
    }
    trace.certified = trace.contraction.holds && trace.tnorm_dominant && chain_ok && cauchy_ok &&
                      limit_ok;
    return trace;
}

}  // namespace

IterationTrace picard(const PMSpace& space, const SelfMap& f, std::size_t x0, SolveMode mode,
                      double k, std::span<const double> t_grid, double eps,
                      std::size_t max_iter, int m_max) {
    return run_picard(space, f, x0, mode, k, t_grid, eps, max_iter, m_max, {});
}

SphereRunResult picard_in_sphere(const PMSpace& space, const SelfMap& f, std::size_t x0,
                                 double k, double r, double t, std::span<const double> u_grid,
                                 std::span<const double> t_grid, double eps,
                                 std::size_t max_iter, bool force) {
    if (f.size() != space.size()) throw std::invalid_argument("self-map and space sizes differ");
    if (x0 >= space.size()) throw std::invalid_argument("start point index out of range");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("sphere radius must lie in (0, 1)");
    if (!(t > 0.0) || std::isinf(t)) throw std::invalid_argument("sphere t must be positive");
    for (double u : u_grid) {
        if (!(u > 0.0) || std::isinf(u)) {
            throw std::invalid_argument("u grid entries must be positive finite reals");
        }
    }

    SphereRunResult result;
    const Ddf& d0 = space.distance(x0, f.apply(x0));

    // The gate d(x0, f(x0))(u) > 1 - r for all u > 0 is equivalent to the
    // same bound on the limit at 0+, by left-continuity and monotonicity.
    result.hypothesis_ok = d0.eval_above(0.0) > 1.0 - r;
    if (!result.hypothesis_ok) {
        std::vector<double> probes(u_grid.begin(), u_grid.end());
        double min_positive = kInfinity;
        for (const Breakpoint& bp : d0.breakpoints()) {
            if (bp.threshold > 0.0) {
                probes.push_back(bp.threshold);
                min_positive = std::min(min_positive, bp.threshold);
            }
        }
        if (!std::isinf(min_positive)) probes.push_back(0.5 * min_positive);
        if (probes.empty()) probes.push_back(1.0);
        std::sort(probes.begin(), probes.end());
        for (double u : probes) {
            if (d0.eval(u) <= 1.0 - r) {
                result.hypothesis_witness = u;
                break;
            }
        }
    }

    result.sphere = sphere_members(space, SphereSpec{x0, r, t, /*closed=*/true});

    const SolveMode mode = space.mode().kind == TriangleKind::SupConvolution ? SolveMode::Thm33
                                                                             : SolveMode::Thm41;
    result.trace = run_picard(space, f, x0, mode, k, t_grid, eps, max_iter, /*m_max=*/4,
                              result.sphere);

    result.map_closed_on_sphere = true;
    for (std::size_t n = 0; n < result.trace.iterates.size(); ++n) {
        if (!std::binary_search(result.sphere.begin(), result.sphere.end(),
                                result.trace.iterates[n])) {
            result.map_closed_on_sphere = false;
            result.escape_index = n;
            break;
        }
    }

    if (!result.hypothesis_ok) {
        result.trace.certified = false;
        result.trace.notes.push_back(force ? "sphere hypothesis fails; run forced"
                                           : "sphere hypothesis fails; run not certified");
    }
    if (!result.map_closed_on_sphere) {
        result.trace.certified = false;
        result.trace.notes.push_back("orbit escapes the closed sphere at iterate " +
                                     std::to_string(*result.escape_index));
    }
    return result;
}

PowerRunResult power_picard(const PMSpace& space, const SelfMap& f, int m, std::size_t x0,
                            double k, std::span<const double> t_grid, double eps,
                            std::size_t max_iter, bool force,
                            std::span<const double> eps_grid) {
    if (space.mode().kind != TriangleKind::Pointwise) {
        throw std::invalid_argument("power runs require a pointwise space");
    }
    if (m < 1) throw std::invalid_argument("power exponent must be at least 1");
    if (f.size() != space.size()) throw std::invalid_argument("self-map and space sizes differ");
    if (x0 >= space.size()) throw std::invalid_argument("start point index out of range");
    if (!(eps >= 0.0)) throw std::invalid_argument("eps must be non-negative");
    static constexpr double kDefaultEps[] = {0.5, 0.25, 0.125};
    if (eps_grid.empty()) eps_grid = kDefaultEps;
    for (double e : eps_grid) {
        if (!(e > 0.0 && e <= 1.0)) {
            throw std::invalid_argument("eps grid entries must lie in (0, 1]");
        }
    }

    PowerRunResult result;
    result.m = m;
    const SelfMap g = f.power(static_cast<std::size_t>(m));

    const std::vector<double> grid = effective_grid(t_grid);
    result.g_report = tsr_defect(space, g, k, grid);
    result.power_contraction_ok = result.g_report.holds;

    if (!result.power_contraction_ok && !force) {
        result.refused = true;
        result.trace.mode = SolveMode::Thm41;
        result.trace.k = k;
        result.trace.eps = eps;
        result.trace.t_grid = grid;
        result.trace.contraction = result.g_report;
        result.trace.tnorm_dominant = is_idempotent_dominant(space.mode().tnorm);
        result.trace.notes.push_back(
            "power map fails the contraction hypothesis; run refused (force to iterate anyway)");
        return result;
    }

    result.trace = picard(space, g, x0, SolveMode::Thm41, k, grid, eps, max_iter);

    if (result.trace.fixed_point) {
        const std::size_t y = *result.trace.fixed_point;
        result.f_fixes_limit = f.apply(y) == y;
        if (!result.f_fixes_limit) {
            result.trace.certified = false;
            result.trace.notes.push_back("the power-map limit is not fixed by the map itself");
        }
    }

    // Exhaustive continuity probes: on a finite space all candidate
    // witnesses can be scanned, though success at the probed pairs is
    // evidence rather than proof.
    for (double t : grid) {
        for (double e : eps_grid) {
            ContinuityProbe probe;
            probe.t = t;
            probe.eps = e;
            probe.ok = true;
            for (std::size_t x = 0; x < space.size() && probe.ok; ++x) {
                for (std::size_t a = 0; a < space.size() && probe.ok; ++a) {
                    if (space.distance(x, a).eval(t) == 1.0 &&
                        space.distance(f.apply(x), f.apply(a)).eval(t) <= 1.0 - e) {
                        probe.ok = false;
                        probe.witness_x = x;
                        probe.witness_a = a;
                    }
                }
            }
            result.continuity.push_back(probe);
        }
    }

    // Transport chain: g^n moves the pair (f(x0), x0) together at least as
    // fast as the geometric bound, so f's orbit lands on the g-limit.
    std::size_t a = f.apply(x0);
    std::size_t b = x0;
    const Ddf anchor = space.distance(a, b);
    double kn = 1.0;
    bool aux_ok = true;
    for (std::size_t n = 0; n < result.trace.iterates.size(); ++n, kn *= k) {
        const Ddf& d = space.distance(a, b);
        for (double t : grid) {
            AuxChainRecord rec;
            rec.n = n;
            rec.t = t;
            rec.lhs = d.eval(t);
            rec.bound = 1.0 - kn * (1.0 - anchor.eval(t));
            rec.ok = rec.lhs >= rec.bound;
            if (!rec.ok && aux_ok) {
                aux_ok = false;
                result.trace.notes.push_back("transport chain fails at step " +
                                             std::to_string(n) + ", t = " + std::to_string(t));
            }
            result.aux_chain.push_back(rec);
        }
        a = g.apply(a);
        b = g.apply(b);
    }
    if (!aux_ok) result.trace.certified = false;
    return result;
}

UniquenessReport verify_uniqueness(const PMSpace& space, const SelfMap& f, std::size_t y,
                                   std::size_t z, double k, std::span<const double> t_grid,
                                   double tol) {
    if (f.size() != space.size()) throw std::invalid_argument("self-map and space sizes differ");
    if (y >= space.size() || z >= space.size()) {
        throw std::invalid_argument("fixed point index out of range");
    }
    if (f.apply(y) != y || f.apply(z) != z) {
        throw std::invalid_argument("uniqueness audit requires two fixed points");
    }
    if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("k must lie in (0, 1)");
    if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");

    UniquenessReport report;
    report.inputs_fixed = true;
    report.tolerance = tol;

    // Under the contraction the deviation dev(t) = 1 - d(y,z)(t) obeys
    // dev <= k * dev, so any positive deviation contradicts the hypothesis.
    // dev is non-increasing in t, so its supremum sits just above 0 and is
    // attained on the probes below.
    const Ddf& d = space.distance(y, z);
    std::vector<double> probes = effective_grid(t_grid);
    double min_positive = kInfinity;
    for (const Breakpoint& bp : d.breakpoints()) {
        if (bp.threshold > 0.0) {
            probes.push_back(bp.threshold);
            min_positive = std::min(min_positive, bp.threshold);
        }
    }
    if (!std::isinf(min_positive)) probes.push_back(0.5 * min_positive);
    std::sort(probes.begin(), probes.end());

    for (double t : probes) {
        const double dev = 1.0 - d.eval(t);
        report.max_deviation = std::max(report.max_deviation, dev);
        if (dev > tol && !report.witness_t) report.witness_t = t;
    }
    report.unique = d.is_h0(tol);
    return report;
}

}  // namespace pmfix
