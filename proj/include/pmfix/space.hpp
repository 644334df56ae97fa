// Copyright 2026 the pmfix authors
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
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "pmfix/ddf.hpp"
#include "pmfix/triangle.hpp"

namespace pmfix {

/// Finite probabilistic metric space: named points, a symmetric table of
/// distance distribution functions with h0 on the diagonal and only there,
/// and the triangle mode it is meant to satisfy. Construction validates
/// the table shape; the triangle axiom itself is checked separately by
/// check_axioms so that deliberately broken tables can be inspected.
///
/// Completeness cannot be decided from a finite table, so it is carried as
/// a declared assumption in the metadata.
class PMSpace {
public:
    /// Entries are (i, j, ddf) with indices into `points`. Off-diagonal
    /// entries may be given in either or both orders (both must agree);
    /// diagonal entries are optional and must equal h0. Throws
    /// std::invalid_argument on shape violations with a witness in the
    /// message.
    static PMSpace build(std::vector<std::string> points,
                         std::vector<std::tuple<std::size_t, std::size_t, Ddf>> entries,
                         TriangleMode mode, bool assume_complete = true);

    /// Distance(p, q) = plateau(beta[p][q]). beta must be symmetric, zero
    /// exactly on the diagonal, valued in (0, 1] off it, and satisfy the
    /// ultrametric inequality beta[p][r] <= max(beta[p][q], beta[q][r]);
    /// violations are reported with a witness triple.
    static PMSpace ultrametric_plateau(std::vector<std::string> points,
                                       const std::vector<std::vector<double>>& beta,
                                       TriangleMode mode, bool assume_complete = true);

    /// Distance(p, q)(t) = shape(t / d(p, q)), exact on step functions by
    /// scaling thresholds. `metric` must be a genuine finite metric.
    static PMSpace simple(std::vector<std::string> points,
                          const std::vector<std::vector<double>>& metric, const Ddf& shape,
                          TriangleMode mode, bool assume_complete = true);

    std::size_t size() const { return points_.size(); }
    const std::vector<std::string>& points() const { return points_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::size_t require_index(std::string_view name) const;

    const Ddf& distance(std::size_t i, std::size_t j) const;
    const TriangleMode& mode() const { return mode_; }
    bool completeness_assumed() const { return assume_complete_; }

    /// The mode's triangle function applied to two distances.
    Ddf triangle(const Ddf& f, const Ddf& g) const { return mode_.combine(f, g); }

    /// Distinct distance entries, useful as a sample family for triangle
    /// axiom checks.
    std::vector<Ddf> distinct_distances() const;

private:
    PMSpace() = default;

    std::vector<std::string> points_;
    std::vector<Ddf> table_;  // row-major size() x size()
    TriangleMode mode_ = {};
    bool assume_complete_ = true;
};

struct SpaceAxiomViolation {
    std::size_t p = 0;
    std::size_t q = 0;
    std::size_t r = 0;
    double witness_t = 0.0;  // the axiom fails for t just above this threshold
};

struct SpaceAxiomReport {
    std::size_t checked_triples = 0;
    std::vector<SpaceAxiomViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Exhaustive triangle-axiom check: distance(p, r) >= tau(distance(p, q),
/// distance(q, r)) for every ordered triple, decided exactly on the step
/// representation.
SpaceAxiomReport check_axioms(const PMSpace& space);

/// A sphere probe around `center`: strict membership eval > 1 - r for the
/// open sphere, eval >= 1 - r for the closed one.
struct SphereSpec {
    std::size_t center = 0;
    double r = 0.0;  // in (0, 1)
    double t = 0.0;  // > 0
    bool closed = true;
};

/// Indices of the members, in point order. The center is always a member.
std::vector<std::size_t> sphere_members(const PMSpace& space, const SphereSpec& sphere);

/// On a finite space, y is a t-limit point of S iff some member is at
/// eval(distance(y, s), t) = 1; the subset is t-closed iff no outside
/// point is a t-limit point. Exact.
bool is_t_closed(const PMSpace& space, std::span<const std::size_t> subset, double t);

/// A finite prefix of a sequence together with the probe parameters used
/// to diagnose it.
struct SequenceDiagnostics {
    std::vector<std::size_t> sequence;
    std::size_t target = 0;
    double alpha = 0.0;  // in (0, 1)
    double t = 0.0;      // > 0
};

struct ConvergenceReport {
    bool converged = false;
    std::size_t m_index = 0;                  // least m with all later terms inside
    std::optional<std::size_t> last_failing;  // greatest failing index, if any
};

/// Least m such that eval(distance(x_n, target), t) > 1 - alpha for every
/// listed n >= m; failure if even the final term misses.
ConvergenceReport check_convergence(const PMSpace& space, const SequenceDiagnostics& diag);

/// Same shape of report for the Cauchy condition over pairs (n, n + p),
/// 1 <= p <= p_max, within the listed prefix.
ConvergenceReport check_cauchy_prefix(const PMSpace& space, std::span<const std::size_t> sequence,
                                      double alpha, double t, std::size_t p_max);

struct JointLimitReport {
    bool pre_ok = false;  // both sequences converge at (alpha, t)
    bool passed = false;
    std::size_t from_index = 0;  // comparison starts here
    double max_difference = 0.0;
    std::optional<std::size_t> witness;  // first n exceeding eps
};

/// Checks |eval(distance(x_n, y_n), t) - eval(distance(x, y), t)| <= eps
/// for all n beyond both convergence indices at (alpha, t).
JointLimitReport check_joint_limit(const PMSpace& space, std::span<const std::size_t> xs,
                                   std::span<const std::size_t> ys, std::size_t x, std::size_t y,
                                   double alpha, double t, double eps);

}  // namespace pmfix
