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

#include "pmfix/space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "pmfix/parallel.hpp"

namespace pmfix {

namespace {

void require_point_names(const std::vector<std::string>& points) {
    if (points.empty()) throw std::invalid_argument("a space needs at least one point");
    std::unordered_set<std::string> seen;
    for (const auto& p : points) {
        if (p.empty()) throw std::invalid_argument("point names must be non-empty");
        if (!seen.insert(p).second) {
            throw std::invalid_argument("duplicate point name: " + p);
        }
    }
}

void require_square(const std::vector<std::vector<double>>& m, std::size_t n,
                    const char* what) {
    if (m.size() != n) throw std::invalid_argument(std::string(what) + " must be n x n");
    for (const auto& row : m) {
        if (row.size() != n) throw std::invalid_argument(std::string(what) + " must be n x n");
    }
}

std::string triple_text(const std::vector<std::string>& pts, std::size_t i, std::size_t j,
                        std::size_t k) {
    return "(" + pts[i] + ", " + pts[j] + ", " + pts[k] + ")";
}

}  // namespace

PMSpace PMSpace::build(std::vector<std::string> points,
                       std::vector<std::tuple<std::size_t, std::size_t, Ddf>> entries,
                       TriangleMode mode, bool assume_complete) {
    require_point_names(points);
    const std::size_t n = points.size();
    PMSpace space;
    space.points_ = std::move(points);
    space.mode_ = std::move(mode);
    space.assume_complete_ = assume_complete;
    space.table_.assign(n * n, Ddf());
    std::vector<char> present(n * n, 0);

    for (auto& [i, j, ddf] : entries) {
        if (i >= n || j >= n) {
            throw std::invalid_argument("distance entry index out of range");
        }
        if (present[i * n + j] && !(space.table_[i * n + j] == ddf)) {
            throw std::invalid_argument("conflicting distance entries for (" +
                                        space.points_[i] + ", " + space.points_[j] + ")");
        }
        if (present[j * n + i] && !(space.table_[j * n + i] == ddf)) {
            throw std::invalid_argument("asymmetric distance entries for (" +
                                        space.points_[i] + ", " + space.points_[j] + ")");
        }
        space.table_[i * n + j] = ddf;
        space.table_[j * n + i] = std::move(ddf);
        present[i * n + j] = present[j * n + i] = 1;
    }

    const Ddf unit = Ddf::h0();
    for (std::size_t i = 0; i < n; ++i) {
        if (present[i * n + i]) {
            if (!(space.table_[i * n + i] == unit)) {
                throw std::invalid_argument("diagonal distance for " + space.points_[i] +
                                            " must be h0");
            }
        } else {
            space.table_[i * n + i] = unit;
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!present[i * n + j]) {
                throw std::invalid_argument("missing distance entry for (" + space.points_[i] +
                                            ", " + space.points_[j] + ")");
            }
            if (space.table_[i * n + j].is_h0(0.0)) {
                throw std::invalid_argument("distance for distinct points (" + space.points_[i] +
                                            ", " + space.points_[j] + ") must differ from h0");
            }
        }
    }
    return space;
}

PMSpace PMSpace::ultrametric_plateau(std::vector<std::string> points,
                                     const std::vector<std::vector<double>>& beta,
                                     TriangleMode mode, bool assume_complete) {
    require_point_names(points);
    const std::size_t n = points.size();
    require_square(beta, n, "beta table");
    for (std::size_t i = 0; i < n; ++i) {
        if (beta[i][i] != 0.0) {
            throw std::invalid_argument("beta must vanish on the diagonal, point " + points[i]);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (beta[i][j] != beta[j][i]) {
                throw std::invalid_argument("beta must be symmetric at (" + points[i] + ", " +
                                            points[j] + ")");
            }
            if (!(beta[i][j] > 0.0 && beta[i][j] <= 1.0)) {
                throw std::invalid_argument("off-diagonal beta must lie in (0, 1] at (" +
                                            points[i] + ", " + points[j] + ")");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (beta[i][k] > std::max(beta[i][j], beta[j][k])) {
                    throw std::invalid_argument("ultrametric inequality violated at " +
                                                triple_text(points, i, j, k));
                }
            }
        }
    }
    std::vector<std::tuple<std::size_t, std::size_t, Ddf>> entries;
    entries.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            entries.emplace_back(i, j, Ddf::plateau(beta[i][j]));
        }
    }
    return build(std::move(points), std::move(entries), std::move(mode), assume_complete);
}

PMSpace PMSpace::simple(std::vector<std::string> points,
                        const std::vector<std::vector<double>>& metric, const Ddf& shape,
                        TriangleMode mode, bool assume_complete) {
    require_point_names(points);
    const std::size_t n = points.size();
    require_square(metric, n, "metric table");
    for (std::size_t i = 0; i < n; ++i) {
        if (metric[i][i] != 0.0) {
            throw std::invalid_argument("metric must vanish on the diagonal, point " + points[i]);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (metric[i][j] != metric[j][i]) {
                throw std::invalid_argument("metric must be symmetric at (" + points[i] + ", " +
                                            points[j] + ")");
            }
            if (!(metric[i][j] > 0.0) || std::isinf(metric[i][j])) {
                throw std::invalid_argument("off-diagonal metric must be positive and finite at (" +
                                            points[i] + ", " + points[j] + ")");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (metric[i][k] > metric[i][j] + metric[j][k]) {
                    throw std::invalid_argument("metric triangle inequality violated at " +
                                                triple_text(points, i, j, k));
                }
            }
        }
    }
    // shape(t / d) as a step function: every threshold scales by d.
    std::vector<std::tuple<std::size_t, std::size_t, Ddf>> entries;
    entries.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::vector<Breakpoint> scaled = shape.breakpoints();
            for (auto& bp : scaled) bp.threshold *= metric[i][j];
            entries.emplace_back(i, j, Ddf(std::move(scaled)));
        }
    }
    return build(std::move(points), std::move(entries), std::move(mode), assume_complete);
}

std::optional<std::size_t> PMSpace::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t PMSpace::require_index(std::string_view name) const {
    if (auto i = index_of(name)) return *i;
    throw std::invalid_argument("unknown point: " + std::string(name));
}

const Ddf& PMSpace::distance(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw std::invalid_argument("point index out of range");
    return table_[i * size() + j];
}

std::vector<Ddf> PMSpace::distinct_distances() const {
    std::vector<Ddf> out;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i; j < size(); ++j) {
            const Ddf& d = distance(i, j);
            if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
        }
    }
    return out;
}

SpaceAxiomReport check_axioms(const PMSpace& space) {
    const std::size_t n = space.size();
    SpaceAxiomReport report;
    report.checked_triples = n * n * n;

    auto scan = [&](std::size_t begin, std::size_t end) {
        std::vector<SpaceAxiomViolation> found;
        for (std::size_t flat = begin; flat < end; ++flat) {
            const std::size_t p = flat / (n * n);
            const std::size_t q = (flat / n) % n;
            const std::size_t r = flat % n;
            const Ddf& lhs = space.distance(p, r);
            const Ddf rhs = space.triangle(space.distance(p, q), space.distance(q, r));
            if (geq(lhs, rhs)) continue;
            for (double t : merged_thresholds(lhs, rhs)) {
                if (lhs.eval_above(t) < rhs.eval_above(t)) {
                    found.push_back({p, q, r, t});
                    break;
                }
            }
        }
        return found;
    };
    report.violations = detail::parallel_chunked<std::vector<SpaceAxiomViolation>>(
        n * n * n, {}, scan, [](auto& acc, const auto& part) {
            acc.insert(acc.end(), part.begin(), part.end());
        });
    return report;
}

std::vector<std::size_t> sphere_members(const PMSpace& space, const SphereSpec& sphere) {
    if (sphere.center >= space.size()) throw std::invalid_argument("sphere center out of range");
    if (!(sphere.r > 0.0 && sphere.r < 1.0)) {
        throw std::invalid_argument("sphere radius must lie in (0, 1)");
    }
    if (!(sphere.t > 0.0)) throw std::invalid_argument("sphere scale t must be positive");
    std::vector<std::size_t> members;
    const double floor = 1.0 - sphere.r;
    for (std::size_t x = 0; x < space.size(); ++x) {
        const double v = space.distance(x, sphere.center).eval(sphere.t);
        if (sphere.closed ? v >= floor : v > floor) members.push_back(x);
    }
    return members;
}

bool is_t_closed(const PMSpace& space, std::span<const std::size_t> subset, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    std::set<std::size_t> inside(subset.begin(), subset.end());
    for (std::size_t s : inside) {
        if (s >= space.size()) throw std::invalid_argument("subset index out of range");
    }
    for (std::size_t y = 0; y < space.size(); ++y) {
        if (inside.count(y)) continue;
        // y is a t-limit point iff every sphere around it meets the subset,
        // which on a finite space happens exactly at eval = 1.
        for (std::size_t s : inside) {
            if (space.distance(y, s).eval(t) == 1.0) return false;
        }
    }
    return true;
}

namespace {

ConvergenceReport suffix_report(const std::vector<char>& ok) {
    ConvergenceReport report;
    std::optional<std::size_t> last_bad;
    for (std::size_t i = 0; i < ok.size(); ++i) {
        if (!ok[i]) last_bad = i;
    }
    report.last_failing = last_bad;
    if (!last_bad) {
        report.converged = true;
        report.m_index = 0;
    } else if (*last_bad + 1 < ok.size()) {
        report.converged = true;
        report.m_index = *last_bad + 1;
    } else {
        report.converged = false;  // even the final checkable term fails
    }
    return report;
}

void require_probe(double alpha, double t) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
}

}  // namespace

ConvergenceReport check_convergence(const PMSpace& space, const SequenceDiagnostics& diag) {
    require_probe(diag.alpha, diag.t);
    if (diag.sequence.empty()) throw std::invalid_argument("sequence must be non-empty");
    if (diag.target >= space.size()) throw std::invalid_argument("target out of range");
    std::vector<char> ok;
    ok.reserve(diag.sequence.size());
    for (std::size_t x : diag.sequence) {
        ok.push_back(space.distance(x, diag.target).eval(diag.t) > 1.0 - diag.alpha);
    }
    return suffix_report(ok);
}

ConvergenceReport check_cauchy_prefix(const PMSpace& space,
                                      std::span<const std::size_t> sequence, double alpha,
                                      double t, std::size_t p_max) {
    require_probe(alpha, t);
    if (p_max < 1) throw std::invalid_argument("p_max must be >= 1");
    for (std::size_t x : sequence) {
        if (x >= space.size()) throw std::invalid_argument("sequence index out of range");
    }
    if (sequence.size() < 2) {
        return {.converged = true, .m_index = 0, .last_failing = std::nullopt};
    }
    std::vector<char> ok;
    ok.reserve(sequence.size() - 1);
    for (std::size_t n = 0; n + 1 < sequence.size(); ++n) {
        bool all = true;
        for (std::size_t p = 1; p <= p_max && n + p < sequence.size(); ++p) {
            if (!(space.distance(sequence[n + p], sequence[n]).eval(t) > 1.0 - alpha)) {
                all = false;
                break;
            }
        }
        ok.push_back(all);
    }
    return suffix_report(ok);
}

JointLimitReport check_joint_limit(const PMSpace& space, std::span<const std::size_t> xs,
                                   std::span<const std::size_t> ys, std::size_t x, std::size_t y,
                                   double alpha, double t, double eps) {
    if (eps < 0.0) throw std::invalid_argument("eps must be >= 0");
    JointLimitReport report;
    const ConvergenceReport cx = check_convergence(
        space, {.sequence = {xs.begin(), xs.end()}, .target = x, .alpha = alpha, .t = t});
    const ConvergenceReport cy = check_convergence(
        space, {.sequence = {ys.begin(), ys.end()}, .target = y, .alpha = alpha, .t = t});
    report.pre_ok = cx.converged && cy.converged;
    if (!report.pre_ok) return report;

    report.from_index = std::max(cx.m_index, cy.m_index);
    report.passed = true;
    const double limit = space.distance(x, y).eval(t);
    for (std::size_t n = report.from_index; n < std::min(xs.size(), ys.size()); ++n) {
        const double diff = std::abs(space.distance(xs[n], ys[n]).eval(t) - limit);
        report.max_difference = std::max(report.max_difference, diff);
        if (diff > eps && report.passed) {
            report.passed = false;
            report.witness = n;
        }
    }
    return report;
}

}  // namespace pmfix
