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

#include "pmfix/tnorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmfix {

namespace {

void require_unit_interval(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " +
                                    std::to_string(v));
    }
}

std::vector<double> axiom_grid(double step) {
    if (!(step > 0.0 && step <= 1.0)) {
        throw std::invalid_argument("grid step must lie in (0, 1]");
    }
    std::vector<double> grid;
    for (double v = 0.0; v < 1.0; v += step) grid.push_back(v);
    grid.push_back(1.0);  // the unit must be on the grid
    return grid;
}

}  // namespace

TNorm TNorm::minimum() { return TNorm(Kind::Minimum, true); }
TNorm TNorm::product() { return TNorm(Kind::Product, true); }
TNorm TNorm::lukasiewicz() { return TNorm(Kind::Lukasiewicz, true); }

TNorm TNorm::from_table(std::vector<double> values, std::size_t grid_points) {
    if (grid_points < 2) {
        throw std::invalid_argument("table t-norm needs at least 2 grid points per axis");
    }
    if (values.size() != grid_points * grid_points) {
        throw std::invalid_argument("table t-norm values must be grid_points^2 entries");
    }
    for (double v : values) require_unit_interval(v, "table value");
    TNorm t(Kind::Table, false);
    t.table_ = std::move(values);
    t.grid_points_ = grid_points;
    return t;
}

std::optional<TNorm> TNorm::from_name(std::string_view name) {
    if (name == "min") return minimum();
    if (name == "product") return product();
    if (name == "lukasiewicz") return lukasiewicz();
    return std::nullopt;
}

std::string_view TNorm::name() const {
    switch (kind_) {
        case Kind::Minimum: return "min";
        case Kind::Product: return "product";
        case Kind::Lukasiewicz: return "lukasiewicz";
        case Kind::Table: return "table";
    }
    return "?";
}

double TNorm::apply(double a, double b) const {
    require_unit_interval(a, "t-norm input");
    require_unit_interval(b, "t-norm input");
    switch (kind_) {
        case Kind::Minimum: return std::min(a, b);
        case Kind::Product: return a * b;
        case Kind::Lukasiewicz: return std::max(a + b - 1.0, 0.0);
        case Kind::Table: break;
    }
    // Bilinear interpolation between the surrounding grid nodes.
    const std::size_t n = grid_points_;
    const double h = 1.0 / static_cast<double>(n - 1);
    auto cell = [&](double v) {
        auto i = static_cast<std::size_t>(v / h);
        return std::min(i, n - 2);
    };
    const std::size_t i = cell(a), j = cell(b);
    const double fa = (a - static_cast<double>(i) * h) / h;
    const double fb = (b - static_cast<double>(j) * h) / h;
    const double v00 = table_[i * n + j], v01 = table_[i * n + j + 1];
    const double v10 = table_[(i + 1) * n + j], v11 = table_[(i + 1) * n + j + 1];
    return v00 * (1 - fa) * (1 - fb) + v10 * fa * (1 - fb) + v01 * (1 - fa) * fb +
           v11 * fa * fb;
}

TNormAxiomReport check_tnorm_axioms(const TNorm& t, double grid_step, double tolerance) {
    TNormAxiomReport report;
    report.grid_step = grid_step;
    report.tolerance = tolerance;
    const std::vector<double> grid = axiom_grid(grid_step);

    for (double x : grid) {
        const double lhs = t.apply(x, 1.0);
        if (std::abs(lhs - x) > tolerance) {
            report.violations.push_back({"identity", x, 1.0, 0.0, lhs, x});
        }
    }
    for (double x : grid) {
        for (double y : grid) {
            const double lhs = t.apply(x, y), rhs = t.apply(y, x);
            if (std::abs(lhs - rhs) > tolerance) {
                report.violations.push_back({"commutativity", x, y, 0.0, lhs, rhs});
            }
        }
    }
    for (double x : grid) {
        for (double y : grid) {
            for (double z : grid) {
                const double lhs = t.apply(t.apply(x, y), z);
                const double rhs = t.apply(x, t.apply(y, z));
                if (std::abs(lhs - rhs) > tolerance) {
                    report.violations.push_back({"associativity", x, y, z, lhs, rhs});
                }
                // monotonicity in the second argument; commutativity makes
                // that enough for both
                if (y <= z && t.apply(x, y) > t.apply(x, z) + tolerance) {
                    report.violations.push_back(
                        {"monotonicity", x, y, z, t.apply(x, y), t.apply(x, z)});
                }
            }
        }
    }
    return report;
}

std::pair<TNorm, TNormAxiomReport> verify_tnorm(const TNorm& t, double grid_step,
                                                double tolerance) {
    TNormAxiomReport report = check_tnorm_axioms(t, grid_step, tolerance);
    TNorm out = t;
    out.verified_ = t.verified_ || report.ok();
    return {out, report};
}

std::optional<double> idempotent_dominance_violation(const TNorm& t, double grid_step) {
    for (double alpha : axiom_grid(grid_step)) {
        if (t.apply(alpha, alpha) < alpha) return alpha;
    }
    return std::nullopt;
}

bool is_idempotent_dominant(const TNorm& t, double grid_step) {
    return !idempotent_dominance_violation(t, grid_step).has_value();
}

}  // namespace pmfix
