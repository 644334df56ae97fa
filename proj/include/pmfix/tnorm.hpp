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
#include <string>
#include <string_view>
#include <vector>

namespace pmfix {

/// Binary operation on [0,1] used to combine probabilities. The three
/// built-ins (min, product, lukasiewicz) are genuine left-continuous
/// t-norms and are constructed pre-verified. Custom operations come in as
/// value tables on a uniform grid with bilinear interpolation between
/// nodes; they stay flagged unverified until an axiom check passes.
class TNorm {
public:
    enum class Kind { Minimum, Product, Lukasiewicz, Table };

    static TNorm minimum();
    static TNorm product();
    static TNorm lukasiewicz();

    /// `values` is row-major on a uniform grid of `grid_points` nodes per
    /// axis including both endpoints (grid_points >= 2). Entry (i, j)
    /// holds the value at (i/(n-1), j/(n-1)).
    static TNorm from_table(std::vector<double> values, std::size_t grid_points);

    /// Resolves "min", "product" or "lukasiewicz".
    static std::optional<TNorm> from_name(std::string_view name);

    /// Throws std::invalid_argument if either input is outside [0, 1].
    double apply(double a, double b) const;

    Kind kind() const { return kind_; }
    std::string_view name() const;

    /// Built-ins are always verified; a table becomes verified through
    /// verify_tnorm below.
    bool verified() const { return verified_; }

private:
    TNorm(Kind kind, bool verified) : kind_(kind), verified_(verified) {}

    Kind kind_;
    bool verified_;
    std::vector<double> table_;
    std::size_t grid_points_ = 0;

    friend std::pair<TNorm, struct TNormAxiomReport> verify_tnorm(const TNorm&, double, double);
};

struct TNormViolation {
    std::string axiom;  // "commutativity" | "associativity" | "monotonicity" | "identity"
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;  // unused for identity/commutativity
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Result of a grid check of the t-norm axioms. The check samples the
/// stated grid only; an empty violation list is evidence, not a proof.
struct TNormAxiomReport {
    double grid_step = 0.0;
    double tolerance = 0.0;
    std::vector<TNormViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks commutativity, associativity, monotonicity and the unit 1 on the
/// grid {0, step, 2*step, ..., 1}. The tolerance absorbs last-ulp rounding
/// in floating-point products and sums.
TNormAxiomReport check_tnorm_axioms(const TNorm& t, double grid_step, double tolerance = 1e-12);

/// Runs the axiom check and returns a copy whose verified flag reflects
/// the outcome, together with the report.
std::pair<TNorm, TNormAxiomReport> verify_tnorm(const TNorm& t, double grid_step,
                                                double tolerance = 1e-12);

/// First grid alpha with t(alpha, alpha) < alpha, if any.
std::optional<double> idempotent_dominance_violation(const TNorm& t, double grid_step);

/// True iff t(alpha, alpha) >= alpha on the whole grid. Holds for min and
/// fails for product and lukasiewicz (witness alpha = 0.5).
bool is_idempotent_dominant(const TNorm& t, double grid_step = 1.0 / 16);

}  // namespace pmfix
