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

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "pmfix/ddf.hpp"
#include "pmfix/tnorm.hpp"

namespace pmfix {

enum class TriangleKind { SupConvolution, Pointwise };

/// Sup-convolution of two step functions under a monotone t-norm:
///   (F, G) -> t |-> sup { T(F(t1), G(t2)) : t1 + t2 = t, t1, t2 >= 0 }.
/// On step functions the supremum is attained pair-by-pair, so the result
/// is exactly the upper envelope of one step per breakpoint pair, with
/// threshold a_i + b_j and value T(v_i, w_j). Boundary splits contribute
/// nothing because F(0) = G(0) = 0.
Ddf tau_star(const TNorm& t, const Ddf& f, const Ddf& g);

/// Pointwise combination: t |-> T(F(t), G(t)), exact on the merged
/// threshold partition.
Ddf tau_pointwise(const TNorm& t, const Ddf& f, const Ddf& g);

/// How a space combines distances in its triangle axiom: the kind of
/// triangle function plus the t-norm it is driven by.
struct TriangleMode {
    TriangleKind kind = TriangleKind::SupConvolution;
    TNorm tnorm = TNorm::minimum();

    Ddf combine(const Ddf& f, const Ddf& g) const;

    static std::optional<TriangleKind> kind_from_name(std::string_view name);
    std::string_view kind_name() const;
};

struct TriangleViolation {
    std::string axiom;  // "identity" | "commutativity" | "monotonicity" | "associativity"
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;  // meaningful for associativity/monotonicity only
    std::string detail;
};

struct TriangleAxiomReport {
    double tolerance = 0.0;
    std::size_t sample_count = 0;
    std::vector<TriangleViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Verifies identity (h0), commutativity, monotonicity and associativity
/// of the mode's triangle function over a finite sample family, exactly on
/// the step-function representation when tol = 0.
TriangleAxiomReport check_triangle_axioms(const TriangleMode& mode, std::span<const Ddf> samples,
                                          double tolerance = 0.0);

}  // namespace pmfix
