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
#include <string_view>
#include <vector>

#include "pmfix/space.hpp"

namespace pmfix {

/// Total self-map of a finite point set, stored as an image table.
class SelfMap {
public:
    /// images[i] is the index of the image of point i; every image must be
    /// a valid index (closure over the point set).
    explicit SelfMap(std::vector<std::size_t> images);

    /// Builds from (from, to) name pairs; every point of the space must be
    /// mapped exactly once and every image must be a point of the space.
    static SelfMap from_pairs(const PMSpace& space,
                              const std::vector<std::pair<std::string, std::string>>& pairs);

    std::size_t size() const { return images_.size(); }
    std::size_t apply(std::size_t i) const;

    /// m-fold composition; power(0) is the identity.
    SelfMap power(std::size_t m) const;

    const std::vector<std::size_t>& images() const { return images_; }

private:
    std::vector<std::size_t> images_;
};

/// The four contraction conditions checked by this library, writing F1 for
/// distance(x, y) and F2 for distance(f(x), f(y)):
///
///   TSR    1 - F2(k t)         <= k (1 - F1(t))            for all t > 0
///   TSR_P  1 - F2(k^{m+1} t)   <= k (1 - F1(k^m t))        for all t > 0, m = 0..m_max
///   B      F2(k t)             >= F1(t)                    for all t > 0
///   H      F2(k t)             >= 1 - k t   whenever F1(t) > 1 - t, per grid t
///
/// TSR, TSR_P and B are decided exactly over all t > 0: their defects are
/// piecewise constant in t, so the supremum is attained on the grid
/// augmented with every breakpoint threshold (and thresholds divided by
/// the appropriate power of k), probing both at and just above each point.
/// H mixes a step function with the affine bound 1 - k t, so it is checked
/// at the augmented grid points themselves.
enum class ContractionClass { TSR, TSR_P, B, H };

std::string_view to_string(ContractionClass cls);
std::optional<ContractionClass> contraction_class_from_name(std::string_view name);

struct ContractionWitness {
    std::size_t x = 0;
    std::size_t y = 0;
    double t = 0.0;
    std::optional<int> m;  // TSR_P only
};

struct ContractionReport {
    ContractionClass cls = ContractionClass::TSR;
    double k = 0.0;
    double tolerance = 0.0;
    /// Largest defect over all checked cases; -infinity when no case
    /// applied (an H check whose trigger never fired).
    double max_defect = 0.0;
    bool holds = false;  // max_defect <= tolerance
    std::optional<ContractionWitness> witness;  // a case attaining max_defect
    std::vector<double> t_grid;                 // the grid before augmentation
    std::optional<int> m_max;                   // TSR_P only
    std::vector<std::size_t> pair_subset;       // empty means all points

    bool no_case_applied() const;
};

ContractionReport tsr_defect(const PMSpace& space, const SelfMap& f, double k,
                             std::span<const double> t_grid, double tolerance = 0.0,
                             std::span<const std::size_t> subset = {});

ContractionReport tsr_p_defect(const PMSpace& space, const SelfMap& f, double k,
                               std::span<const double> t_grid, int m_max = 4,
                               double tolerance = 0.0, std::span<const std::size_t> subset = {});

ContractionReport b_contraction_check(const PMSpace& space, const SelfMap& f, double k,
                                      std::span<const double> t_grid, double tolerance = 0.0,
                                      std::span<const std::size_t> subset = {});

ContractionReport h_contraction_check(const PMSpace& space, const SelfMap& f, double k,
                                      std::span<const double> t_grid, double tolerance = 0.0,
                                      std::span<const std::size_t> subset = {});

/// Runs the check named by `cls` with the class-appropriate extras.
ContractionReport contraction_check(const PMSpace& space, const SelfMap& f, ContractionClass cls,
                                    double k, std::span<const double> t_grid,
                                    double tolerance = 0.0, int m_max = 4,
                                    std::span<const std::size_t> subset = {});

struct MinKScanPoint {
    double k = 0.0;
    bool holds = false;
};

struct MinKResult {
    std::optional<double> k;  // none when even k near 1 fails
    bool monotone = true;     // the holds(k) profile was false* true* on the scan
    std::vector<MinKScanPoint> scan;
    double k_tolerance = 0.0;
};

/// Smallest k in (0, 1) for which the class condition holds, found by a
/// coarse scan followed by bisection. A non-monotone scan profile is
/// reported instead of silently bisected; when even the smallest scanned k
/// holds, that smallest probed k is returned.
MinKResult estimate_min_k(const PMSpace& space, const SelfMap& f, ContractionClass cls,
                          std::span<const double> t_grid, double k_tolerance = 1e-6,
                          double defect_tolerance = 0.0, int m_max = 4,
                          std::span<const std::size_t> subset = {});

struct PerTMinK {
    double t = 0.0;
    std::optional<double> k;
};

/// Per-t variant for TSR-style diagnostics: for each grid t alone, the
/// smallest k making the single-t condition hold across all pairs.
std::vector<PerTMinK> estimate_min_k_per_t(const PMSpace& space, const SelfMap& f,
                                           ContractionClass cls, std::span<const double> t_grid,
                                           double k_tolerance = 1e-6,
                                           double defect_tolerance = 0.0, int m_max = 4);

}  // namespace pmfix
