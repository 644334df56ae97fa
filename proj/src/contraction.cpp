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

#include "pmfix/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "pmfix/parallel.hpp"

namespace pmfix {

SelfMap::SelfMap(std::vector<std::size_t> images) : images_(std::move(images)) {
    if (images_.empty()) throw std::invalid_argument("self-map must cover at least one point");
    for (std::size_t img : images_) {
        if (img >= images_.size()) {
            throw std::invalid_argument("self-map image out of range (map not closed)");
        }
    }
}

SelfMap SelfMap::from_pairs(const PMSpace& space,
                            const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<std::size_t> images(space.size(), space.size());
    for (const auto& [from, to] : pairs) {
        const std::size_t i = space.require_index(from);
        const std::size_t j = space.require_index(to);
        if (images[i] != space.size() && images[i] != j) {
            throw std::invalid_argument("conflicting images for point " + from);
        }
        images[i] = j;
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i] == space.size()) {
            throw std::invalid_argument("self-map misses point " + space.points()[i]);
        }
    }
    return SelfMap(std::move(images));
}

std::size_t SelfMap::apply(std::size_t i) const {
    if (i >= images_.size()) throw std::invalid_argument("self-map input out of range");
    return images_[i];
}

SelfMap SelfMap::power(std::size_t m) const {
    std::vector<std::size_t> out(images_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t x = i;
        for (std::size_t step = 0; step < m; ++step) x = images_[x];
        out[i] = x;
    }
    return SelfMap(std::move(out));
}

std::string_view to_string(ContractionClass cls) {
    switch (cls) {
        case ContractionClass::TSR: return "TSR";
        case ContractionClass::TSR_P: return "TSR_P";
        case ContractionClass::B: return "B";
        case ContractionClass::H: return "H";
    }
    return "?";
}

std::optional<ContractionClass> contraction_class_from_name(std::string_view name) {
    if (name == "TSR") return ContractionClass::TSR;
    if (name == "TSR_P" || name == "TSR-P") return ContractionClass::TSR_P;
    if (name == "B") return ContractionClass::B;
    if (name == "H") return ContractionClass::H;
    return std::nullopt;
}

bool ContractionReport::no_case_applied() const {
    return max_defect == -std::numeric_limits<double>::infinity();
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct DefectMax {
    double defect = kNegInf;
    std::size_t x = 0;
    std::size_t y = 0;
    double t = 0.0;
    int m = -1;

    void consider(double d, std::size_t px, std::size_t py, double pt, int pm) {
        if (d > defect) {
            defect = d;
            x = px;
            y = py;
            t = pt;
            m = pm;
        }
    }
};

struct CheckContext {
    const PMSpace& space;
    const SelfMap& f;
    double k;
    std::span<const double> t_grid;
    std::vector<std::size_t> pts;  // the points taking part in the check
};

CheckContext make_context(const PMSpace& space, const SelfMap& f, double k,
                          std::span<const double> t_grid, std::span<const std::size_t> subset) {
    if (f.size() != space.size()) {
        throw std::invalid_argument("self-map and space sizes differ");
    }
    if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("k must lie in (0, 1)");
    if (t_grid.empty()) throw std::invalid_argument("t grid must be non-empty");
    for (double t : t_grid) {
        if (!(t > 0.0) || std::isinf(t)) {
            throw std::invalid_argument("t grid entries must be positive finite reals");
        }
    }
    CheckContext ctx{space, f, k, t_grid, {}};
    if (subset.empty()) {
        ctx.pts.resize(space.size());
        for (std::size_t i = 0; i < space.size(); ++i) ctx.pts[i] = i;
    } else {
        for (std::size_t i : subset) {
            if (i >= space.size()) throw std::invalid_argument("subset index out of range");
        }
        ctx.pts.assign(subset.begin(), subset.end());
    }
    return ctx;
}

void push_scaled(std::vector<double>& probes, const Ddf& d, double divisor) {
    for (const auto& bp : d.breakpoints()) probes.push_back(bp.threshold / divisor);
}

void finish_probes(std::vector<double>& probes) {
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
}

/// Runs `per_pair(max, x, y)` over every ordered pair of context points and
/// returns the deterministic maximal defect (ties resolved toward the
/// lexicographically first pair).
template <class PerPair>
DefectMax scan_pairs(const CheckContext& ctx, PerPair per_pair) {
    const std::size_t n = ctx.pts.size();
    auto chunk = [&](std::size_t begin, std::size_t end) {
        DefectMax best;
        for (std::size_t flat = begin; flat < end; ++flat) {
            const std::size_t x = ctx.pts[flat / n];
            const std::size_t y = ctx.pts[flat % n];
            // x == y holds trivially for every class (defect <= 0, and the
            // H trigger always fires on h0); skipping it keeps negative
            // margins and vacuity reports informative.
            if (x == y) continue;
            per_pair(best, x, y);
        }
        return best;
    };
    return detail::parallel_chunked<DefectMax>(
        n * n, DefectMax{}, chunk, [](DefectMax& acc, const DefectMax& part) {
            if (part.defect > acc.defect) acc = part;
        });
}

ContractionReport finish_report(ContractionClass cls, const CheckContext& ctx, double tolerance,
                                std::optional<int> m_max, DefectMax best,
                                std::span<const std::size_t> subset) {
    ContractionReport report;
    report.cls = cls;
    report.k = ctx.k;
    report.tolerance = tolerance;
    report.max_defect = best.defect;
    report.holds = best.defect <= tolerance;
    report.t_grid.assign(ctx.t_grid.begin(), ctx.t_grid.end());
    report.m_max = m_max;
    report.pair_subset.assign(subset.begin(), subset.end());
    if (best.defect != kNegInf) {
        ContractionWitness w;
        w.x = best.x;
        w.y = best.y;
        w.t = best.t;
        if (best.m >= 0) w.m = best.m;
        report.witness = w;
    }
    return report;
}

DefectMax tsr_scan(const CheckContext& ctx, int m_lo, int m_hi) {
    return scan_pairs(ctx, [&](DefectMax& best, std::size_t x, std::size_t y) {
        const Ddf& f1 = ctx.space.distance(x, y);
        const Ddf& f2 = ctx.space.distance(ctx.f.apply(x), ctx.f.apply(y));
        double km = 1.0;
        for (int m = 0; m < m_lo; ++m) km *= ctx.k;
        for (int m = m_lo; m <= m_hi; ++m, km *= ctx.k) {
            const double km1 = km * ctx.k;
            std::vector<double> probes{0.0};
            probes.insert(probes.end(), ctx.t_grid.begin(), ctx.t_grid.end());
            push_scaled(probes, f1, km);
            push_scaled(probes, f2, km1);
            finish_probes(probes);
            const int wm = m_hi > 0 ? m : -1;
            for (double p : probes) {
                best.consider((1.0 - f2.eval_above(km1 * p)) - ctx.k * (1.0 - f1.eval_above(km * p)),
                              x, y, p, wm);
                if (p > 0.0) {
                    best.consider((1.0 - f2.eval(km1 * p)) - ctx.k * (1.0 - f1.eval(km * p)), x, y,
                                  p, wm);
                }
            }
        }
    });
}

}  // namespace

ContractionReport tsr_defect(const PMSpace& space, const SelfMap& f, double k,
                             std::span<const double> t_grid, double tolerance,
                             std::span<const std::size_t> subset) {
    const CheckContext ctx = make_context(space, f, k, t_grid, subset);
    return finish_report(ContractionClass::TSR, ctx, tolerance, std::nullopt, tsr_scan(ctx, 0, 0),
                         subset);
}

ContractionReport tsr_p_defect(const PMSpace& space, const SelfMap& f, double k,
                               std::span<const double> t_grid, int m_max, double tolerance,
                               std::span<const std::size_t> subset) {
    if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
    const CheckContext ctx = make_context(space, f, k, t_grid, subset);
    return finish_report(ContractionClass::TSR_P, ctx, tolerance, m_max,
                         tsr_scan(ctx, 0, m_max), subset);
}

ContractionReport b_contraction_check(const PMSpace& space, const SelfMap& f, double k,
                                      std::span<const double> t_grid, double tolerance,
                                      std::span<const std::size_t> subset) {
    const CheckContext ctx = make_context(space, f, k, t_grid, subset);
    DefectMax best = scan_pairs(ctx, [&](DefectMax& b, std::size_t x, std::size_t y) {
        const Ddf& f1 = ctx.space.distance(x, y);
        const Ddf& f2 = ctx.space.distance(ctx.f.apply(x), ctx.f.apply(y));
        std::vector<double> probes{0.0};
        probes.insert(probes.end(), ctx.t_grid.begin(), ctx.t_grid.end());
        push_scaled(probes, f1, 1.0);
        push_scaled(probes, f2, ctx.k);
        finish_probes(probes);
        for (double p : probes) {
            b.consider(f1.eval_above(p) - f2.eval_above(ctx.k * p), x, y, p, -1);
            if (p > 0.0) b.consider(f1.eval(p) - f2.eval(ctx.k * p), x, y, p, -1);
        }
    });
    return finish_report(ContractionClass::B, ctx, tolerance, std::nullopt, best, subset);
}

ContractionReport h_contraction_check(const PMSpace& space, const SelfMap& f, double k,
                                      std::span<const double> t_grid, double tolerance,
                                      std::span<const std::size_t> subset) {
    const CheckContext ctx = make_context(space, f, k, t_grid, subset);
    DefectMax best = scan_pairs(ctx, [&](DefectMax& b, std::size_t x, std::size_t y) {
        const Ddf& f1 = ctx.space.distance(x, y);
        const Ddf& f2 = ctx.space.distance(ctx.f.apply(x), ctx.f.apply(y));
        std::vector<double> probes(ctx.t_grid.begin(), ctx.t_grid.end());
        push_scaled(probes, f1, 1.0);
        push_scaled(probes, f2, ctx.k);
        // crossings of the trigger F1(t) > 1 - t and of the bound 1 - k t
        for (const auto& bp : f1.breakpoints()) probes.push_back(1.0 - bp.value);
        for (const auto& bp : f2.breakpoints()) probes.push_back((1.0 - bp.value) / ctx.k);
        std::erase_if(probes, [](double p) { return !(p > 0.0) || std::isinf(p); });
        finish_probes(probes);
        for (double p : probes) {
            if (f1.eval(p) > 1.0 - p) {
                b.consider((1.0 - ctx.k * p) - f2.eval(ctx.k * p), x, y, p, -1);
            }
        }
    });
    return finish_report(ContractionClass::H, ctx, tolerance, std::nullopt, best, subset);
}

ContractionReport contraction_check(const PMSpace& space, const SelfMap& f, ContractionClass cls,
                                    double k, std::span<const double> t_grid, double tolerance,
                                    int m_max, std::span<const std::size_t> subset) {
    switch (cls) {
        case ContractionClass::TSR: return tsr_defect(space, f, k, t_grid, tolerance, subset);
        case ContractionClass::TSR_P:
            return tsr_p_defect(space, f, k, t_grid, m_max, tolerance, subset);
        case ContractionClass::B:
            return b_contraction_check(space, f, k, t_grid, tolerance, subset);
        case ContractionClass::H:
            return h_contraction_check(space, f, k, t_grid, tolerance, subset);
    }
    throw std::invalid_argument("unknown contraction class");
}

namespace {

/// Coarse scan of holds(k) over k = i/32 followed by bisection. The scan
/// guards against non-monotone profiles, which are reported instead of
/// silently bisected.
template <class Holds>
MinKResult scan_and_bisect(Holds holds_at, double k_tolerance) {
    if (!(k_tolerance > 0.0)) throw std::invalid_argument("k tolerance must be positive");
    MinKResult result;
    result.k_tolerance = k_tolerance;
    constexpr int kScanSteps = 32;
    std::optional<std::size_t> first_true;
    for (int i = 1; i < kScanSteps; ++i) {
        const double k = static_cast<double>(i) / kScanSteps;
        const bool h = holds_at(k);
        if (h && !first_true) first_true = result.scan.size();
        if (!h && first_true) result.monotone = false;
        result.scan.push_back({k, h});
    }
    if (!result.monotone) return result;  // reported, not bisected

    double lo, hi;
    if (!first_true) {
        const double near_one = 1.0 - std::ldexp(1.0, -20);
        if (!holds_at(near_one)) return result;  // fails all the way to 1; k stays empty
        lo = result.scan.back().k;
        hi = near_one;
    } else if (*first_true == 0) {
        result.k = result.scan.front().k;  // holds everywhere probed
        return result;
    } else {
        lo = result.scan[*first_true - 1].k;
        hi = result.scan[*first_true].k;
    }
    while (hi - lo > k_tolerance) {
        const double mid = 0.5 * (lo + hi);
        (holds_at(mid) ? hi : lo) = mid;
    }
    result.k = hi;
    return result;
}

}  // namespace

MinKResult estimate_min_k(const PMSpace& space, const SelfMap& f, ContractionClass cls,
                          std::span<const double> t_grid, double k_tolerance,
                          double defect_tolerance, int m_max,
                          std::span<const std::size_t> subset) {
    return scan_and_bisect(
        [&](double k) {
            return contraction_check(space, f, cls, k, t_grid, defect_tolerance, m_max, subset)
                .holds;
        },
        k_tolerance);
}

std::vector<PerTMinK> estimate_min_k_per_t(const PMSpace& space, const SelfMap& f,
                                           ContractionClass cls, std::span<const double> t_grid,
                                           double k_tolerance, double defect_tolerance,
                                           int m_max) {
    if (f.size() != space.size()) throw std::invalid_argument("self-map and space sizes differ");
    // The single-t condition evaluated at exactly this t, with no grid
    // augmentation; this is the diagnostic view, not the uniform check.
    auto holds_single = [&](double k, double t) {
        for (std::size_t x = 0; x < space.size(); ++x) {
            for (std::size_t y = 0; y < space.size(); ++y) {
                const Ddf& f1 = space.distance(x, y);
                const Ddf& f2 = space.distance(f.apply(x), f.apply(y));
                double defect = kNegInf;
                switch (cls) {
                    case ContractionClass::TSR:
                        defect = (1.0 - f2.eval(k * t)) - k * (1.0 - f1.eval(t));
                        break;
                    case ContractionClass::TSR_P: {
                        double km = 1.0;
                        for (int m = 0; m <= m_max; ++m, km *= k) {
                            defect = std::max(defect, (1.0 - f2.eval(km * k * t)) -
                                                          k * (1.0 - f1.eval(km * t)));
                        }
                        break;
                    }
                    case ContractionClass::B:
                        defect = f1.eval(t) - f2.eval(k * t);
                        break;
                    case ContractionClass::H:
                        if (f1.eval(t) > 1.0 - t) defect = (1.0 - k * t) - f2.eval(k * t);
                        break;
                }
                if (defect > defect_tolerance) return false;
            }
        }
        return true;
    };

    std::vector<PerTMinK> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t > 0.0) || std::isinf(t)) {
            throw std::invalid_argument("t grid entries must be positive finite reals");
        }
        const MinKResult r = scan_and_bisect([&](double k) { return holds_single(k, t); },
                                             k_tolerance);
        out.push_back({t, r.k});
    }
    return out;
}

}  // namespace pmfix
