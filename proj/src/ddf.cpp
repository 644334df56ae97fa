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

#include "pmfix/ddf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pmfix {

Ddf::Ddf(std::vector<Breakpoint> raw) {
    for (const auto& bp : raw) {
        if (std::isnan(bp.threshold) || bp.threshold < 0.0) {
            throw std::invalid_argument("ddf threshold must be a real >= 0, got " +
                                        std::to_string(bp.threshold));
        }
        if (!(bp.value >= 0.0 && bp.value <= 1.0)) {
            throw std::invalid_argument("ddf value must lie in [0, 1], got " +
                                        std::to_string(bp.value));
        }
    }
    std::sort(raw.begin(), raw.end(), [](const Breakpoint& a, const Breakpoint& b) {
        if (a.threshold != b.threshold) return a.threshold < b.threshold;
        return a.value < b.value;
    });
    // Keep the upper envelope: strictly increasing thresholds and values.
    // Breakpoints at +infinity are unreachable (the terminal 1 is implicit).
    double running = 0.0;
    for (const auto& bp : raw) {
        if (std::isinf(bp.threshold)) continue;
        if (bp.value <= running) continue;
        if (!pts_.empty() && pts_.back().threshold == bp.threshold) {
            pts_.back().value = bp.value;
        } else {
            pts_.push_back(bp);
        }
        running = bp.value;
    }
}

Ddf Ddf::dirac(double a) {
    if (std::isnan(a) || a < 0.0) {
        throw std::invalid_argument("dirac point must be >= 0, got " + std::to_string(a));
    }
    return Ddf{{{a, 1.0}}};
}

Ddf Ddf::plateau(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("plateau level must lie in [0, 1], got " +
                                    std::to_string(beta));
    }
    return Ddf{{{0.0, 1.0 - beta}}};
}

Ddf Ddf::h0() { return dirac(0.0); }

double Ddf::eval(double t) const {
    if (std::isinf(t) && t > 0.0) return 1.0;
    auto it = std::lower_bound(pts_.begin(), pts_.end(), t,
                               [](const Breakpoint& bp, double x) { return bp.threshold < x; });
    if (it == pts_.begin()) return 0.0;
    return std::prev(it)->value;
}

double Ddf::eval_above(double t) const {
    if (std::isinf(t) && t > 0.0) return 1.0;
    auto it = std::upper_bound(pts_.begin(), pts_.end(), t,
                               [](double x, const Breakpoint& bp) { return x < bp.threshold; });
    if (it == pts_.begin()) return 0.0;
    return std::prev(it)->value;
}

bool Ddf::is_h0(double tol) const { return eval_above(0.0) >= 1.0 - tol; }

std::vector<double> Ddf::thresholds() const {
    std::vector<double> out;
    out.reserve(pts_.size());
    for (const auto& bp : pts_) out.push_back(bp.threshold);
    return out;
}

std::vector<double> merged_thresholds(const Ddf& f, const Ddf& g) {
    std::vector<double> out = f.thresholds();
    for (const auto& bp : g.breakpoints()) out.push_back(bp.threshold);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool geq(const Ddf& f, const Ddf& g) { return geq_within(f, g, 0.0); }

bool geq_within(const Ddf& f, const Ddf& g, double tol) {
    // Both functions are constant between merged thresholds, 0 below the
    // first and 1 at +infinity, so checking just above each threshold is a
    // complete decision procedure.
    for (double t : merged_thresholds(f, g)) {
        if (f.eval_above(t) < g.eval_above(t) - tol) return false;
    }
    return true;
}

bool approx_equal(const Ddf& f, const Ddf& g, double tol) {
    if (tol == 0.0) return f == g;
    return geq_within(f, g, tol) && geq_within(g, f, tol);
}

}  // namespace pmfix
