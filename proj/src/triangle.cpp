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

#include "pmfix/triangle.hpp"

namespace pmfix {

Ddf tau_star(const TNorm& t, const Ddf& f, const Ddf& g) {
    std::vector<Breakpoint> steps;
    steps.reserve(f.breakpoints().size() * g.breakpoints().size());
    for (const auto& a : f.breakpoints()) {
        for (const auto& b : g.breakpoints()) {
            steps.push_back({a.threshold + b.threshold, t.apply(a.value, b.value)});
        }
    }
    return Ddf(std::move(steps));
}

Ddf tau_pointwise(const TNorm& t, const Ddf& f, const Ddf& g) {
    std::vector<double> probes = merged_thresholds(f, g);
    if (probes.empty() || probes.front() != 0.0) probes.insert(probes.begin(), 0.0);
    std::vector<Breakpoint> steps;
    steps.reserve(probes.size());
    for (double c : probes) {
        steps.push_back({c, t.apply(f.eval_above(c), g.eval_above(c))});
    }
    return Ddf(std::move(steps));
}

Ddf TriangleMode::combine(const Ddf& f, const Ddf& g) const {
    return kind == TriangleKind::SupConvolution ? tau_star(tnorm, f, g)
                                                : tau_pointwise(tnorm, f, g);
}

std::optional<TriangleKind> TriangleMode::kind_from_name(std::string_view name) {
    if (name == "tau_star") return TriangleKind::SupConvolution;
    if (name == "tau_pointwise") return TriangleKind::Pointwise;
    return std::nullopt;
}

std::string_view TriangleMode::kind_name() const {
    return kind == TriangleKind::SupConvolution ? "tau_star" : "tau_pointwise";
}

TriangleAxiomReport check_triangle_axioms(const TriangleMode& mode, std::span<const Ddf> samples,
                                          double tolerance) {
    TriangleAxiomReport report;
    report.tolerance = tolerance;
    report.sample_count = samples.size();
    const Ddf unit = Ddf::h0();
    const std::size_t n = samples.size();

    for (std::size_t i = 0; i < n; ++i) {
        if (!approx_equal(mode.combine(unit, samples[i]), samples[i], tolerance)) {
            report.violations.push_back({"identity", i, 0, 0, "tau(h0, F) != F"});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!approx_equal(mode.combine(samples[i], samples[j]),
                              mode.combine(samples[j], samples[i]), tolerance)) {
                report.violations.push_back({"commutativity", i, j, 0, "tau(F, G) != tau(G, F)"});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (geq(samples[j], samples[k]) &&
                    !geq_within(mode.combine(samples[i], samples[j]),
                                mode.combine(samples[i], samples[k]), tolerance)) {
                    report.violations.push_back(
                        {"monotonicity", i, j, k, "G >= H but tau(F, G) !>= tau(F, H)"});
                }
                if (!approx_equal(mode.combine(samples[i], mode.combine(samples[j], samples[k])),
                                  mode.combine(mode.combine(samples[i], samples[j]), samples[k]),
                                  tolerance)) {
                    report.violations.push_back(
                        {"associativity", i, j, k, "tau(F, tau(G, H)) != tau(tau(F, G), H)"});
                }
            }
        }
    }
    return report;
}

}  // namespace pmfix
