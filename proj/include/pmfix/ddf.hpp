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

#include <limits>
#include <vector>

namespace pmfix {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// One step of a distance distribution function: the function takes the
/// given value for arguments strictly above the threshold (until the next
/// breakpoint takes over).
struct Breakpoint {
    double threshold = 0.0;
    double value = 0.0;

    bool operator==(const Breakpoint&) const = default;
};

/// A distance distribution function: left-continuous, non-decreasing,
/// 0 at every t <= 0 and 1 at +infinity, represented exactly as a step
/// function with finitely many breakpoints.
///
/// Canonical form: thresholds strictly increasing, values strictly
/// increasing, no zero values, no breakpoints at +infinity (the terminal
/// value 1 at +infinity is implicit). Two Ddf compare equal iff they are
/// pointwise equal, so equality is plain structural comparison.
///
/// Values are immutable after construction and safe to share across
/// threads.
class Ddf {
public:
    /// The function that is 0 everywhere finite and 1 only at +infinity.
    Ddf() = default;

    /// Canonicalizes an arbitrary breakpoint list. Throws
    /// std::invalid_argument on negative or NaN thresholds and on values
    /// outside [0, 1].
    explicit Ddf(std::vector<Breakpoint> raw);

    /// Unit step just after `a`: 0 on [-inf, a], 1 on (a, inf].
    /// `a` must be >= 0 (or +infinity, giving the minimal element).
    static Ddf dirac(double a);

    /// Constant 1-beta on (0, inf), 1 at +infinity. plateau(0) is the
    /// identity element h0; plateau(1) is the minimal element.
    static Ddf plateau(double beta);

    /// The identity element: 1 on (0, inf].
    static Ddf h0();

    /// Left-continuous evaluation: max value over breakpoints with
    /// threshold < t, 0 if there is none, 1 at t = +infinity.
    double eval(double t) const;

    /// Value just above t, i.e. the limit of eval from the right: max
    /// value over breakpoints with threshold <= t.
    double eval_above(double t) const;

    /// True iff eval(t) >= 1 - tol for every t > 0. Decided exactly from
    /// the value just above 0 (the function is non-decreasing).
    bool is_h0(double tol = 0.0) const;

    const std::vector<Breakpoint>& breakpoints() const { return pts_; }
    std::vector<double> thresholds() const;

    bool operator==(const Ddf&) const = default;

private:
    std::vector<Breakpoint> pts_;
};

/// Pointwise order: true iff f(t) >= g(t) for every t. Decided exactly by
/// comparing just above every threshold of either function.
bool geq(const Ddf& f, const Ddf& g);

/// Relaxed order: f(t) >= g(t) - tol everywhere.
bool geq_within(const Ddf& f, const Ddf& g, double tol);

/// |f(t) - g(t)| <= tol everywhere. With tol = 0 this coincides with
/// structural equality of canonical forms.
bool approx_equal(const Ddf& f, const Ddf& g, double tol);

/// Sorted union of the two threshold sets.
std::vector<double> merged_thresholds(const Ddf& f, const Ddf& g);

}  // namespace pmfix
