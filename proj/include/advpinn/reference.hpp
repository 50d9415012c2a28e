// Copyright 2026 The advpinn Authors.
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

#include "advpinn/problem.hpp"

#include <string>
#include <vector>

namespace advpinn {

enum class OracleMethod { exact, characteristics_rk4, upwind_fd };

std::string to_string(OracleMethod m);
OracleMethod parse_oracle_method(const std::string& s);

/// Values on a tensor grid, stored time-major: value(j, i) is at (t[j], x[i]).
struct ReferenceSolution {
    OracleMethod method = OracleMethod::exact;
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> values;
    double dx = 0.0;
    double dt = 0.0;     ///< largest time step taken (upwind-fd) or the ODE step (rk4)
    double cfl = 0.0;
    long steps = 0;      ///< time steps taken (upwind-fd)

    double value(std::size_t j, std::size_t i) const { return values[j * x.size() + i]; }
    std::vector<double> slice(std::size_t j) const;
    /// Row of t equal to `time` (exactly), or throws.
    std::size_t time_index(double time) const;
    /// Linear interpolation in x on row j.
    double at(std::size_t j, double xq) const;
};

/// Solution of a constant-speed problem by exact characteristic backtrace.
/// Throws OracleError for other speeds.
double exact_constant_speed(const AdvectionProblem& problem, double x, double t);

/// Foot of the characteristic through (x, t).
struct Landing {
    double x = 0.0;
    double t = 0.0;
    bool on_boundary = false;
    Side side = Side::left;
};

inline constexpr long kMaxOdeSteps = 10'000'000;

/// Classical RK4 backtrace of dX/ds = a(X, s) from s = t; stops at s = 0 or where X leaves the
/// domain (located by bisection within the last step). Throws OracleError for u-dependent speeds.
Landing backtrace_rk4(const AdvectionProblem& problem, double x, double t, double dt_ode);
double characteristics_rk4(const AdvectionProblem& problem, double x, double t, double dt_ode);

/// Data carried by a characteristic that lands at `foot`. An inflow side without a declared
/// condition keeps its initial value.
double landing_value(const AdvectionProblem& problem, const Landing& foot);

/// First-order non-conservative upwind scheme on x_min + i*dx, with dt = cfl*dx/max|a| per step
/// (shortened to hit every output time). Inflow sides with a declared condition inject it; other
/// sides extrapolate with zero gradient.
ReferenceSolution upwind_fd(const AdvectionProblem& problem, double dx, double cfl, const std::vector<double>& times);

/// Exact or RK4 oracle evaluated on a grid.
ReferenceSolution sample_reference(const AdvectionProblem& problem, OracleMethod method, const std::vector<double>& xs,
                                   const std::vector<double>& times, double dt_ode = 1e-3);

/// Oracle with the default method for the problem: exact for constant speed, RK4 for a(x,t),
/// upwind FD for u-dependent speeds.
OracleMethod default_oracle(const AdvectionProblem& problem);

/// x where the piecewise-linear profile crosses `level`.
std::vector<double> level_crossings(const std::vector<double>& x, const std::vector<double>& v, double level = 0.5);

struct SelfConvergence {
    double dx = 0.0;
    std::vector<double> coarse, fine; ///< crossing locations at dx and dx/2
    double max_shift = 0.0;           ///< +inf when the crossing counts differ
};

/// Upwind FD at dx and dx/2 compared through their level crossings at `time`.
SelfConvergence fd_self_convergence(const AdvectionProblem& problem, double dx, double cfl, double time,
                                    double level = 0.5);

/// dx * sum |a - b| over a common grid row.
double l1_distance(const std::vector<double>& a, const std::vector<double>& b, double dx);

/// Total variation of the initial and boundary data including the corner jumps.
double data_total_variation(const AdvectionProblem& problem);

/// CSV of (t, x, value) rows preceded by a one-line JSON metadata comment.
std::string reference_csv(const ReferenceSolution& ref);

} // namespace advpinn
