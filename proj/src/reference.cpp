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


#include "advpinn/reference.hpp"

#include "advpinn/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace advpinn {

std::string to_string(OracleMethod m) {
    switch (m) {
    case OracleMethod::exact: return "exact";
    case OracleMethod::characteristics_rk4: return "characteristics-rk4";
    case OracleMethod::upwind_fd: return "upwind-fd";
    }
    return "exact";
}

OracleMethod parse_oracle_method(const std::string& s) {
    for (auto m : {OracleMethod::exact, OracleMethod::characteristics_rk4, OracleMethod::upwind_fd})
        if (s == to_string(m))
            return m;
    throw ConfigError("unknown oracle method '" + s + "' (expected exact, characteristics-rk4 or upwind-fd)");
}

std::vector<double> ReferenceSolution::slice(std::size_t j) const {
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(j * x.size());
    return {first, first + static_cast<std::ptrdiff_t>(x.size())};
}

std::size_t ReferenceSolution::time_index(double time) const {
    for (std::size_t j = 0; j < t.size(); ++j)
        if (t[j] == time)
            return j;
    throw OracleError("reference has no row at t = " + format_double(time));
}

double ReferenceSolution::at(std::size_t j, double xq) const {
    if (x.size() == 1)
        return value(j, 0);
    const auto it = std::upper_bound(x.begin(), x.end(), xq);
    if (it == x.begin())
        return value(j, 0);
    if (it == x.end())
        return value(j, x.size() - 1);
    const auto i = static_cast<std::size_t>(it - x.begin());
    const double w = (xq - x[i - 1]) / (x[i] - x[i - 1]);
    return (1.0 - w) * value(j, i - 1) + w * value(j, i);
}

double landing_value(const AdvectionProblem& problem, const Landing& foot) {
    if (!foot.on_boundary)
        return problem.ic(foot.x);
    const BoundaryCondition* bc = problem.bc_on(foot.side);
    if (!bc)
        return problem.ic(problem.side_x(foot.side));
    if (bc->type == BoundaryCondition::Type::robin && bc->beta != 0.0)
        throw OracleError("characteristic oracles support Dirichlet boundary data only");
    const double g = bc->data(foot.t);
    return bc->type == BoundaryCondition::Type::robin ? g / bc->alpha : g;
}

double exact_constant_speed(const AdvectionProblem& problem, double x, double t) {
    if (problem.speed.kind != SpeedSpec::Kind::constant)
        throw OracleError("exact solution needs a constant speed");
    const double a = problem.speed(0.0, 0.0, 0.0);
    const double foot = x - a * t;
    if (a == 0.0 || (foot >= problem.x_min && foot <= problem.x_max))
        return problem.ic(a == 0.0 ? x : foot);
    const Side side = a > 0.0 ? Side::left : Side::right;
    const double tb = t - (x - problem.side_x(side)) / a;
    if (tb < 0.0)
        throw OracleError("characteristic exits domain");
    return landing_value(problem, {problem.side_x(side), tb, true, side});
}

namespace {

double rk4_back(const SpeedSpec& a, double x, double s, double h) {
    const double k1 = a(x, s, 0.0);
    const double k2 = a(x - 0.5 * h * k1, s - 0.5 * h, 0.0);
    const double k3 = a(x - 0.5 * h * k2, s - 0.5 * h, 0.0);
    const double k4 = a(x - h * k3, s - h, 0.0);
    return x - h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

Landing backtrace_rk4(const AdvectionProblem& problem, double x, double t, double dt_ode) {
    if (problem.speed.depends_on_u())
        throw OracleError("characteristic backtrace needs a speed independent of u");
    if (!(dt_ode > 0.0))
        throw OracleError("ODE step must be > 0");
    if (x < problem.x_min || x > problem.x_max || t < 0.0)
        throw OracleError("backtrace start outside the domain");
    if (t == 0.0)
        return {x, 0.0, false, Side::left};
    const double nsteps = std::ceil(t / dt_ode);
    if (nsteps > static_cast<double>(kMaxOdeSteps))
        throw OracleError("characteristic backtrace needs more than 1e7 steps");
    const auto n = static_cast<long>(nsteps);
    const double h = t / static_cast<double>(n);
    const SpeedSpec& a = problem.speed;
    auto inside = [&](double v) { return v >= problem.x_min && v <= problem.x_max; };
    double X = x;
    for (long k = 0; k < n; ++k) {
        const double s = t - static_cast<double>(k) * h;
        const double next = rk4_back(a, X, s, h);
        if (inside(next)) {
            X = next;
            continue;
        }
        const Side side = next < problem.x_min ? Side::left : Side::right;
        const double wall = problem.side_x(side);
        // The exit point lies inside this step; shrink the step until it lands on the wall.
        double lo = 0.0, hi = h;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, t); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (inside(rk4_back(a, X, s, mid)))
                lo = mid;
            else
                hi = mid;
        }
        return {wall, std::max(0.0, s - 0.5 * (lo + hi)), true, side};
    }
    return {X, 0.0, false, Side::left};
}

double characteristics_rk4(const AdvectionProblem& problem, double x, double t, double dt_ode) {
    return landing_value(problem, backtrace_rk4(problem, x, t, dt_ode));
}

ReferenceSolution upwind_fd(const AdvectionProblem& problem, double dx, double cfl, const std::vector<double>& times) {
    if (!(dx > 0.0))
        throw OracleError("dx must be > 0");
    if (!(cfl > 0.0 && cfl <= 1.0))
        throw OracleError("cfl must lie in (0, 1]");
    const double len = problem.x_max - problem.x_min;
    const double cells = std::round(len / dx);
    if (cells < 2 || std::abs(cells * dx - len) > 1e-9 * len)
        throw OracleError("dx must divide the domain length");
    if (times.empty() || !std::is_sorted(times.begin(), times.end()) || times.front() < 0.0)
        throw OracleError("output times must be non-empty, sorted and >= 0");

    const auto n = static_cast<std::size_t>(cells);
    ReferenceSolution ref;
    ref.method = OracleMethod::upwind_fd;
    ref.dx = dx;
    ref.cfl = cfl;
    ref.t = times;
    ref.x.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        ref.x[i] = problem.x_min + static_cast<double>(i) * dx;
    ref.x[n] = problem.x_max;
    const auto& xs = ref.x;

    std::vector<double> u(n + 1), un(n + 1), a(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        u[i] = problem.ic(xs[i]);
    ref.values.reserve(times.size() * (n + 1));

    const SpeedSpec& speed = problem.speed;
    const Expr& src = problem.source;
    const bool has_src = !problem.source_is_zero();
    const BoundaryCondition* left = problem.bc_on(Side::left);
    const BoundaryCondition* right = problem.bc_on(Side::right);
    const auto ni = static_cast<long>(n);

    double t = 0.0;
    for (double target : times) {
        while (t < target) {
            double amax = 0.0;
#pragma omp parallel for reduction(max : amax) if (ni > 8192)
            for (long i = 0; i <= ni; ++i) {
                a[i] = speed(xs[i], t, u[i]);
                amax = std::max(amax, std::abs(a[i]));
            }
            if (!std::isfinite(amax))
                throw OracleError("non-finite speed in upwind scheme");
            double dt = amax > 0.0 ? cfl * dx / amax : cfl * dx;
            // Keep the CFL limit at the end of the step too, so a speed that grows in time
            // cannot be frozen at a near-zero value over one long step.
            for (int pass = 0; pass < 8; ++pass) {
                const double te = t + dt;
                double aend = 0.0;
#pragma omp parallel for reduction(max : aend) if (ni > 8192)
                for (long i = 0; i <= ni; ++i)
                    aend = std::max(aend, std::abs(speed(xs[i], te, u[i])));
                if (!(aend * dt > cfl * dx * (1.0 + 1e-12)))
                    break;
                dt = cfl * dx / aend;
            }
            const bool last = t + dt >= target * (1.0 - 1e-14);
            if (last)
                dt = target - t;
            const double nu = dt / dx;
#pragma omp parallel for if (ni > 8192)
            for (long i = 0; i <= ni; ++i) {
                double d = 0.0;
                if (a[i] > 0.0 && i > 0)
                    d = u[i] - u[i - 1];
                else if (a[i] < 0.0 && i < ni)
                    d = u[i + 1] - u[i];
                double v = u[i] - nu * a[i] * d;
                if (has_src)
                    v += dt * src(xs[i], t, u[i]);
                un[i] = v;
            }
            const double tn = last ? target : t + dt;
            if (left && a[0] >= 0.0) {
                const double g = left->data(tn);
                un[0] = left->type == BoundaryCondition::Type::dirichlet
                            ? g
                            : (g + left->beta * un[1] / dx) / (left->alpha + left->beta / dx);
            }
            if (right && a[n] <= 0.0) {
                const double g = right->data(tn);
                un[n] = right->type == BoundaryCondition::Type::dirichlet
                            ? g
                            : (g + right->beta * un[n - 1] / dx) / (right->alpha + right->beta / dx);
            }
            u.swap(un);
            t = tn;
            ref.dt = std::max(ref.dt, dt);
            ++ref.steps;
        }
        ref.values.insert(ref.values.end(), u.begin(), u.end());
    }
    return ref;
}

ReferenceSolution sample_reference(const AdvectionProblem& problem, OracleMethod method, const std::vector<double>& xs,
                                   const std::vector<double>& times, double dt_ode) {
    if (method == OracleMethod::upwind_fd)
        throw OracleError("sample_reference handles the characteristic oracles only");
    ReferenceSolution ref;
    ref.method = method;
    ref.x = xs;
    ref.t = times;
    ref.dx = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
    ref.dt = method == OracleMethod::characteristics_rk4 ? dt_ode : 0.0;
    ref.values.assign(xs.size() * times.size(), 0.0);
    const auto total = static_cast<long>(ref.values.size());
    std::string failure;
#pragma omp parallel for schedule(dynamic, 64)
    for (long k = 0; k < total; ++k) {
        const auto j = static_cast<std::size_t>(k) / xs.size();
        const auto i = static_cast<std::size_t>(k) % xs.size();
        try {
            ref.values[static_cast<std::size_t>(k)] = method == OracleMethod::exact
                                                          ? exact_constant_speed(problem, xs[i], times[j])
                                                          : characteristics_rk4(problem, xs[i], times[j], dt_ode);
        } catch (const std::exception& e) {
#pragma omp critical(advpinn_reference_failure)
            if (failure.empty())
                failure = e.what();
        }
    }
    if (!failure.empty())
        throw OracleError(failure);
    return ref;
}

OracleMethod default_oracle(const AdvectionProblem& problem) {
    if (problem.speed.kind == SpeedSpec::Kind::constant)
        return OracleMethod::exact;
    if (!problem.speed.depends_on_u())
        return OracleMethod::characteristics_rk4;
    return OracleMethod::upwind_fd;
}

std::vector<double> level_crossings(const std::vector<double>& x, const std::vector<double>& v, double level) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if ((v[i] < level) != (v[i + 1] < level)) {
            const double w = (level - v[i]) / (v[i + 1] - v[i]);
            out.push_back(x[i] + w * (x[i + 1] - x[i]));
        }
    }
    return out;
}

SelfConvergence fd_self_convergence(const AdvectionProblem& problem, double dx, double cfl, double time,
                                    double level) {
    const auto coarse = upwind_fd(problem, dx, cfl, {time});
    const auto fine = upwind_fd(problem, 0.5 * dx, cfl, {time});
    SelfConvergence sc;
    sc.dx = dx;
    sc.coarse = level_crossings(coarse.x, coarse.slice(0), level);
    sc.fine = level_crossings(fine.x, fine.slice(0), level);
    if (sc.coarse.size() != sc.fine.size()) {
        sc.max_shift = std::numeric_limits<double>::infinity();
        return sc;
    }
    for (std::size_t k = 0; k < sc.coarse.size(); ++k)
        sc.max_shift = std::max(sc.max_shift, std::abs(sc.coarse[k] - sc.fine[k]));
    return sc;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b, double dx) {
    if (a.size() != b.size())
        throw Error("l1_distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::abs(a[i] - b[i]);
    return dx * s;
}

double data_total_variation(const AdvectionProblem& problem) {
    double tv = problem.ic.total_variation(problem.x_min, problem.x_max);
    for (const auto& bc : problem.bc) {
        tv += bc.data.total_variation(0.0, problem.t_max);
        tv += std::abs(bc.data(0.0) - problem.ic(problem.side_x(bc.side)));
    }
    return tv;
}

std::string reference_csv(const ReferenceSolution& ref) {
    const nlohmann::ordered_json meta{{"method", to_string(ref.method)}, {"dx", ref.dx}, {"dt", ref.dt},
                                      {"cfl", ref.cfl},                  {"steps", ref.steps}};
    std::ostringstream os;
    os << "# " << meta.dump() << "\n";
    os << "t,x,value\n";
    for (std::size_t j = 0; j < ref.t.size(); ++j)
        for (std::size_t i = 0; i < ref.x.size(); ++i)
            os << format_double(ref.t[j]) << ',' << format_double(ref.x[i]) << ',' << format_double(ref.value(j, i))
               << '\n';
    return os.str();
}

} // namespace advpinn
