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

#include "advpinn/problem.hpp"

#include "advpinn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace advpinn {

double PiecewiseFunction::operator()(double s) const {
    const double x = axis == Axis::x ? s : 0.0;
    const double t = axis == Axis::t ? s : 0.0;
    for (const auto& p : pieces)
        if (p.where.contains(s))
            return p.value(x, t);
    return otherwise(x, t);
}

double eval_piecewise(const PiecewiseFunction& p, double s) { return p(s); }

namespace {

std::vector<double> probe_points(const PiecewiseFunction& f, double lo, double hi) {
    std::vector<double> s = linspace(lo, hi, 20001);
    const double eps = 1e-9 * std::max(1.0, hi - lo);
    for (const auto& p : f.pieces) {
        for (double e : {p.where.lo(), p.where.hi()}) {
            if (!std::isfinite(e))
                continue;
            for (double c : {e - eps, e, e + eps})
                if (c >= lo && c <= hi)
                    s.push_back(c);
        }
    }
    std::sort(s.begin(), s.end());
    return s;
}

} // namespace

std::pair<double, double> PiecewiseFunction::range_on(double lo, double hi) const {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (double s : probe_points(*this, lo, hi)) {
        const double v = (*this)(s);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    return {mn, mx};
}

double PiecewiseFunction::total_variation(double lo, double hi) const {
    const auto s = probe_points(*this, lo, hi);
    double tv = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        tv += std::abs((*this)(s[i]) - (*this)(s[i - 1]));
    return tv;
}

double SpeedSpec::operator()(double x, double t, double u) const {
    switch (kind) {
    case Kind::constant:
    case Kind::spacetime: return expr(x, t);
    case Kind::factored: return u * expr(x, t);
    case Kind::general: return expr(x, t, u);
    }
    return 0.0;
}

Dual SpeedSpec::eval_du(double x, double t, double u) const {
    switch (kind) {
    case Kind::constant:
    case Kind::spacetime: return {expr(x, t), 0.0};
    case Kind::factored: {
        const double g = expr(x, t);
        return {u * g, g};
    }
    case Kind::general: return expr.eval_du(x, t, u);
    }
    return {};
}

double SpeedSpec::factor(double x, double t) const { return expr(x, t); }

void SpeedSpec::validate() const {
    switch (kind) {
    case Kind::constant:
        if (!expr.is_constant())
            throw ConfigError("constant speed must not depend on x, t or u: " + expr.source());
        break;
    case Kind::spacetime:
    case Kind::factored:
        if (expr.uses_u())
            throw ConfigError("speed factor must not depend on u: " + expr.source());
        break;
    case Kind::general: break;
    }
}

const BoundaryCondition* AdvectionProblem::bc_on(Side s) const {
    for (const auto& b : bc)
        if (b.side == s)
            return &b;
    return nullptr;
}

void AdvectionProblem::validate() const {
    if (!(x_min < x_max))
        throw ConfigError("domain requires x_min < x_max");
    if (!(t_max > 0.0))
        throw ConfigError("domain requires t_max > 0");
    speed.validate();
    if (ic.axis != PiecewiseFunction::Axis::x)
        throw ConfigError("initial data must be a function of x");
    for (const auto& b : bc) {
        if (b.data.axis != PiecewiseFunction::Axis::t)
            throw ConfigError("boundary data must be a function of t");
        if (b.type == BoundaryCondition::Type::robin && b.alpha == 0.0 && b.beta == 0.0)
            throw ConfigError("robin condition needs alpha or beta non-zero");
    }
    if (bc.size() > 2 || (bc.size() == 2 && bc[0].side == bc[1].side))
        throw ConfigError("duplicate boundary condition on one side");
    if (bounds && !(bounds->lo < bounds->hi))
        throw ConfigError("bounds require lo < hi");

    // Inflow check: sample the boundary speed over time and a range of solution values.
    auto [u_lo, u_hi] = ic.range_on(x_min, x_max);
    if (bounds) {
        u_lo = std::min(u_lo, bounds->lo);
        u_hi = std::max(u_hi, bounds->hi);
    }
    bool left_inflow = false;
    bool right_inflow = false;
    for (double t : linspace(0.0, t_max, 33)) {
        for (double u : linspace(u_lo, u_hi, 5)) {
            left_inflow |= speed(x_min, t, u) >= 0.0;
            right_inflow |= speed(x_max, t, u) <= 0.0;
        }
    }
    if ((left_inflow || right_inflow) && !((left_inflow && bc_on(Side::left)) || (right_inflow && bc_on(Side::right))))
        throw ConfigError("no boundary condition on an inflow side");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = 0.5 * (lo + hi);
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + static_cast<double>(i) * step;
    if (n > 1)
        v[n - 1] = hi;
    return v;
}

namespace {

/// Divisor pair nx*nt == n closest to the domain aspect ratio.
std::pair<std::size_t, std::size_t> grid_shape(std::size_t n, double width, double height) {
    const double target = std::sqrt(static_cast<double>(n) * width / height);
    std::size_t best = 1;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d != 0)
            continue;
        const double err = std::abs(std::log(static_cast<double>(d) / target));
        if (err < best_err) {
            best_err = err;
            best = d;
        }
    }
    return {best, n / best};
}

} // namespace

CollocationSet sample_collocation(const AdvectionProblem& problem, std::size_t n_pde, std::size_t n_ic,
                                  std::size_t n_bc, std::uint64_t seed, Sampling strategy) {
    if (n_pde == 0 || n_ic == 0)
        throw ConfigError("collocation counts must be >= 1");
    std::vector<Side> sides;
    for (const auto& b : problem.bc)
        sides.push_back(b.side);
    if (!sides.empty() && n_bc == 0)
        throw ConfigError("collocation counts must be >= 1");

    CollocationSet set;
    set.seed = seed;
    set.pde.reserve(n_pde);
    set.ic.reserve(n_ic);
    const double a = problem.x_min, b = problem.x_max, T = problem.t_max;

    if (strategy == Sampling::uniform) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> ux(a, b), ut(0.0, T);
        for (std::size_t i = 0; i < n_pde; ++i) {
            const double x = ux(rng);
            set.pde.push_back({x, ut(rng)});
        }
        for (std::size_t i = 0; i < n_ic; ++i)
            set.ic.push_back(ux(rng));
        if (!sides.empty())
            for (std::size_t i = 0; i < n_bc; ++i)
                set.bc.push_back({sides[i % sides.size()], ut(rng)});
    } else {
        const auto [nx, nt] = grid_shape(n_pde, b - a, T);
        const auto xs = linspace(a, b, nx);
        const auto ts = linspace(0.0, T, nt);
        for (double t : ts)
            for (double x : xs)
                set.pde.push_back({x, t});
        set.ic = linspace(a, b, n_ic);
        if (!sides.empty()) {
            for (std::size_t s = 0; s < sides.size(); ++s) {
                const std::size_t count = n_bc / sides.size() + (s < n_bc % sides.size() ? 1 : 0);
                for (double t : linspace(0.0, T, count))
                    set.bc.push_back({sides[s], t});
            }
        }
    }
    return set;
}

namespace {

PiecewiseFunction five_pulses() {
    PiecewiseFunction ic;
    ic.axis = PiecewiseFunction::Axis::x;
    ic.pieces = {{Interval::ball(0.2, 0.1), Expr::parse("0.6")},
                 {Interval::ball(0.55, 0.1), Expr::parse("0.8")},
                 {Interval::ball(0.9, 0.1), Expr::parse("1.0")},
                 {Interval::ball(1.25, 0.1), Expr::parse("0.8")},
                 {Interval::ball(1.6, 0.1), Expr::parse("0.6")}};
    ic.otherwise = Expr(0.0);
    return ic;
}

BoundaryCondition zero_left() {
    return {Side::left, BoundaryCondition::Type::dirichlet, 1.0, 0.0, {PiecewiseFunction::Axis::t, {}, Expr(0.0)}};
}

AdvectionProblem base(const std::string& name) {
    AdvectionProblem p;
    p.name = name;
    p.x_min = 0.0;
    p.x_max = 2.0;
    p.t_max = 1.0;
    p.bc = {zero_left()};
    return p;
}

} // namespace

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{"linear-pulses", "linear-pulses-bc-jump", "sin-speed",
                                                "nonlinear-single-pulse", "nonlinear-three-pulse"};
    return names;
}

AdvectionProblem catalog(const std::string& name) {
    AdvectionProblem p = base(name);
    if (name == "linear-pulses") {
        p.speed = SpeedSpec::constant(2.0);
        p.ic = five_pulses();
        p.bounds = Bounds{0.0, 1.0};
    } else if (name == "linear-pulses-bc-jump") {
        p.speed = SpeedSpec::constant(2.0);
        p.ic = five_pulses();
        p.bc[0].data.pieces = {{Interval::range(0.5, std::numeric_limits<double>::infinity()), Expr::parse("0.5")}};
        p.bounds = Bounds{0.0, 1.0};
    } else if (name == "sin-speed") {
        p.speed = SpeedSpec::spacetime("0.6*sin(6*x*t)");
        p.ic = five_pulses();
        p.bounds = Bounds{0.0, 1.0};
    } else if (name == "nonlinear-single-pulse") {
        p.speed = SpeedSpec::factored("(1-x)*(1.5+t)");
        p.ic.pieces = {{Interval::ball(1.0, 0.1), Expr::parse("1")}};
        p.bounds = Bounds{0.0, 1.0};
    } else if (name == "nonlinear-three-pulse") {
        // The polynomial factor times u is the u_x coefficient.
        p.speed = SpeedSpec::factored("(0.4-x)*(1-x)*(1.6-x)*(1.5+t)");
        p.ic.pieces = {{Interval::ball(0.4, 0.1), Expr::parse("1")},
                       {Interval::ball(1.0, 0.2), Expr::parse("-sin((x-0.8)*pi/0.4)")},
                       {Interval::ball(1.6, 0.1), Expr::parse("1")}};
        p.bounds = Bounds{-1.0, 1.0};
    } else {
        std::string valid;
        for (const auto& n : catalog_names())
            valid += (valid.empty() ? "" : ", ") + n;
        throw ConfigError("unknown problem '" + name + "'; valid names: " + valid);
    }
    p.validate();
    return p;
}

} // namespace advpinn
