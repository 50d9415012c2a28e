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

#include "advpinn/expr.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace advpinn {

struct Point {
    double x = 0.0;
    double t = 0.0;
    bool operator==(const Point&) const = default;
};

/// Closed interval, given either as [lo, hi] or as |s - center| <= radius.
struct Interval {
    enum class Kind { range, ball };
    Kind kind = Kind::range;
    double a = 0.0; ///< lo, or center
    double b = 0.0; ///< hi, or radius

    static Interval range(double lo, double hi) { return {Kind::range, lo, hi}; }
    static Interval ball(double center, double radius) { return {Kind::ball, center, radius}; }

    bool contains(double s) const { return kind == Kind::range ? (lo() <= s && s <= hi()) : std::abs(s - a) <= b; }
    double lo() const { return kind == Kind::range ? a : a - b; }
    double hi() const { return kind == Kind::range ? b : a + b; }
    bool operator==(const Interval&) const = default;
};

struct Piece {
    Interval where;
    Expr value;
    bool operator==(const Piece&) const = default;
};

/// Piecewise data on one axis. First matching piece wins; `otherwise` covers the rest.
///
/// Piece expressions see the lookup coordinate under its axis name (x for
/// initial data, t for boundary data).
struct PiecewiseFunction {
    enum class Axis { x, t };
    Axis axis = Axis::x;
    std::vector<Piece> pieces;
    Expr otherwise{0.0};

    double operator()(double s) const;
    /// Values at and just beside every piece endpoint plus a coarse sweep of [lo, hi].
    std::pair<double, double> range_on(double lo, double hi) const;
    /// Sum of absolute jumps at piece endpoints inside [lo, hi] plus the variation of smooth pieces.
    double total_variation(double lo, double hi) const;
    bool operator==(const PiecewiseFunction&) const = default;
};

double eval_piecewise(const PiecewiseFunction& p, double s);

/// Advection speed a(x, t, u).
struct SpeedSpec {
    enum class Kind { constant, spacetime, factored, general };
    Kind kind = Kind::constant;
    /// constant: the value; spacetime: a(x,t); factored: g(x,t) with a = u*g; general: a(x,t,u).
    Expr expr{1.0};

    static SpeedSpec constant(double a) { return {Kind::constant, Expr(a)}; }
    static SpeedSpec spacetime(const std::string& e) { return {Kind::spacetime, Expr::parse(e)}; }
    static SpeedSpec factored(const std::string& g) { return {Kind::factored, Expr::parse(g)}; }
    static SpeedSpec general(const std::string& e) { return {Kind::general, Expr::parse(e)}; }

    double operator()(double x, double t, double u) const;
    /// Speed and its u-derivative.
    Dual eval_du(double x, double t, double u) const;
    /// g(x,t) of a factored speed; the full speed for u-independent kinds.
    double factor(double x, double t) const;
    bool depends_on_u() const { return kind == Kind::factored || (kind == Kind::general && expr.uses_u()); }
    void validate() const;
    bool operator==(const SpeedSpec&) const = default;
};

enum class Side { left, right };

struct BoundaryCondition {
    enum class Type { dirichlet, robin };
    Side side = Side::left;
    Type type = Type::dirichlet;
    double alpha = 1.0; ///< robin: alpha*u + beta*du/dn = g
    double beta = 0.0;
    PiecewiseFunction data{PiecewiseFunction::Axis::t, {}, Expr(0.0)};
    bool operator==(const BoundaryCondition&) const = default;
};

struct Bounds {
    double lo = 0.0;
    double hi = 1.0;
    bool operator==(const Bounds&) const = default;
};

/// u_t + a(x,t,u) u_x = f(x,t,u) on [x_min, x_max] x [0, t_max].
struct AdvectionProblem {
    std::string name;
    double x_min = 0.0;
    double x_max = 1.0;
    double t_max = 1.0;
    SpeedSpec speed;
    Expr source{0.0};
    PiecewiseFunction ic;
    std::vector<BoundaryCondition> bc;
    std::optional<Bounds> bounds;

    const BoundaryCondition* bc_on(Side s) const;
    double side_x(Side s) const { return s == Side::left ? x_min : x_max; }
    bool source_is_zero() const { return source.is_constant() && source(0, 0, 0) == 0.0; }
    /// Throws ConfigError if the problem is not well formed.
    void validate() const;
    bool operator==(const AdvectionProblem&) const = default;
};

struct BcPoint {
    Side side = Side::left;
    double t = 0.0;
    bool operator==(const BcPoint&) const = default;
};

struct CollocationSet {
    std::vector<Point> pde;
    std::vector<double> ic;
    std::vector<BcPoint> bc;
    std::uint64_t seed = 0;
};

enum class Sampling { uniform, grid };

CollocationSet sample_collocation(const AdvectionProblem& problem, std::size_t n_pde, std::size_t n_ic,
                                  std::size_t n_bc, std::uint64_t seed, Sampling strategy = Sampling::uniform);

/// Equispaced points including both ends ({(lo+hi)/2} when n == 1).
std::vector<double> linspace(double lo, double hi, std::size_t n);

const std::vector<std::string>& catalog_names();
/// Throws ConfigError listing the valid names for an unknown name.
AdvectionProblem catalog(const std::string& name);

} // namespace advpinn
