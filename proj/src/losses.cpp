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


#include "advpinn/losses.hpp"

#include "advpinn/error.hpp"

#include <algorithm>
#include <cmath>

namespace advpinn {

double sigmoid(double z) {
    if (z >= 0.0)
        return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double smooth_abs(double b, double alpha) { return b * (sigmoid(2.0 * alpha * b) - sigmoid(-2.0 * alpha * b)); }

double smooth_abs_deriv(double b, double alpha) {
    const double sp = sigmoid(2.0 * alpha * b), sm = sigmoid(-2.0 * alpha * b);
    return (sp - sm) + 4.0 * alpha * b * sp * sm;
}

Blend smooth_max_d(double b, double c, double alpha) {
    const double d = b - c;
    const double s = sigmoid(alpha * d), sc = sigmoid(-alpha * d);
    const double k = alpha * s * sc * d;
    return {s * b + sc * c, s + k, sc - k};
}

double smooth_max(double b, double c, double alpha) { return smooth_max_d(b, c, alpha).value; }

double select_r(double b, double c) { return std::abs(b) >= std::abs(c) ? b : c; }

Blend smooth_r_d(double b, double c, double alpha) {
    const double q = smooth_abs(b, alpha) - smooth_abs(c, alpha);
    const double s = sigmoid(alpha * q), sc = sigmoid(-alpha * q);
    const double k = alpha * s * sc * (b - c);
    return {s * b + sc * c, s + k * smooth_abs_deriv(b, alpha), sc - k * smooth_abs_deriv(c, alpha)};
}

double smooth_r(double b, double c, double alpha) { return smooth_r_d(b, c, alpha).value; }

void LossWeights::validate() const {
    for (double w : {pde, ic, bc})
        if (!std::isfinite(w) || w < 0.0)
            throw ConfigError("loss weights must be finite and non-negative");
    if (pde == 0.0 && ic == 0.0 && bc == 0.0)
        throw ConfigError("loss weights must not all be zero");
}

std::string to_string(LossVariant v) {
    switch (v) {
    case LossVariant::standard: return "standard";
    case LossVariant::upwind_max: return "upwind-max";
    case LossVariant::upwind_r: return "upwind-r";
    case LossVariant::upwind_general: return "upwind-general";
    }
    return "standard";
}

LossVariant parse_loss_variant(const std::string& s) {
    for (auto v : {LossVariant::standard, LossVariant::upwind_max, LossVariant::upwind_r, LossVariant::upwind_general})
        if (s == to_string(v))
            return v;
    throw ConfigError("unknown loss variant '" + s + "' (expected standard, upwind-max, upwind-r or upwind-general)");
}

void UpwindConfig::validate() const {
    if (!(h > 0.0) || !std::isfinite(h))
        throw ConfigError("upwind h must be > 0");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ConfigError("upwind alpha must be > 0");
}

void check_variant(const AdvectionProblem& problem, LossVariant variant) {
    if ((variant == LossVariant::upwind_max || variant == LossVariant::upwind_r) &&
        problem.speed.kind != SpeedSpec::Kind::factored)
        throw ConfigError("loss variant " + to_string(variant) + " needs a factored speed u*g(x,t)");
}

LossBreakdown total_loss(double l_pde, double l_ic, double l_bc, const LossWeights& weights, double residual_max) {
    LossBreakdown b;
    b.l_pde = l_pde;
    b.l_ic = l_ic;
    b.l_bc = l_bc;
    b.weights = weights;
    b.total = weights.pde * l_pde + weights.ic * l_ic + weights.bc * l_bc;
    b.residual_max = residual_max;
    return b;
}

namespace {

double mean_scale(std::size_t n) { return n == 0 ? 0.0 : 1.0 / static_cast<double>(n); }

/// Source term f(x,t,u) with its u-derivative, precomputed where it does not depend on u.
struct SourceEval {
    Expr expr;
    bool on_u = false;
    std::vector<double> fixed;

    SourceEval(const Expr& e, std::span<const Point> pts) : expr(e), on_u(e.uses_u()) {
        if (!on_u) {
            fixed.reserve(pts.size());
            for (const auto& p : pts)
                fixed.push_back(e(p.x, p.t));
        }
    }
    Dual operator()(std::size_t i, double x, double t, double u) const {
        return on_u ? expr.eval_du(x, t, u) : Dual{fixed[i], 0.0};
    }
};

} // namespace

PointLoss pde_term(const AdvectionProblem& problem, std::span<const Point> points, LossVariant variant,
                   const UpwindConfig& upwind, std::shared_ptr<std::vector<double>> sq) {
    check_variant(problem, variant);
    const bool shifted = variant != LossVariant::standard;
    if (shifted && (!(upwind.h >= 0.0) || !(upwind.alpha > 0.0)))
        throw ConfigError("upwind loss needs h >= 0 and alpha > 0");
    PointLoss l;
    l.points.assign(points.begin(), points.end());
    l.scale = mean_scale(points.size());
    if (sq)
        sq->assign(points.size(), 0.0);
    auto src = std::make_shared<const SourceEval>(problem.source, points);
    const SpeedSpec speed = problem.speed;

    // Speed coefficient per point: a(x,t) for u-independent speeds, g(x,t) for factored ones.
    auto coef = std::make_shared<std::vector<double>>();
    if (speed.kind != SpeedSpec::Kind::general) {
        coef->reserve(points.size());
        for (const auto& p : points)
            coef->push_back(speed.factor(p.x, p.t));
    }
    const double alpha = upwind.alpha;
    auto store = [sq](std::size_t i, double r) {
        if (sq)
            (*sq)[i] = r * r;
    };

    switch (variant) {
    case LossVariant::standard:
        l.local = [speed, src, coef, store](std::size_t i, const LocalState& s, LocalAdjoint& adj) {
            Dual a;
            if (speed.kind == SpeedSpec::Kind::general)
                a = speed.eval_du(s.x, s.t, s.u);
            else if (speed.kind == SpeedSpec::Kind::factored)
                a = {s.u * (*coef)[i], (*coef)[i]};
            else
                a = {(*coef)[i], 0.0};
            const Dual f = (*src)(i, s.x, s.t, s.u);
            const double r = s.ut + a.v * s.ux - f.v;
            adj.ut = 2.0 * r;
            adj.ux = 2.0 * r * a.v;
            adj.u = 2.0 * r * (a.du * s.ux - f.du);
            store(i, r);
            return r * r;
        };
        break;
    case LossVariant::upwind_max:
        l.use_plus = true;
        l.local = [src, coef, alpha, store](std::size_t i, const LocalState& s, LocalAdjoint& adj) {
            const double g = (*coef)[i];
            const Blend m = smooth_max_d(s.u, s.u_plus, alpha);
            const Dual f = (*src)(i, s.x, s.t, s.u);
            const double r = s.ut + m.value * g * s.ux - f.v;
            adj.ut = 2.0 * r;
            adj.ux = 2.0 * r * m.value * g;
            adj.u = 2.0 * r * (m.d_b * g * s.ux - f.du);
            adj.u_plus = 2.0 * r * m.d_c * g * s.ux;
            store(i, r);
            return r * r;
        };
        break;
    case LossVariant::upwind_r:
        l.use_plus = l.use_minus = true;
        l.local = [src, coef, alpha, store](std::size_t i, const LocalState& s, LocalAdjoint& adj) {
            const double g = (*coef)[i];
            const Blend m = smooth_r_d(s.u_plus, s.u_minus, alpha);
            const Dual f = (*src)(i, s.x, s.t, s.u);
            const double r = s.ut + m.value * g * s.ux - f.v;
            adj.ut = 2.0 * r;
            adj.ux = 2.0 * r * m.value * g;
            adj.u = -2.0 * r * f.du;
            adj.u_plus = 2.0 * r * m.d_b * g * s.ux;
            adj.u_minus = 2.0 * r * m.d_c * g * s.ux;
            store(i, r);
            return r * r;
        };
        break;
    case LossVariant::upwind_general:
        l.use_plus = l.use_minus = true;
        l.local = [speed, src, alpha, store](std::size_t i, const LocalState& s, LocalAdjoint& adj) {
            const Dual ap = speed.eval_du(s.x, s.t, s.u_plus);
            const Dual am = speed.eval_du(s.x, s.t, s.u_minus);
            const Blend m = smooth_r_d(ap.v, am.v, alpha);
            const Dual f = (*src)(i, s.x, s.t, s.u);
            const double r = s.ut + m.value * s.ux - f.v;
            adj.ut = 2.0 * r;
            adj.ux = 2.0 * r * m.value;
            adj.u = -2.0 * r * f.du;
            adj.u_plus = 2.0 * r * m.d_b * ap.du * s.ux;
            adj.u_minus = 2.0 * r * m.d_c * am.du * s.ux;
            store(i, r);
            return r * r;
        };
        break;
    }
    if (shifted)
        l.shift = upwind.h;
    return l;
}

PointLoss ic_term(const AdvectionProblem& problem, std::span<const double> xs) {
    PointLoss l;
    auto target = std::make_shared<std::vector<double>>();
    target->reserve(xs.size());
    for (double x : xs) {
        l.points.push_back({x, 0.0});
        target->push_back(problem.ic(x));
    }
    l.use_input_derivs = false;
    l.scale = mean_scale(xs.size());
    l.local = [target](std::size_t i, const LocalState& s, LocalAdjoint& adj) {
        const double r = s.u - (*target)[i];
        adj.u = 2.0 * r;
        return r * r;
    };
    return l;
}

PointLoss bc_term(const AdvectionProblem& problem, std::span<const BcPoint> points) {
    struct Row {
        double a, b, g; // a*u + b*u_x - g; b already carries the outward-normal sign
    };
    PointLoss l;
    auto rows = std::make_shared<std::vector<Row>>();
    rows->reserve(points.size());
    bool need_dx = false;
    for (const auto& p : points) {
        const BoundaryCondition* bc = problem.bc_on(p.side);
        if (!bc)
            throw ConfigError(std::string("boundary point on undeclared side ") +
                              (p.side == Side::left ? "left" : "right"));
        l.points.push_back({problem.side_x(p.side), p.t});
        const double g = bc->data(p.t);
        if (bc->type == BoundaryCondition::Type::dirichlet) {
            rows->push_back({1.0, 0.0, g});
        } else {
            const double normal = p.side == Side::left ? -1.0 : 1.0;
            rows->push_back({bc->alpha, bc->beta * normal, g});
            need_dx = need_dx || bc->beta != 0.0;
        }
    }
    l.use_input_derivs = need_dx;
    l.scale = mean_scale(points.size());
    l.local = [rows](std::size_t i, const LocalState& s, LocalAdjoint& adj) {
        const Row& w = (*rows)[i];
        const double r = w.a * s.u + w.b * s.ux - w.g;
        adj.u = 2.0 * r * w.a;
        adj.ux = 2.0 * r * w.b;
        return r * r;
    };
    return l;
}

double pde_loss_standard(const PinnModel& model, const AdvectionProblem& problem, std::span<const Point> points) {
    return loss_value(model, pde_term(problem, points, LossVariant::standard));
}

double pde_loss_upwind_max(const PinnModel& model, const AdvectionProblem& problem, std::span<const Point> points,
                           const UpwindConfig& cfg) {
    return loss_value(model, pde_term(problem, points, LossVariant::upwind_max, cfg));
}

double pde_loss_upwind_r(const PinnModel& model, const AdvectionProblem& problem, std::span<const Point> points,
                         const UpwindConfig& cfg) {
    return loss_value(model, pde_term(problem, points, LossVariant::upwind_r, cfg));
}

double pde_loss_upwind_general(const PinnModel& model, const AdvectionProblem& problem,
                               std::span<const Point> points, const UpwindConfig& cfg) {
    return loss_value(model, pde_term(problem, points, LossVariant::upwind_general, cfg));
}

double ic_loss(const PinnModel& model, const AdvectionProblem& problem, std::span<const double> xs) {
    return loss_value(model, ic_term(problem, xs));
}

double bc_loss(const PinnModel& model, const AdvectionProblem& problem, std::span<const BcPoint> points) {
    return loss_value(model, bc_term(problem, points));
}

LossWeights gradnorm_weights(const GradNorms& norms, const std::optional<LossWeights>& previous) {
    const double sum = norms.pde + norms.ic + norms.bc;
    if (!(sum > 0.0) || !std::isfinite(sum))
        throw NumericalError("gradient-norm weighting needs at least one positive finite norm");
    auto raw = [&](double n) {
        const double w = n > 0.0 ? sum / (3.0 * n) : kGradnormMax;
        return std::clamp(w, kGradnormMin, kGradnormMax);
    };
    LossWeights w{1.0, raw(norms.ic), raw(norms.bc)};
    if (previous) {
        w.ic = kGradnormDecay * previous->ic + (1.0 - kGradnormDecay) * w.ic;
        w.bc = kGradnormDecay * previous->bc + (1.0 - kGradnormDecay) * w.bc;
    }
    return w;
}

BoundCheck upwind_bound_check(const PinnModel& model, const AdvectionProblem& problem, std::span<const Point> points,
                              const UpwindConfig& cfg, LossVariant variant, int probes) {
    if (problem.speed.kind != SpeedSpec::Kind::factored)
        throw ConfigError("bound check needs a factored speed u*g(x,t)");
    cfg.validate();
    if (probes < 2)
        throw ConfigError("bound check needs at least two probes");
    const double h = cfg.h;
    const std::size_t n = points.size();
    const auto rec = evaluate_with_input_derivs(model, points);
    std::vector<Point> plus(n), minus(n);
    for (std::size_t i = 0; i < n; ++i) {
        plus[i] = {points[i].x + h, points[i].t};
        minus[i] = {points[i].x - h, points[i].t};
    }
    const auto up = evaluate_values(model, plus);
    const auto um = evaluate_values(model, minus);
    const auto P = static_cast<std::size_t>(probes);
    std::vector<Point> probe(n * P);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < P; ++k)
            probe[i * P + k] = {points[i].x - h + 2.0 * h * static_cast<double>(k) / static_cast<double>(P - 1),
                                points[i].t};
    const auto pr = evaluate_with_input_derivs(model, probe);

    BoundCheck out;
    out.probes = probes;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [x, t] = points[i];
        const double g = problem.speed.factor(x, t);
        const double f = problem.source(x, t, rec[i].u);
        const double sel = variant == LossVariant::upwind_max ? std::max(rec[i].u, up[i]) : select_r(up[i], um[i]);
        out.l_standard_max = std::max(out.l_standard_max, std::abs(rec[i].du_dt + rec[i].u * g * rec[i].du_dx - f));
        out.l_upwind_max = std::max(out.l_upwind_max, std::abs(rec[i].du_dt + sel * g * rec[i].du_dx - f));
        double M = 0.0;
        for (std::size_t k = 0; k < P; ++k)
            M = std::max(M, std::abs(pr[i * P + k].du_dx));
        out.bound_rhs = std::max(out.bound_rhs, h * std::abs(g * M * M));
    }
    return out;
}

} // namespace advpinn
