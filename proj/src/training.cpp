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


#include "advpinn/training.hpp"

#include "advpinn/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace advpinn {

Objective::Objective(const AdvectionProblem& problem, const CollocationSet& data, LossVariant variant,
                     const UpwindConfig& upwind)
    : variant_(variant), squared_(std::make_shared<std::vector<double>>()) {
    pde_ = pde_term(problem, data.pde, variant, upwind, squared_);
    ic_ = ic_term(problem, data.ic);
    bc_ = bc_term(problem, data.bc);
}

double Objective::residual_max() const {
    double m = 0.0;
    for (double v : *squared_)
        m = std::max(m, v);
    return std::sqrt(m);
}

namespace {

double term_value(const PinnModel& model, const PointLoss& l) {
    return l.points.empty() ? 0.0 : loss_value(model, l);
}

LossGradient term_gradient(const PinnModel& model, const PointLoss& l, Target target) {
    if (l.points.empty())
        return {0.0, ParamVector(model.params().layout)};
    return loss_gradient(model, l, target);
}

} // namespace

LossBreakdown Objective::value(const PinnModel& model, const LossWeights& weights) const {
    const double p = term_value(model, pde_);
    const double rmax = residual_max();
    return total_loss(p, term_value(model, ic_), term_value(model, bc_), weights, rmax);
}

Objective::Eval Objective::evaluate(const PinnModel& model, Target target) const {
    Eval e;
    auto p = term_gradient(model, pde_, target);
    e.residual_max = residual_max();
    auto i = term_gradient(model, ic_, target);
    auto b = term_gradient(model, bc_, target);
    e.l_pde = p.value;
    e.l_ic = i.value;
    e.l_bc = b.value;
    e.g_pde = std::move(p.gradient);
    e.g_ic = std::move(i.gradient);
    e.g_bc = std::move(b.gradient);
    e.norms = {l2_norm(e.g_pde.values), l2_norm(e.g_ic.values), l2_norm(e.g_bc.values)};
    return e;
}

LossBreakdown Objective::Eval::breakdown(const LossWeights& w) const {
    return total_loss(l_pde, l_ic, l_bc, w, residual_max);
}

ParamVector Objective::Eval::total_gradient(const LossWeights& w) const {
    ParamVector g(g_pde.layout);
    for (std::size_t k = 0; k < g.size(); ++k)
        g.values[k] = w.pde * g_pde.values[k] + w.ic * g_ic.values[k] + w.bc * g_bc.values[k];
    return g;
}

void adam_step(AdamState& st, std::span<double> params, std::span<const double> g, const AdamConfig& cfg) {
    if (st.m.empty()) {
        st.m.assign(params.size(), 0.0);
        st.v.assign(params.size(), 0.0);
    }
    if (st.m.size() != params.size() || g.size() != params.size())
        throw Error("adam state size mismatch");
    ++st.step;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        st.m[i] = cfg.beta1 * st.m[i] + (1.0 - cfg.beta1) * g[i];
        st.v[i] = cfg.beta2 * st.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
        const double mh = st.m[i] / c1;
        const double vh = st.v[i] / c2;
        params[i] -= cfg.lr * mh / (std::sqrt(vh) + cfg.eps);
    }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

std::vector<double> scaled_negative(std::span<const double> g) {
    const double n = l2_norm(g);
    std::vector<double> d(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        d[i] = -g[i] / n;
    return d;
}

} // namespace

std::vector<double> lbfgs_direction(const LbfgsState& st, std::span<const double> g) {
    if (st.s.empty())
        return scaled_negative(g);
    const std::size_t k = st.s.size();
    std::vector<double> q(g.begin(), g.end());
    std::vector<double> a(k);
    for (std::size_t j = k; j-- > 0;) {
        a[j] = st.rho[j] * dot(st.s[j], q);
        for (std::size_t i = 0; i < q.size(); ++i)
            q[i] -= a[j] * st.y[j][i];
    }
    const double gamma = dot(st.s.back(), st.y.back()) / dot(st.y.back(), st.y.back());
    for (double& v : q)
        v *= gamma;
    for (std::size_t j = 0; j < k; ++j) {
        const double b = st.rho[j] * dot(st.y[j], q);
        for (std::size_t i = 0; i < q.size(); ++i)
            q[i] += st.s[j][i] * (a[j] - b);
    }
    for (double& v : q)
        v = -v;
    return q;
}

LbfgsResult lbfgs_step(LbfgsState& st, std::vector<double>& x, double& f, std::vector<double>& g, const FunGrad& fg,
                       const LbfgsConfig& cfg) {
    LbfgsResult res;
    const double gn = l2_norm(g);
    if (gn == 0.0) {
        res.status = LbfgsStatus::converged;
        return res;
    }
    std::vector<double> d = lbfgs_direction(st, g);
    double gd = dot(g, d);
    if (!(gd < 0.0) || !std::isfinite(gd)) {
        st.s.clear();
        st.y.clear();
        st.rho.clear();
        d = scaled_negative(g);
        gd = -gn;
        res.steepest_descent = true;
    }
    std::vector<double> xn(x.size()), gnew(x.size());
    double step = 1.0;
    for (int trial = 0; trial < cfg.max_line_search; ++trial) {
        for (std::size_t i = 0; i < x.size(); ++i)
            xn[i] = x[i] + step * d[i];
        const double fn = fg(xn, gnew);
        ++res.evaluations;
        if (std::isfinite(fn) && fn <= f + kArmijoC1 * step * gd) {
            std::vector<double> s(x.size()), y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                s[i] = xn[i] - x[i];
                y[i] = gnew[i] - g[i];
            }
            const double sy = dot(s, y);
            if (sy > 1e-10 * l2_norm(s) * l2_norm(y)) {
                st.s.push_back(std::move(s));
                st.y.push_back(std::move(y));
                st.rho.push_back(1.0 / sy);
                if (st.s.size() > static_cast<std::size_t>(cfg.memory)) {
                    st.s.pop_front();
                    st.y.pop_front();
                    st.rho.pop_front();
                }
            }
            x.swap(xn);
            g.swap(gnew);
            f = fn;
            return res;
        }
        step *= kLineSearchShrink;
    }
    res.status = LbfgsStatus::line_search_failure;
    return res;
}

void BStopRule::validate() const {
    if (plateau_window < 2)
        throw ConfigError("stop rule window must be >= 2");
    if (!(plateau_rel_tol >= 0.0))
        throw ConfigError("stop rule tolerance must be >= 0");
}

BStats b_stats(const PinnModel& model) {
    BStats s;
    const auto B = model.B();
    for (double v : B) {
        s.mean_abs += std::abs(v);
        s.max_abs = std::max(s.max_abs, std::abs(v));
    }
    if (!B.empty())
        s.mean_abs /= static_cast<double>(B.size());
    return s;
}

int StageConfig::max_iters() const {
    int n = 0;
    for (const auto& p : phases)
        n += p.max_iters;
    return n;
}

void StageConfig::validate() const {
    for (const auto& p : phases) {
        if (p.max_iters < 0)
            throw ConfigError("phase max_iters must be >= 0");
        if (p.kind == Phase::Kind::adam) {
            if (!(p.adam.lr >= 0.0) || !(p.adam.eps > 0.0) || !(p.adam.beta1 >= 0.0 && p.adam.beta1 < 1.0) ||
                !(p.adam.beta2 >= 0.0 && p.adam.beta2 < 1.0))
                throw ConfigError("invalid adam settings");
        } else if (p.lbfgs.memory < 1 || p.lbfgs.max_line_search < 1) {
            throw ConfigError("invalid lbfgs settings");
        }
    }
    weights.validate();
    if (weight_mode == WeightMode::gradnorm && gradnorm_every < 1)
        throw ConfigError("gradnorm refresh interval must be >= 1");
    if (stop)
        stop->validate();
}

LossWeights fourier_weights(Discontinuous flag, double factor) {
    LossWeights w;
    if (flag != Discontinuous::bc)
        w.ic = factor;
    if (flag != Discontinuous::ic)
        w.bc = factor;
    return w;
}

StageConfig default_stage1() {
    StageConfig s;
    s.target = Target::theta1;
    s.phases = {Phase{Phase::Kind::adam, 2000, {}, {}}};
    s.weights = fourier_weights(Discontinuous::ic);
    s.stop = BStopRule{BStopRule::Watch::mean_abs, 200, 1e-3, std::nullopt};
    return s;
}

StageConfig default_stage2() {
    StageConfig s;
    s.target = Target::theta2;
    s.phases = {Phase{Phase::Kind::adam, 10000, {}, {}}, Phase{Phase::Kind::lbfgs, 2000, {}, {}}};
    s.weight_mode = WeightMode::gradnorm;
    s.gradnorm_every = 100;
    return s;
}

namespace {

/// Segment the optimiser may move, and the target passed to gradient evaluation.
std::pair<Segment, Target> update_range(const PinnModel& model, Target target) {
    const auto& layout = model.params().layout;
    const bool b_trainable = model.arch().fourier_trainable;
    if (target == Target::theta1) {
        if (!b_trainable)
            throw ConfigError("stage targets theta1 but the Fourier features are not trainable");
        return {layout.range("theta1"), Target::theta1};
    }
    if (target == Target::theta2 || !b_trainable)
        return {layout.range("theta2"), Target::theta2};
    return {Segment{"all", 0, layout.size()}, Target::all};
}

class StopWatch {
public:
    StopWatch(const std::optional<BStopRule>& rule, const PinnModel& m) : rule_(rule) {
        if (rule_)
            hist_.push_back(stat(m));
    }
    /// Reason to stop after an update, or empty.
    std::string check(const PinnModel& m) {
        if (!rule_)
            return {};
        const double s = stat(m);
        hist_.push_back(s);
        if (rule_->hard_cap && s > *rule_->hard_cap)
            return "B hard cap";
        const auto w = static_cast<std::size_t>(rule_->plateau_window);
        if (hist_.size() > w) {
            const double old = hist_[hist_.size() - 1 - w];
            const double rel = std::abs(s - old) / std::max(std::abs(old), std::numeric_limits<double>::min());
            if (rel < rule_->plateau_rel_tol)
                return "B plateau";
        }
        return {};
    }

private:
    double stat(const PinnModel& m) const {
        const BStats b = b_stats(m);
        return rule_->watch == BStopRule::Watch::mean_abs ? b.mean_abs : b.max_abs;
    }
    const std::optional<BStopRule>& rule_;
    std::vector<double> hist_;
};

} // namespace

TrainReport train_stage(PinnModel& model, const Objective& objective, const StageConfig& cfg, int stage_id,
                        const TrainObserver& observer, long first_iteration) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto [range, target] = update_range(model, cfg.target);
    auto active = std::span(model.params().values).subspan(range.offset, range.length);
    auto restrict = [&](const ParamVector& g) { return std::span(g.values).subspan(range.offset, range.length); };

    TrainReport rep;
    std::string reason;
    LossWeights weights = cfg.weights;
    std::optional<LossWeights> smoothed;
    StopWatch stop(cfg.stop, model);
    long it = first_iteration;

    auto log = [&](const char* opt, const LossBreakdown& b) {
        TrainRecord r{stage_id, opt, it++, b, b_stats(model)};
        if (observer)
            observer(r, model);
        rep.history.push_back(std::move(r));
    };

    auto run_adam = [&](const Phase& ph) {
        AdamState st;
        for (int k = 0; k < ph.max_iters && reason.empty(); ++k) {
            const auto e = objective.evaluate(model, target);
            if (cfg.weight_mode == WeightMode::gradnorm && k % cfg.gradnorm_every == 0) {
                smoothed = gradnorm_weights(e.norms, smoothed ? smoothed : std::optional(cfg.weights));
                weights = *smoothed;
            }
            log("adam", e.breakdown(weights));
            adam_step(st, active, restrict(e.total_gradient(weights)), ph.adam);
            reason = stop.check(model);
        }
    };

    auto run_lbfgs = [&](const Phase& ph) {
        LossBreakdown last;
        auto fg = [&](std::span<const double> xs, std::span<double> gs) {
            std::copy(xs.begin(), xs.end(), active.begin());
            try {
                const auto e = objective.evaluate(model, target);
                const auto total = e.total_gradient(weights);
                const auto tg = restrict(total);
                std::copy(tg.begin(), tg.end(), gs.begin());
                last = e.breakdown(weights);
                return last.total;
            } catch (const NumericalError&) {
                return std::numeric_limits<double>::infinity();
            }
        };
        std::vector<double> x(active.begin(), active.end()), g(x.size());
        double f = fg(x, g);
        if (!std::isfinite(f))
            throw NumericalError("diverged loss");
        LbfgsState st;
        for (int k = 0; k < ph.max_iters && reason.empty(); ++k) {
            log("lbfgs", last);
            const LossBreakdown at_x = last;
            const auto r = lbfgs_step(st, x, f, g, fg, ph.lbfgs);
            std::copy(x.begin(), x.end(), active.begin());
            if (r.status == LbfgsStatus::converged)
                reason = "converged";
            else if (r.status == LbfgsStatus::line_search_failure)
                reason = "line-search failure";
            else
                reason = stop.check(model);
            // A failed search leaves the parameters at x, whose loss is the one just logged.
            if (r.status != LbfgsStatus::ok)
                last = at_x;
        }
    };

    try {
        for (const Phase& ph : cfg.phases) {
            if (!reason.empty())
                break;
            if (ph.kind == Phase::Kind::adam)
                run_adam(ph);
            else
                run_lbfgs(ph);
        }
    } catch (const NumericalError& e) {
        reason = std::string("diverged: ") + e.what();
        rep.diverged = true;
    }
    rep.reason = reason.empty() ? "max iterations" : reason;
    rep.stage_reasons = {rep.reason};
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.model = model;
    return rep;
}

TrainReport train_two_stage(PinnModel& model, const Objective& objective, const StageConfig& stage1,
                            const StageConfig& stage2, const TrainObserver& observer) {
    if (stage1.target != Target::theta1 || stage2.target != Target::theta2)
        throw ConfigError("two-stage training needs stage 1 on theta1 and stage 2 on theta2");
    TrainReport rep;
    if (stage1.max_iters() > 0) {
        rep = train_stage(model, objective, stage1, 1, observer);
        if (rep.diverged)
            return rep;
    } else {
        rep.stage_reasons = {"skipped"};
    }
    const long done = static_cast<long>(rep.history.size());
    TrainReport r2 = train_stage(model, objective, stage2, 2, observer, done);
    rep.history.insert(rep.history.end(), r2.history.begin(), r2.history.end());
    rep.stage_reasons.push_back(r2.reason);
    rep.reason = r2.reason;
    rep.diverged = r2.diverged;
    rep.wall_seconds += r2.wall_seconds;
    rep.model = std::move(r2.model);
    return rep;
}

} // namespace advpinn
