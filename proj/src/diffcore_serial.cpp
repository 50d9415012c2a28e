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

// Serial reference implementation: one point at a time, textbook loop order,
// strict point-order summation. Slow on purpose; used to cross-check the
// parallel kernels and as the baseline in the kernel benchmark.

#include "advpinn/diffcore.hpp"

#include "advpinn/error.hpp"

#include <cmath>

namespace advpinn::serial {

namespace {

struct Layer {
    std::size_t in = 0, out = 0;
    std::span<const double> W, b;
};

/// Forward record for one point with tangents (the value-only path just ignores them).
struct Trace {
    double x = 0, t = 0;
    std::vector<double> z;                   // Fourier arguments
    std::vector<std::vector<double>> h, hx, ht; // layer inputs
    std::vector<std::vector<double>> px, pt;    // pre-activation tangents of hidden layers (index = level)
    double N = 0, Nx = 0, Nt = 0;
};

struct Model {
    const PinnModel& m;
    std::size_t D;
    std::vector<Layer> layers;

    explicit Model(const PinnModel& pm) : m(pm), D(static_cast<std::size_t>(pm.arch().fourier_pairs)) {
        const auto w = pm.arch().widths();
        for (std::size_t l = 0; l + 1 < w.size(); ++l)
            layers.push_back({static_cast<std::size_t>(w[l]), static_cast<std::size_t>(w[l + 1]), pm.weight(l),
                              pm.bias(l)});
    }
};

Trace run_forward(const Model& md, double x, double t) {
    Trace tr;
    tr.x = x;
    tr.t = t;
    const auto B = md.m.B();
    const std::size_t D = md.D;
    std::vector<double> g(2 * D), gx(2 * D), gt(2 * D);
    tr.z.resize(D);
    for (std::size_t i = 0; i < D; ++i) {
        tr.z[i] = B[2 * i] * x + B[2 * i + 1] * t;
        g[i] = std::cos(tr.z[i]);
        g[D + i] = std::sin(tr.z[i]);
        gx[i] = -std::sin(tr.z[i]) * B[2 * i];
        gx[D + i] = std::cos(tr.z[i]) * B[2 * i];
        gt[i] = -std::sin(tr.z[i]) * B[2 * i + 1];
        gt[D + i] = std::cos(tr.z[i]) * B[2 * i + 1];
    }
    tr.h.push_back(g);
    tr.hx.push_back(gx);
    tr.ht.push_back(gt);
    tr.px.emplace_back();
    tr.pt.emplace_back();
    for (std::size_t l = 0; l < md.layers.size(); ++l) {
        const Layer& L = md.layers[l];
        std::vector<double> p(L.out), px(L.out), pt(L.out);
        for (std::size_t i = 0; i < L.out; ++i) {
            double s = L.b[i], sx = 0.0, st = 0.0;
            for (std::size_t k = 0; k < L.in; ++k) {
                s += L.W[i * L.in + k] * tr.h[l][k];
                sx += L.W[i * L.in + k] * tr.hx[l][k];
                st += L.W[i * L.in + k] * tr.ht[l][k];
            }
            p[i] = s;
            px[i] = sx;
            pt[i] = st;
        }
        if (l + 1 == md.layers.size()) {
            tr.N = p[0];
            tr.Nx = px[0];
            tr.Nt = pt[0];
        } else {
            std::vector<double> a(L.out), ax(L.out), at(L.out);
            for (std::size_t i = 0; i < L.out; ++i) {
                a[i] = std::tanh(p[i]);
                const double d = 1.0 - a[i] * a[i];
                ax[i] = d * px[i];
                at[i] = d * pt[i];
            }
            tr.h.push_back(a);
            tr.hx.push_back(ax);
            tr.ht.push_back(at);
            tr.px.push_back(px);
            tr.pt.push_back(pt);
        }
    }
    return tr;
}

EvalRecord record(const Model& md, const Trace& tr) {
    const auto& o = md.m.arch().output;
    if (o.kind == OutputMap::Kind::identity)
        return {tr.N, tr.Nx, tr.Nt};
    const double half = 0.5 * (o.hi - o.lo);
    return {bounded_output(tr.N, o.lo, o.hi), half * std::cos(tr.N) * tr.Nx, half * std::cos(tr.N) * tr.Nt};
}

/// Accumulates d(loss)/d(params) given adjoints of u, u_x, u_t at one traced point.
void run_backward(const Model& md, const Trace& tr, double ub, double uxb, double utb, Target target,
                  std::vector<double>& grad) {
    const auto& o = md.m.arch().output;
    double Nb = ub, Nxb = uxb, Ntb = utb;
    if (o.kind == OutputMap::Kind::bounded) {
        const double half = 0.5 * (o.hi - o.lo);
        Nb = ub * half * std::cos(tr.N) - half * std::sin(tr.N) * (uxb * tr.Nx + utb * tr.Nt);
        Nxb = uxb * half * std::cos(tr.N);
        Ntb = utb * half * std::cos(tr.N);
    }
    const auto& layout = md.m.params().layout;
    std::vector<double> pb{Nb}, pxb{Nxb}, ptb{Ntb};
    for (std::size_t l = md.layers.size(); l-- > 0;) {
        const Layer& L = md.layers[l];
        if (trains_theta2(target)) {
            const std::size_t ow = layout.segment("theta2.W" + std::to_string(l)).offset;
            const std::size_t ob = layout.segment("theta2.b" + std::to_string(l)).offset;
            for (std::size_t i = 0; i < L.out; ++i) {
                grad[ob + i] += pb[i];
                for (std::size_t k = 0; k < L.in; ++k)
                    grad[ow + i * L.in + k] += pb[i] * tr.h[l][k] + pxb[i] * tr.hx[l][k] + ptb[i] * tr.ht[l][k];
            }
        }
        std::vector<double> hb(L.in, 0.0), hxb(L.in, 0.0), htb(L.in, 0.0);
        for (std::size_t k = 0; k < L.in; ++k) {
            for (std::size_t i = 0; i < L.out; ++i) {
                hb[k] += L.W[i * L.in + k] * pb[i];
                hxb[k] += L.W[i * L.in + k] * pxb[i];
                htb[k] += L.W[i * L.in + k] * ptb[i];
            }
        }
        if (l > 0) {
            pb.assign(L.in, 0.0);
            pxb.assign(L.in, 0.0);
            ptb.assign(L.in, 0.0);
            for (std::size_t k = 0; k < L.in; ++k) {
                const double a = tr.h[l][k];
                const double d = 1.0 - a * a;
                // d/dp of (1 - tanh^2 p) = -2 a d
                pb[k] = hb[k] * d + (hxb[k] * tr.px[l][k] + htb[k] * tr.pt[l][k]) * (-2.0 * a * d);
                pxb[k] = hxb[k] * d;
                ptb[k] = htb[k] * d;
            }
        } else if (trains_theta1(target)) {
            const auto B = md.m.B();
            const std::size_t ob = layout.segment("theta1.B").offset;
            for (std::size_t i = 0; i < md.D; ++i) {
                const double z = tr.z[i], bx = B[2 * i], bt = B[2 * i + 1];
                const double c = std::cos(z), s = std::sin(z);
                // gamma_c = c, gamma_cx = -s*bx, gamma_ct = -s*bt, gamma_s = s, gamma_sx = c*bx, gamma_st = c*bt
                const double zb = hb[i] * (-s) + hxb[i] * (-c * bx) + htb[i] * (-c * bt) + hb[md.D + i] * c +
                                  hxb[md.D + i] * (-s * bx) + htb[md.D + i] * (-s * bt);
                grad[ob + 2 * i] += zb * tr.x + hxb[i] * (-s) + hxb[md.D + i] * c;
                grad[ob + 2 * i + 1] += zb * tr.t + htb[i] * (-s) + htb[md.D + i] * c;
            }
        }
    }
}

struct PointEval {
    LocalState state;
    Trace main, plus, minus;
};

PointEval eval_point(const Model& md, const PointLoss& loss, std::size_t i) {
    PointEval pe;
    const Point p = loss.points[i];
    pe.main = run_forward(md, p.x, p.t);
    const EvalRecord r = record(md, pe.main);
    pe.state.x = p.x;
    pe.state.t = p.t;
    pe.state.u = r.u;
    if (loss.use_input_derivs) {
        pe.state.ux = r.du_dx;
        pe.state.ut = r.du_dt;
    }
    if (loss.use_plus) {
        pe.plus = run_forward(md, p.x + loss.shift, p.t);
        pe.state.u_plus = record(md, pe.plus).u;
    }
    if (loss.use_minus) {
        pe.minus = run_forward(md, p.x - loss.shift, p.t);
        pe.state.u_minus = record(md, pe.minus).u;
    }
    return pe;
}

} // namespace

std::vector<EvalRecord> evaluate_with_input_derivs(const PinnModel& model, std::span<const Point> points) {
    model.check_finite();
    const Model md(model);
    std::vector<EvalRecord> out;
    out.reserve(points.size());
    for (const auto& p : points)
        out.push_back(record(md, run_forward(md, p.x, p.t)));
    return out;
}

double loss_value(const PinnModel& model, const PointLoss& loss) {
    model.check_finite();
    const Model md(model);
    double sum = 0.0;
    for (std::size_t i = 0; i < loss.points.size(); ++i) {
        LocalAdjoint adj;
        sum += loss.local(i, eval_point(md, loss, i).state, adj);
    }
    const double value = loss.scale * sum;
    if (!std::isfinite(value))
        throw NumericalError("diverged loss");
    return value;
}

LossGradient loss_gradient(const PinnModel& model, const PointLoss& loss, Target target) {
    model.check_finite();
    const Model md(model);
    LossGradient res;
    res.gradient = ParamVector(model.params().layout);
    auto& g = res.gradient.values;
    double sum = 0.0;
    for (std::size_t i = 0; i < loss.points.size(); ++i) {
        const PointEval pe = eval_point(md, loss, i);
        LocalAdjoint adj;
        sum += loss.local(i, pe.state, adj);
        if (loss.use_input_derivs)
            run_backward(md, pe.main, adj.u, adj.ux, adj.ut, target, g);
        else
            run_backward(md, pe.main, adj.u, 0.0, 0.0, target, g);
        if (loss.use_plus)
            run_backward(md, pe.plus, adj.u_plus, 0.0, 0.0, target, g);
        if (loss.use_minus)
            run_backward(md, pe.minus, adj.u_minus, 0.0, 0.0, target, g);
    }
    res.value = loss.scale * sum;
    if (!std::isfinite(res.value))
        throw NumericalError("diverged loss");
    for (double& v : g)
        v *= loss.scale;
    if (auto bad = res.gradient.first_non_finite_segment(); !bad.empty())
        throw NumericalError("non-finite gradient in segment " + bad);
    return res;
}

} // namespace advpinn::serial
