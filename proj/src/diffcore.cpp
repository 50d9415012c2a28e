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

// Parallel kernels. Per point, the forward pass carries the value and the two
// input tangents (d/dx, d/dt) through every layer; the reverse pass walks that
// extended computation back to the parameters. Inner loops run over the
// contiguous feature dimension so they vectorise without reassociation, which
// keeps each point's arithmetic independent of batch size and order.

#include "advpinn/diffcore.hpp"

#include "advpinn/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include <omp.h>

namespace advpinn {

std::string to_string(Target t) {
    switch (t) {
    case Target::theta1: return "theta1";
    case Target::theta2: return "theta2";
    case Target::all: return "all";
    }
    return "all";
}

Target parse_target(const std::string& s) {
    if (s == "theta1")
        return Target::theta1;
    if (s == "theta2")
        return Target::theta2;
    if (s == "all")
        return Target::all;
    throw ConfigError("unknown target segment '" + s + "' (expected theta1, theta2 or all)");
}

namespace {

// Fixed chunk count: the reduction order depends only on the batch, never on the thread count.
constexpr std::size_t kChunks = 16;

struct Net {
    std::size_t D = 0;
    std::vector<std::size_t> w; // widths, w[0] = 2D, w.back() = 1
    std::size_t L = 0;          // number of dense layers
    const double* B = nullptr;
    std::vector<const double*> W, b;
    std::vector<std::vector<double>> WT; // in x out
    std::size_t offB = 0;
    std::vector<std::size_t> offW, offb;
    OutputMap out;

    explicit Net(const PinnModel& m) {
        const auto& arch = m.arch();
        D = static_cast<std::size_t>(arch.fourier_pairs);
        for (int v : arch.widths())
            w.push_back(static_cast<std::size_t>(v));
        L = w.size() - 1;
        B = m.B().data();
        const auto& layout = m.params().layout;
        offB = layout.segment("theta1.B").offset;
        for (std::size_t l = 0; l < L; ++l) {
            W.push_back(m.weight(l).data());
            b.push_back(m.bias(l).data());
            offW.push_back(layout.segment("theta2.W" + std::to_string(l)).offset);
            offb.push_back(layout.segment("theta2.b" + std::to_string(l)).offset);
            std::vector<double> t(w[l] * w[l + 1]);
            for (std::size_t i = 0; i < w[l + 1]; ++i)
                for (std::size_t k = 0; k < w[l]; ++k)
                    t[k * w[l + 1] + i] = W[l][i * w[l] + k];
            WT.push_back(std::move(t));
        }
        out = arch.output;
    }
};

/// Activations of one evaluation; level l holds the input of dense layer l.
struct Tape {
    double x = 0.0, t = 0.0;
    std::vector<std::vector<double>> a, ax, at, sx, st;
    double N = 0.0, Nx = 0.0, Nt = 0.0;

    explicit Tape(const Net& n) {
        for (std::size_t l = 0; l < n.L; ++l) {
            a.emplace_back(n.w[l]);
            ax.emplace_back(n.w[l]);
            at.emplace_back(n.w[l]);
            sx.emplace_back(n.w[l]);
            st.emplace_back(n.w[l]);
        }
    }
};

struct Scratch {
    std::vector<double> s, sx, st;
    std::vector<double> abar, axbar, atbar;
    std::vector<double> sbar, sxbar, stbar;

    explicit Scratch(const Net& n) {
        const std::size_t m = *std::max_element(n.w.begin(), n.w.end());
        for (auto* v : {&s, &sx, &st, &abar, &axbar, &atbar, &sbar, &sxbar, &stbar})
            v->assign(m, 0.0);
    }
};

template <bool Tan>
void forward(const Net& n, double x, double t, Tape& tp, Scratch& sc) {
    tp.x = x;
    tp.t = t;
    {
        double* a0 = tp.a[0].data();
        double* ax0 = tp.ax[0].data();
        double* at0 = tp.at[0].data();
        for (std::size_t i = 0; i < n.D; ++i) {
            const double bx = n.B[2 * i], bt = n.B[2 * i + 1];
            const double z = bx * x + bt * t;
            const double c = std::cos(z), s = std::sin(z);
            a0[i] = c;
            a0[n.D + i] = s;
            if constexpr (Tan) {
                ax0[i] = -s * bx;
                ax0[n.D + i] = c * bx;
                at0[i] = -s * bt;
                at0[n.D + i] = c * bt;
            }
        }
    }
    for (std::size_t l = 0; l < n.L; ++l) {
        const std::size_t in = n.w[l], out = n.w[l + 1];
        double* s = sc.s.data();
        double* sx = sc.sx.data();
        double* st = sc.st.data();
        std::copy(n.b[l], n.b[l] + out, s);
        if constexpr (Tan) {
            std::fill(sx, sx + out, 0.0);
            std::fill(st, st + out, 0.0);
        }
        const double* a = tp.a[l].data();
        const double* ax = tp.ax[l].data();
        const double* at = tp.at[l].data();
        const double* WT = n.WT[l].data();
        for (std::size_t k = 0; k < in; ++k) {
            const double* row = WT + k * out;
            const double ak = a[k];
            for (std::size_t i = 0; i < out; ++i)
                s[i] += ak * row[i];
            if constexpr (Tan) {
                const double axk = ax[k], atk = at[k];
                for (std::size_t i = 0; i < out; ++i) {
                    sx[i] += axk * row[i];
                    st[i] += atk * row[i];
                }
            }
        }
        if (l + 1 < n.L) {
            double* an = tp.a[l + 1].data();
            double* axn = tp.ax[l + 1].data();
            double* atn = tp.at[l + 1].data();
            double* sxn = tp.sx[l + 1].data();
            double* stn = tp.st[l + 1].data();
            for (std::size_t i = 0; i < out; ++i) {
                const double v = std::tanh(s[i]);
                an[i] = v;
                if constexpr (Tan) {
                    const double g = 1.0 - v * v;
                    sxn[i] = sx[i];
                    stn[i] = st[i];
                    axn[i] = g * sx[i];
                    atn[i] = g * st[i];
                }
            }
        } else {
            tp.N = s[0];
            if constexpr (Tan) {
                tp.Nx = sx[0];
                tp.Nt = st[0];
            }
        }
    }
}

template <bool Tan>
EvalRecord output(const Net& n, const Tape& tp) {
    if (n.out.kind == OutputMap::Kind::identity)
        return {tp.N, Tan ? tp.Nx : 0.0, Tan ? tp.Nt : 0.0};
    const double c1 = 0.5 * (n.out.hi - n.out.lo);
    const double u = bounded_output(tp.N, n.out.lo, n.out.hi);
    if constexpr (!Tan)
        return {u, 0.0, 0.0};
    const double dc = c1 * std::cos(tp.N);
    return {u, dc * tp.Nx, dc * tp.Nt};
}

/// Adjoints of (N, Nx, Nt) from adjoints of (u, ux, ut).
void output_adjoint(const Net& n, const Tape& tp, double ub, double uxb, double utb, double& Nb, double& Nxb,
                    double& Ntb) {
    if (n.out.kind == OutputMap::Kind::identity) {
        Nb = ub;
        Nxb = uxb;
        Ntb = utb;
        return;
    }
    const double c1 = 0.5 * (n.out.hi - n.out.lo);
    const double c = std::cos(tp.N), s = std::sin(tp.N);
    Nb = ub * c1 * c - c1 * s * (uxb * tp.Nx + utb * tp.Nt);
    Nxb = uxb * c1 * c;
    Ntb = utb * c1 * c;
}

template <bool Tan>
void backward(const Net& n, const Tape& tp, double Nb, double Nxb, double Ntb, bool want1, bool want2, double* grad,
              Scratch& sc) {
    double* sbar = sc.sbar.data();
    double* sxbar = sc.sxbar.data();
    double* stbar = sc.stbar.data();
    double* abar = sc.abar.data();
    double* axbar = sc.axbar.data();
    double* atbar = sc.atbar.data();
    sbar[0] = Nb;
    if constexpr (Tan) {
        sxbar[0] = Nxb;
        stbar[0] = Ntb;
    }
    for (std::size_t l = n.L; l-- > 0;) {
        const std::size_t in = n.w[l], out = n.w[l + 1];
        const double* a = tp.a[l].data();
        const double* ax = tp.ax[l].data();
        const double* at = tp.at[l].data();
        if (want2) {
            double* Wg = grad + n.offW[l];
            double* bg = grad + n.offb[l];
            for (std::size_t i = 0; i < out; ++i) {
                bg[i] += sbar[i];
                double* row = Wg + i * in;
                const double si = sbar[i];
                if constexpr (Tan) {
                    const double sxi = sxbar[i], sti = stbar[i];
                    for (std::size_t k = 0; k < in; ++k)
                        row[k] += si * a[k] + sxi * ax[k] + sti * at[k];
                } else {
                    for (std::size_t k = 0; k < in; ++k)
                        row[k] += si * a[k];
                }
            }
        }
        if (l == 0 && !want1)
            break;
        std::fill(abar, abar + in, 0.0);
        if constexpr (Tan) {
            std::fill(axbar, axbar + in, 0.0);
            std::fill(atbar, atbar + in, 0.0);
        }
        const double* W = n.W[l];
        for (std::size_t i = 0; i < out; ++i) {
            const double* row = W + i * in;
            const double si = sbar[i];
            for (std::size_t k = 0; k < in; ++k)
                abar[k] += si * row[k];
            if constexpr (Tan) {
                const double sxi = sxbar[i], sti = stbar[i];
                for (std::size_t k = 0; k < in; ++k) {
                    axbar[k] += sxi * row[k];
                    atbar[k] += sti * row[k];
                }
            }
        }
        if (l > 0) {
            const double* sx = tp.sx[l].data();
            const double* st = tp.st[l].data();
            for (std::size_t k = 0; k < in; ++k) {
                const double v = a[k];
                const double g = 1.0 - v * v;
                if constexpr (Tan) {
                    sbar[k] = abar[k] * g - 2.0 * v * g * (axbar[k] * sx[k] + atbar[k] * st[k]);
                    sxbar[k] = axbar[k] * g;
                    stbar[k] = atbar[k] * g;
                } else {
                    sbar[k] = abar[k] * g;
                }
            }
        } else {
            // Fourier layer: a[i] = cos z_i, a[D+i] = sin z_i, z_i = bx*x + bt*t.
            double* Bg = grad + n.offB;
            for (std::size_t i = 0; i < n.D; ++i) {
                const double bx = n.B[2 * i], bt = n.B[2 * i + 1];
                const double c = a[i], s = a[n.D + i];
                double zbar = -s * abar[i] + c * abar[n.D + i];
                double gx = 0.0, gt = 0.0;
                if constexpr (Tan) {
                    const double dcx = axbar[i], dct = atbar[i];
                    const double dsx = axbar[n.D + i], dst = atbar[n.D + i];
                    zbar += -c * (bx * dcx + bt * dct) - s * (bx * dsx + bt * dst);
                    gx = -s * dcx + c * dsx;
                    gt = -s * dct + c * dst;
                }
                Bg[2 * i] += zbar * tp.x + gx;
                Bg[2 * i + 1] += zbar * tp.t + gt;
            }
        }
    }
}

struct Worker {
    Tape main, plus, minus;
    Scratch sc;
    explicit Worker(const Net& n) : main(n), plus(n), minus(n), sc(n) {}
};

/// Evaluates the loss state at point i; fills the tapes.
LocalState local_state(const Net& n, const PointLoss& loss, std::size_t i, Worker& wk) {
    const Point p = loss.points[i];
    LocalState st;
    st.x = p.x;
    st.t = p.t;
    EvalRecord r;
    if (loss.use_input_derivs) {
        forward<true>(n, p.x, p.t, wk.main, wk.sc);
        r = output<true>(n, wk.main);
    } else {
        forward<false>(n, p.x, p.t, wk.main, wk.sc);
        r = output<false>(n, wk.main);
    }
    st.u = r.u;
    st.ux = r.du_dx;
    st.ut = r.du_dt;
    if (loss.use_plus) {
        forward<false>(n, p.x + loss.shift, p.t, wk.plus, wk.sc);
        st.u_plus = output<false>(n, wk.plus).u;
    }
    if (loss.use_minus) {
        forward<false>(n, p.x - loss.shift, p.t, wk.minus, wk.sc);
        st.u_minus = output<false>(n, wk.minus).u;
    }
    return st;
}

class ExceptionSlot {
public:
    void capture() {
        std::lock_guard lock(mu_);
        if (!ptr_)
            ptr_ = std::current_exception();
    }
    void rethrow() const {
        if (ptr_)
            std::rethrow_exception(ptr_);
    }

private:
    std::mutex mu_;
    std::exception_ptr ptr_;
};

std::pair<std::size_t, std::size_t> chunk_range(std::size_t c, std::size_t nchunks, std::size_t n) {
    return {c * n / nchunks, (c + 1) * n / nchunks};
}

void require_points(const std::span<const Point> points) {
    if (points.empty())
        throw Error("evaluation requires at least one point");
    for (const auto& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.t))
            throw Error("evaluation point must be finite");
}

} // namespace

double evaluate(const PinnModel& model, double x, double t) {
    model.check_finite();
    const Net n(model);
    Tape tp(n);
    Scratch sc(n);
    forward<false>(n, x, t, tp, sc);
    return output<false>(n, tp).u;
}

std::vector<double> evaluate_values(const PinnModel& model, std::span<const Point> points) {
    require_points(points);
    model.check_finite();
    const Net n(model);
    std::vector<double> out(points.size());
#pragma omp parallel
    {
        Tape tp(n);
        Scratch sc(n);
#pragma omp for schedule(static)
        for (std::size_t i = 0; i < points.size(); ++i) {
            forward<false>(n, points[i].x, points[i].t, tp, sc);
            out[i] = output<false>(n, tp).u;
        }
    }
    return out;
}

std::vector<EvalRecord> evaluate_with_input_derivs(const PinnModel& model, std::span<const Point> points) {
    require_points(points);
    model.check_finite();
    const Net n(model);
    std::vector<EvalRecord> out(points.size());
#pragma omp parallel
    {
        Tape tp(n);
        Scratch sc(n);
#pragma omp for schedule(static)
        for (std::size_t i = 0; i < points.size(); ++i) {
            forward<true>(n, points[i].x, points[i].t, tp, sc);
            out[i] = output<true>(n, tp);
        }
    }
    return out;
}

double loss_value(const PinnModel& model, const PointLoss& loss) {
    require_points(loss.points);
    model.check_finite();
    const Net n(model);
    const std::size_t np = loss.points.size();
    const std::size_t nchunks = std::min(kChunks, np);
    std::vector<double> partial(nchunks, 0.0);
    ExceptionSlot err;
#pragma omp parallel
    {
        Worker wk(n);
#pragma omp for schedule(dynamic, 1)
        for (std::size_t c = 0; c < nchunks; ++c) {
            try {
                const auto [lo, hi] = chunk_range(c, nchunks, np);
                double acc = 0.0;
                for (std::size_t i = lo; i < hi; ++i) {
                    LocalAdjoint adj;
                    acc += loss.local(i, local_state(n, loss, i, wk), adj);
                }
                partial[c] = acc;
            } catch (...) {
                err.capture();
            }
        }
    }
    err.rethrow();
    double sum = 0.0;
    for (double v : partial)
        sum += v;
    const double value = loss.scale * sum;
    if (!std::isfinite(value))
        throw NumericalError("diverged loss");
    return value;
}

LossGradient loss_gradient(const PinnModel& model, const PointLoss& loss, Target target) {
    require_points(loss.points);
    model.check_finite();
    const Net n(model);
    const std::size_t np = loss.points.size();
    const std::size_t nchunks = std::min(kChunks, np);
    const std::size_t P = model.params().size();
    const bool want1 = trains_theta1(target);
    const bool want2 = trains_theta2(target);

    std::vector<double> partial(nchunks, 0.0);
    std::vector<std::vector<double>> grads(nchunks);
    ExceptionSlot err;
#pragma omp parallel
    {
        Worker wk(n);
#pragma omp for schedule(dynamic, 1)
        for (std::size_t c = 0; c < nchunks; ++c) {
            try {
                auto& g = grads[c];
                g.assign(P, 0.0);
                const auto [lo, hi] = chunk_range(c, nchunks, np);
                double acc = 0.0;
                for (std::size_t i = lo; i < hi; ++i) {
                    const LocalState st = local_state(n, loss, i, wk);
                    LocalAdjoint adj;
                    acc += loss.local(i, st, adj);
                    double Nb, Nxb, Ntb;
                    output_adjoint(n, wk.main, adj.u, loss.use_input_derivs ? adj.ux : 0.0,
                                   loss.use_input_derivs ? adj.ut : 0.0, Nb, Nxb, Ntb);
                    if (loss.use_input_derivs)
                        backward<true>(n, wk.main, Nb, Nxb, Ntb, want1, want2, g.data(), wk.sc);
                    else
                        backward<false>(n, wk.main, Nb, 0.0, 0.0, want1, want2, g.data(), wk.sc);
                    if (loss.use_plus && adj.u_plus != 0.0) {
                        output_adjoint(n, wk.plus, adj.u_plus, 0.0, 0.0, Nb, Nxb, Ntb);
                        backward<false>(n, wk.plus, Nb, 0.0, 0.0, want1, want2, g.data(), wk.sc);
                    }
                    if (loss.use_minus && adj.u_minus != 0.0) {
                        output_adjoint(n, wk.minus, adj.u_minus, 0.0, 0.0, Nb, Nxb, Ntb);
                        backward<false>(n, wk.minus, Nb, 0.0, 0.0, want1, want2, g.data(), wk.sc);
                    }
                }
                partial[c] = acc;
            } catch (...) {
                err.capture();
            }
        }
    }
    err.rethrow();

    LossGradient result;
    result.gradient = ParamVector(model.params().layout);
    auto& out = result.gradient.values;
    double sum = 0.0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        sum += partial[c];
        const auto& g = grads[c];
        for (std::size_t j = 0; j < P; ++j)
            out[j] += g[j];
    }
    result.value = loss.scale * sum;
    if (!std::isfinite(result.value))
        throw NumericalError("diverged loss");
    for (double& v : out)
        v *= loss.scale;
    if (auto bad = result.gradient.first_non_finite_segment(); !bad.empty())
        throw NumericalError("non-finite gradient in segment " + bad);
    return result;
}

} // namespace advpinn
