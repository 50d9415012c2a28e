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


#include "advpinn/error.hpp"
#include "advpinn/losses.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace advpinn;
using advpinn::testing::fd_check;
using advpinn::testing::random_model;
using advpinn::testing::random_points;
using advpinn::testing::small_arch;

namespace {

double sig(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double sa(double b, double a) { return sig(2 * a * b) * b - sig(-2 * a * b) * b; }
double sm(double b, double c, double a) { return sig(a * (b - c)) * b + sig(-a * (b - c)) * c; }
double sr(double b, double c, double a) {
    const double q = sa(b, a) - sa(c, a);
    return sig(a * q) * b + sig(-a * q) * c;
}

/// Network that ignores x: all Fourier rows have zero x-frequency.
PinnModel x_independent(std::uint64_t seed) {
    PinnModel m = random_model(seed);
    auto B = m.params().view("theta1.B");
    for (std::size_t i = 0; i < B.size(); i += 2)
        B[i] = 0.0;
    return m;
}

PinnModel constant_model(double c) {
    PinnModel m = random_model(1);
    for (auto* seg : {"theta2.W2"})
        std::fill(m.params().view(seg).begin(), m.params().view(seg).end(), 0.0);
    m.params().view("theta2.b2")[0] = c;
    return m;
}

/// Residuals of u_t + coef * u_x - f recomputed from plain evaluations.
std::vector<double> residuals_by_hand(const PinnModel& m, const AdvectionProblem& p, const std::vector<Point>& pts,
                                      LossVariant v, double h, double alpha) {
    const auto rec = evaluate_with_input_derivs(m, pts);
    std::vector<double> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto [x, t] = pts[i];
        const double u = rec[i].u;
        const double vp = evaluate(m, x + h, t), wm = evaluate(m, x - h, t);
        double coef = 0.0;
        switch (v) {
        case LossVariant::standard: coef = p.speed(x, t, u); break;
        case LossVariant::upwind_max: coef = sm(u, vp, alpha) * p.speed.factor(x, t); break;
        case LossVariant::upwind_r: coef = sr(vp, wm, alpha) * p.speed.factor(x, t); break;
        case LossVariant::upwind_general: coef = sr(p.speed(x, t, vp), p.speed(x, t, wm), alpha); break;
        }
        out.push_back(rec[i].du_dt + coef * rec[i].du_dx - p.source(x, t, u));
    }
    return out;
}

double mean_sq(const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r)
        s += v * v;
    return s / static_cast<double>(r.size());
}

AdvectionProblem general_problem() {
    AdvectionProblem p = catalog("nonlinear-single-pulse");
    p.speed = SpeedSpec::general("u^2 + t");
    p.source = Expr::parse("0.3*sin(x)*u");
    return p;
}

} // namespace

TEST_CASE("sigmoid is stable at large arguments") {
    CHECK(sigmoid(1000.0) == 1.0);
    CHECK(sigmoid(-1000.0) == 0.0);
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(-30.0) == doctest::Approx(std::exp(-30.0)).epsilon(1e-12));
}

TEST_CASE("smooth abs") {
    CHECK(smooth_abs(0.0, 100.0) == 0.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double b = nd(rng), a = std::exp(nd(rng));
        CHECK(smooth_abs(-b, a) == smooth_abs(b, a));
        CHECK(smooth_abs(b, a) >= 0.0);
        CHECK(smooth_abs(b, a) <= std::abs(b));
        CHECK(std::abs(b) - smooth_abs(b, a) <= 2.0 * std::abs(b) * std::exp(-2.0 * a * std::abs(b)) + 1e-15);
    }
    CHECK(std::abs(smooth_abs(1.0, 100.0) - 1.0) <= 2.0 * std::exp(-200.0));
}

TEST_CASE("smooth max") {
    CHECK(smooth_max(0.7, 0.7, 3.0) == 0.7);
    CHECK(smooth_max(0.7, 0.7, 1e4) == 0.7);
    CHECK(std::abs(smooth_max(1.0, 0.0, 100.0) - 1.0) <= 1e-40);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ud(-2.0, 2.0);
    for (int k = 0; k < 500; ++k) {
        const double b = ud(rng), c = ud(rng), a = 50.0;
        const double v = smooth_max(b, c, a);
        CHECK(v == smooth_max(c, b, a));
        CHECK(v >= std::min(b, c));
        CHECK(v <= std::max(b, c));
        CHECK(std::abs(v - std::max(b, c)) <=
              std::abs(b - c) * sigmoid(-a * std::abs(b - c)) + 4e-16 * (std::abs(b) + std::abs(c)));
    }
}

TEST_CASE("select r and smooth r") {
    CHECK(select_r(2.0, -3.0) == -3.0);
    CHECK(select_r(-3.0, 2.0) == -3.0);
    CHECK(select_r(2.0, -2.0) == 2.0);
    for (double b : {-1.3, 0.0, 0.4})
        CHECK(smooth_r(b, b, 100.0) == b);
    CHECK(std::abs(smooth_r(2.0, -3.0, 100.0) + 3.0) <= 1e-40);
    double prev = 1.0;
    for (double a : {10.0, 100.0, 1000.0}) {
        const double e = std::abs(smooth_r(0.5, -0.45, a) - select_r(0.5, -0.45));
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("surrogate partials agree with finite differences") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    const double h = 1e-7;
    for (int k = 0; k < 200; ++k) {
        const double b = ud(rng), c = ud(rng), a = 5.0;
        const double fa = (smooth_abs(b + h, a) - smooth_abs(b - h, a)) / (2 * h);
        CHECK(smooth_abs_deriv(b, a) == doctest::Approx(fa).epsilon(1e-6));
        const auto m = smooth_max_d(b, c, a);
        CHECK(m.d_b == doctest::Approx((smooth_max(b + h, c, a) - smooth_max(b - h, c, a)) / (2 * h)).epsilon(1e-6));
        CHECK(m.d_c == doctest::Approx((smooth_max(b, c + h, a) - smooth_max(b, c - h, a)) / (2 * h)).epsilon(1e-6));
        const auto r = smooth_r_d(b, c, a);
        CHECK(r.d_b == doctest::Approx((smooth_r(b + h, c, a) - smooth_r(b - h, c, a)) / (2 * h)).epsilon(1e-6));
        CHECK(r.d_c == doctest::Approx((smooth_r(b, c + h, a) - smooth_r(b, c - h, a)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("standard residual") {
    const auto p = catalog("linear-pulses");
    const auto pts = random_points(4, 5);
    CHECK(pde_loss_standard(constant_model(0.3), p, pts) == 0.0);

    SUBCASE("planted travelling wave has zero residual") {
        const auto l = pde_term(p, pts, LossVariant::standard);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto [x, t] = pts[i];
            const double z = x - 2.0 * t;
            LocalState s{x, t, std::tanh(z), 1.0 - std::tanh(z) * std::tanh(z),
                         -2.0 * (1.0 - std::tanh(z) * std::tanh(z)), 0.0, 0.0};
            LocalAdjoint adj;
            CHECK(l.local(i, s, adj) <= 1e-20);
        }
    }
    SUBCASE("random model matches recomputation") {
        for (const char* name : {"linear-pulses", "sin-speed", "nonlinear-three-pulse"}) {
            const auto q = catalog(name);
            const auto m = random_model(9);
            const double want = mean_sq(residuals_by_hand(m, q, pts, LossVariant::standard, 0.0, 1.0));
            CHECK(pde_loss_standard(m, q, pts) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("upwind variants") {
    const auto single = catalog("nonlinear-single-pulse");
    const auto three = catalog("nonlinear-three-pulse");
    const auto pts = random_points(6, 7);
    const UpwindConfig cfg{0.01, 100.0};

    SUBCASE("x-independent network gives the standard loss") {
        const auto m = x_independent(4);
        const double s = pde_loss_standard(m, single, pts);
        CHECK(pde_loss_upwind_max(m, single, pts, cfg) == doctest::Approx(s).epsilon(1e-14));
        CHECK(pde_loss_upwind_r(m, single, pts, cfg) == doctest::Approx(s).epsilon(1e-14));
        CHECK(pde_loss_upwind_general(m, single, pts, cfg) == doctest::Approx(s).epsilon(1e-14));
    }
    SUBCASE("zero shift gives the standard loss") {
        const auto m = random_model(5);
        const UpwindConfig zero{0.0, 100.0};
        for (const auto* p : {&single, &three}) {
            const double s = pde_loss_standard(m, *p, pts);
            CHECK(std::abs(pde_loss_upwind_max(m, *p, pts, zero) - s) <= 1e-12);
            CHECK(std::abs(pde_loss_upwind_r(m, *p, pts, zero) - s) <= 1e-12);
            CHECK(std::abs(pde_loss_upwind_general(m, *p, pts, zero) - s) <= 1e-12);
        }
    }
    SUBCASE("random models match recomputation") {
        const auto m = random_model(12);
        const auto gp = general_problem();
        CHECK(pde_loss_upwind_max(m, single, pts, cfg) ==
              doctest::Approx(mean_sq(residuals_by_hand(m, single, pts, LossVariant::upwind_max, 0.01, 100.0)))
                  .epsilon(1e-12));
        CHECK(pde_loss_upwind_r(m, three, pts, cfg) ==
              doctest::Approx(mean_sq(residuals_by_hand(m, three, pts, LossVariant::upwind_r, 0.01, 100.0)))
                  .epsilon(1e-12));
        CHECK(pde_loss_upwind_general(m, gp, pts, cfg) ==
              doctest::Approx(mean_sq(residuals_by_hand(m, gp, pts, LossVariant::upwind_general, 0.01, 100.0)))
                  .epsilon(1e-12));
    }
    SUBCASE("general with u-independent speed equals standard") {
        auto p = catalog("sin-speed");
        p.speed = SpeedSpec::general("0.6*sin(6*x*t)");
        const auto m = random_model(13);
        CHECK(std::abs(pde_loss_upwind_general(m, p, pts, cfg) - pde_loss_standard(m, p, pts)) <= 1e-12);
    }
    SUBCASE("general with factored speed equals upwind-r where the selection saturates") {
        // On [0, 1) the factor of the single-pulse speed is positive.
        const auto m = random_model(14, small_arch(4, {8}, 3.0));
        const UpwindConfig wide{0.3, 100.0};
        const auto cand = random_points(15, 400, 0.05, 0.95);
        std::vector<Point> sat;
        for (const auto& q : cand) {
            const double v = evaluate(m, q.x + wide.h, q.t), w = evaluate(m, q.x - wide.h, q.t);
            const double g = single.speed.factor(q.x, q.t);
            if (std::abs(smooth_abs(v, 100) - smooth_abs(w, 100)) * 100 > 40 &&
                std::abs(smooth_abs(v * g, 100) - smooth_abs(w * g, 100)) * 100 > 40)
                sat.push_back(q);
        }
        REQUIRE(sat.size() >= 5);
        const double r = pde_loss_upwind_r(m, single, sat, wide);
        const double g = pde_loss_upwind_general(m, single, sat, wide);
        CHECK(std::abs(r - g) <= 1e-12 * std::max(1.0, r));
    }
    SUBCASE("factored variants reject other speeds") {
        CHECK_THROWS_AS(pde_term(catalog("linear-pulses"), pts, LossVariant::upwind_r, cfg), ConfigError);
        CHECK_THROWS_AS(pde_term(catalog("sin-speed"), pts, LossVariant::upwind_max, cfg), ConfigError);
    }
}

TEST_CASE("initial and boundary losses") {
    const auto p = catalog("linear-pulses");
    const auto zero = constant_model(0.0);
    const std::vector<double> outside{0.4, 0.7, 1.95};
    CHECK(ic_loss(zero, p, outside) == 0.0);
    CHECK(ic_loss(zero, p, std::vector<double>{0.9}) == 1.0);
    const std::vector<BcPoint> left{{Side::left, 0.1}, {Side::left, 0.9}};
    CHECK(bc_loss(zero, p, left) == 0.0);
    CHECK(bc_loss(constant_model(0.5), catalog("linear-pulses-bc-jump"), left) == doctest::Approx(0.125));
    CHECK_THROWS_AS(bc_term(p, std::vector<BcPoint>{{Side::right, 0.3}}), ConfigError);

    SUBCASE("Robin residual of a planted solution") {
        AdvectionProblem q = p;
        BoundaryCondition bc;
        bc.side = Side::right;
        bc.type = BoundaryCondition::Type::robin;
        bc.alpha = 0.0;
        bc.beta = 1.0;
        // planted u = sin(x - t): du/dx at x = 2 is cos(2 - t)
        bc.data.pieces = {{Interval::range(-1e9, 1e9), Expr::parse("cos(2 - t)")}};
        q.bc.push_back(bc);
        const std::vector<BcPoint> pts{{Side::right, 0.2}, {Side::right, 0.7}};
        const auto l = bc_term(q, pts);
        CHECK(l.use_input_derivs);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double t = pts[i].t;
            LocalState s{2.0, t, std::sin(2.0 - t), std::cos(2.0 - t), -std::cos(2.0 - t), 0.0, 0.0};
            LocalAdjoint adj;
            CHECK(l.local(i, s, adj) <= 1e-20);
        }
    }
}

TEST_CASE("total loss") {
    const auto b = total_loss(0.1, 0.2, 0.3, {1, 1, 1});
    CHECK(b.total == 0.1 + 0.2 + 0.3);
    CHECK(b.total == doctest::Approx(0.6));
    const auto c = total_loss(0.1, 0.2, 0.3, {1, 10, 1});
    CHECK(c.total - b.total == doctest::Approx(9 * 0.2));
    CHECK(total_loss(0, 0, 0, {1, 10, 1}).total == 0.0);
    CHECK_THROWS_AS((LossWeights{0, 0, 0}.validate()), ConfigError);
    CHECK_THROWS_AS((LossWeights{-1, 0, 0}.validate()), ConfigError);
}

TEST_CASE("recorded squared residuals bound the mean") {
    const auto p = catalog("nonlinear-three-pulse");
    const auto pts = random_points(31, 50);
    const auto m = random_model(32);
    auto sq = std::make_shared<std::vector<double>>();
    const auto l = pde_term(p, pts, LossVariant::upwind_r, {}, sq);
    const double v = loss_value(m, l);
    const double mx = *std::max_element(sq->begin(), sq->end());
    CHECK(mx >= v);
    const auto hand = residuals_by_hand(m, p, pts, LossVariant::upwind_r, 0.01, 100.0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK((*sq)[i] == doctest::Approx(hand[i] * hand[i]).epsilon(1e-12));
}

TEST_CASE("gradient-norm weights") {
    const auto eq = gradnorm_weights({2.0, 2.0, 2.0});
    CHECK(eq == LossWeights{1.0, 1.0, 1.0});
    CHECK(gradnorm_weights({2.0, 2.0, 2.0}, LossWeights{1, 1, 1}) == LossWeights{1, 1, 1});
    const auto half = gradnorm_weights({2.0, 1.0, 2.0});
    CHECK(half.ic == doctest::Approx(5.0 / 3.0));
    CHECK(half.bc == doctest::Approx(5.0 / 6.0));
    CHECK(half.pde == 1.0);
    CHECK(gradnorm_weights({1.0, 0.0, 1.0}).ic == kGradnormMax);
    // With three terms the mean ratio never drops below 1/3, so only the upper clip can bind.
    CHECK(gradnorm_weights({1.0, 1e9, 1.0}).ic == doctest::Approx(1.0 / 3.0));
    const auto ema = gradnorm_weights({2.0, 1.0, 2.0}, LossWeights{1, 1, 1});
    CHECK(ema.ic == doctest::Approx(0.9 + 0.1 * 5.0 / 3.0));
    CHECK_THROWS_AS(gradnorm_weights({0, 0, 0}), NumericalError);
}

TEST_CASE("bound diagnostic") {
    const auto p = catalog("nonlinear-single-pulse");
    const auto pts = random_points(41, 30);
    const auto c = upwind_bound_check(constant_model(0.0), p, pts, {});
    CHECK(c.l_standard_max == 0.0);
    CHECK(c.l_upwind_max == 0.0);
    CHECK(c.bound_rhs == 0.0);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto m = random_model(50 + s);
        CHECK(upwind_bound_check(m, p, pts, {}).holds(1e-8));
        CHECK(upwind_bound_check(m, p, pts, {}, LossVariant::upwind_max).holds(1e-8));
    }
    CHECK_THROWS_AS(upwind_bound_check(random_model(1), catalog("linear-pulses"), pts, {}), ConfigError);
}

TEST_CASE("loss gradients agree with finite differences") {
    const auto three = catalog("nonlinear-three-pulse");
    const auto gp = general_problem();
    const UpwindConfig cfg{0.05, 10.0};
    auto robin = catalog("linear-pulses");
    robin.bc[0].type = BoundaryCondition::Type::robin;
    robin.bc[0].alpha = 0.7;
    robin.bc[0].beta = 0.4;
    const auto pts = random_points(2, 5);
    const std::vector<double> xs{0.3, 0.95, 1.4};
    const std::vector<BcPoint> bcs{{Side::left, 0.2}, {Side::left, 0.6}, {Side::left, 0.9}};
    const std::vector<PointLoss> losses{
        pde_term(gp, pts, LossVariant::standard),        pde_term(three, pts, LossVariant::upwind_max, cfg),
        pde_term(three, pts, LossVariant::upwind_r, cfg), pde_term(gp, pts, LossVariant::upwind_general, cfg),
        ic_term(three, xs),                              bc_term(three, bcs),
        bc_term(robin, bcs)};
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        const auto m = random_model(70 + seed);
        for (const auto& l : losses) {
            const auto g = loss_gradient(m, l);
            CHECK(fd_check(m, [&](const PinnModel& q) { return loss_value(q, l); }, g.gradient.values).empty());
        }
    }
}
