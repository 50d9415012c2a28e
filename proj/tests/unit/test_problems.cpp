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


#include "advpinn/config.hpp"
#include "advpinn/error.hpp"
#include "advpinn/problem.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

using namespace advpinn;

TEST_CASE("piecewise lookup") {
    const auto lp = catalog("linear-pulses");
    CHECK(eval_piecewise(lp.ic, 0.9) == 1.0);
    CHECK(eval_piecewise(lp.ic, 1.9) == 0.0);
    CHECK(eval_piecewise(lp.ic, 0.1) == 0.6);
    CHECK(eval_piecewise(lp.ic, 0.3) == 0.6);
    CHECK(eval_piecewise(lp.ic, 0.30001) == 0.0);
    const auto jump = catalog("linear-pulses-bc-jump");
    CHECK(eval_piecewise(jump.bc[0].data, 0.5) == 0.5);
    CHECK(eval_piecewise(jump.bc[0].data, 0.4999) == 0.0);

    PiecewiseFunction overlap;
    overlap.pieces = {{Interval::range(0.0, 1.0), Expr(1.0)}, {Interval::range(1.0, 2.0), Expr(2.0)}};
    overlap.otherwise = Expr(-1.0);
    CHECK(overlap(1.0) == 1.0);
    CHECK(overlap(1.5) == 2.0);
    CHECK(overlap(2.5) == -1.0);
    CHECK(overlap(1.0) == overlap(1.0));
}

TEST_CASE("catalog") {
    const auto lp = catalog("linear-pulses");
    CHECK(lp.speed.kind == SpeedSpec::Kind::constant);
    CHECK(lp.speed(0.3, 0.4, 0.9) == 2.0);
    CHECK(lp.x_min == 0.0);
    CHECK(lp.x_max == 2.0);
    CHECK(lp.t_max == 1.0);
    CHECK(lp.bounds == Bounds{0.0, 1.0});
    CHECK(catalog("nonlinear-single-pulse").ic(1.0) == 1.0);
    const auto three = catalog("nonlinear-three-pulse");
    CHECK(three.ic(1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(three.bounds == Bounds{-1.0, 1.0});
    const auto sin_speed = catalog("sin-speed");
    CHECK(sin_speed.speed(0.5, 0.3, 7.0) == doctest::Approx(0.6 * std::sin(0.9)).epsilon(1e-15));
    const auto single = catalog("nonlinear-single-pulse");
    CHECK(single.speed(0.5, 0.5, 0.8) == doctest::Approx(0.8 * 0.5 * 2.0).epsilon(1e-15));

    try {
        catalog("linear");
        FAIL("no throw");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        for (const auto& n : catalog_names())
            CHECK(msg.find(n) != std::string::npos);
    }
}

TEST_CASE("catalog initial data stays within bounds") {
    for (const auto& name : catalog_names()) {
        const auto p = catalog(name);
        REQUIRE(p.bounds);
        for (double x : linspace(p.x_min, p.x_max, 1000)) {
            const double v = p.ic(x);
            CHECK(v >= p.bounds->lo);
            CHECK(v <= p.bounds->hi);
        }
    }
}

TEST_CASE("problem validation") {
    auto p = catalog("linear-pulses");
    p.x_max = p.x_min;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = catalog("linear-pulses");
    p.t_max = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = catalog("linear-pulses");
    p.bc.clear();
    CHECK_THROWS_WITH_AS(p.validate(), "no boundary condition on an inflow side", ConfigError);
    p = catalog("linear-pulses");
    p.speed = SpeedSpec::constant(-2.0);
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.bc[0].side = Side::right;
    CHECK_NOTHROW(p.validate());
    p = catalog("linear-pulses");
    p.speed = SpeedSpec::spacetime("x*u");
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("collocation sampling") {
    const auto p = catalog("linear-pulses");
    SUBCASE("grid") {
        const auto s = sample_collocation(p, 200, 5, 4, 0, Sampling::grid);
        CHECK(s.ic == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
        CHECK(s.pde.size() == 200);
        CHECK(s.bc.size() == 4);
        CHECK(s.bc.front().t == 0.0);
        CHECK(s.bc.back().t == 1.0);
        CHECK(s.pde.front() == Point{0.0, 0.0});
        CHECK(s.pde.back() == Point{2.0, 1.0});
    }
    SUBCASE("uniform") {
        const auto a = sample_collocation(p, 10000, 100, 50, 7);
        const auto b = sample_collocation(p, 10000, 100, 50, 7);
        CHECK(a.pde == b.pde);
        CHECK(a.ic == b.ic);
        CHECK(a.bc == b.bc);
        CHECK(sample_collocation(p, 10000, 100, 50, 8).pde != a.pde);
        double mean = 0.0;
        for (const auto& q : a.pde) {
            CHECK(q.x >= 0.0);
            CHECK(q.x <= 2.0);
            CHECK(q.t >= 0.0);
            CHECK(q.t <= 1.0);
            mean += q.x;
        }
        mean /= 10000.0;
        CHECK(mean >= 0.95);
        CHECK(mean <= 1.05);
        CHECK(a.ic.size() == 100);
        CHECK(a.bc.size() == 50);
        for (const auto& q : a.bc)
            CHECK(q.side == Side::left);
    }
    CHECK_THROWS_AS(sample_collocation(p, 0, 5, 5, 0), ConfigError);
}

TEST_CASE("catalog problems round-trip through the config format") {
    for (const auto& name : catalog_names()) {
        const auto p = catalog(name);
        const auto text = emit_problem_config(p);
        const auto back = parse_problem_config(text);
        CHECK(back == p);
        CHECK(emit_problem_config(back) == text);
        CHECK(parse_problem_config(name) == p);
    }
}

TEST_CASE("inline problem config") {
    const auto p = parse_problem_config(R"yaml(
name: robin-demo
domain: {x_min: -1, x_max: 1, t_max: 0.5}
speed: {kind: spacetime, expr: "1 + 0.5*sin(pi*x)"}
source: "-0.1*u"
ic:
  pieces:
    - {lo: -0.5, hi: 0, value: "exp(-x^2)"}
  otherwise: 0
bc:
  - side: left
    type: robin
    alpha: 1
    beta: 0.25
    data: {pieces: [{lo: 0.2, value: 1}], otherwise: 0}
bounds: {lo: 0, hi: 1}
)yaml");
    CHECK(p.name == "robin-demo");
    CHECK(p.x_min == -1.0);
    CHECK(p.ic(-0.25) == doctest::Approx(std::exp(-0.0625)));
    CHECK(p.source(0.0, 0.0, 2.0) == doctest::Approx(-0.2));
    REQUIRE(p.bc.size() == 1);
    CHECK(p.bc[0].type == BoundaryCondition::Type::robin);
    CHECK(p.bc[0].beta == 0.25);
    CHECK(p.bc[0].data.pieces[0].where.hi() == std::numeric_limits<double>::infinity());
    CHECK(p.bc[0].data(0.3) == 1.0);
    CHECK(parse_problem_config(emit_problem_config(p)) == p);
}

TEST_CASE("config errors carry positions") {
    auto position = [](const std::string& text) {
        try {
            parse_problem_config(text);
        } catch (const ConfigError& e) {
            return std::pair<int, int>{e.line(), e.column()};
        }
        return std::pair<int, int>{0, 0};
    };
    CHECK(position("name: x\ndomain: {x_min: 0, x_max: 1, t_max: 1}\nspeed: {kind: constant, expr: \"2*\"}\nic: 0\n"
                   "bc: [{side: left}]\n")
              .first == 3);
    CHECK(position("name: x\ndomain: {x_min: 0, x_max: oops, t_max: 1}\n") == std::pair<int, int>{2, 27});
    CHECK(position("name: x\nfoo: 1\n").first == 2);
    CHECK(position("name: [unclosed\n").first >= 1);
    CHECK(position("linear-pulse").first == 1);
    CHECK_THROWS_AS(parse_run_config("problem: linear-pulses\nloss: {variant: upwind-r}\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("problem: linear-pulses\nseeds: [1, 1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("problem: linear-pulses\nmodel: {hidden: [4, 0]}\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("problem: linear-pulses\nstage2: {phases: [{optimizer: lbfgs, lr: 1}]}\n"),
                    ConfigError);
}

TEST_CASE("run config defaults and round trip") {
    const auto c = parse_run_config("problem: nonlinear-single-pulse\n");
    CHECK(c.problem == catalog("nonlinear-single-pulse"));
    CHECK(c.model == Architecture{});
    CHECK(c.stage1 == default_stage1());
    CHECK(c.stage2 == default_stage2());
    CHECK(c.seeds == std::vector<std::uint64_t>{0});
    CHECK(c.oracle_method() == OracleMethod::upwind_fd);
    const auto text = emit_run_config(c);
    CHECK(parse_run_config(text) == c);
    CHECK(emit_run_config(parse_run_config(text)) == text);

    const auto d = parse_run_config(R"yaml(
problem: nonlinear-single-pulse
model: {fourier_pairs: 8, sigma: 2.5, hidden: [16, 16], output: bounded}
loss: {variant: upwind-r, h: 0.02, alpha: 50}
stage1: {stop: null, phases: [{optimizer: adam, iters: 30, lr: 0.01}]}
stage2:
  weight_mode: fixed
  weights: {ic: 4}
  phases:
    - {optimizer: adam, iters: 40}
    - {optimizer: lbfgs, iters: 10, memory: 5}
collocation: {n_pde: 300, n_ic: 40, n_bc: 20, seed: 3, sampling: grid}
postprocess: {k: 3, margin: 1, n_x: 101, times: [0.5, 1]}
oracle: {method: upwind-fd, dx: 0.001}
seeds: [4, 2]
output: results
)yaml");
    CHECK(d.model.output == OutputMap::bounded(0.0, 1.0));
    CHECK(d.variant == LossVariant::upwind_r);
    CHECK(d.upwind.h == 0.02);
    CHECK_FALSE(d.stage1.stop);
    CHECK(d.stage2.weights == LossWeights{1.0, 4.0, 1.0});
    REQUIRE(d.stage2.phases.size() == 2);
    CHECK(d.stage2.phases[1].lbfgs.memory == 5);
    CHECK(d.collocation.sampling == Sampling::grid);
    CHECK(d.slice_times == std::vector<double>{0.5, 1.0});
    CHECK(d.seeds == std::vector<std::uint64_t>{4, 2});
    CHECK(parse_run_config(emit_run_config(d)) == d);
}
