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


// Acceptance gate: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset; the exit status is non-zero if any selected criterion fails.

#include "advpinn/config.hpp"
#include "advpinn/diffcore.hpp"
#include "advpinn/error.hpp"
#include "advpinn/experiment.hpp"
#include "advpinn/losses.hpp"
#include "advpinn/model.hpp"
#include "advpinn/postprocess.hpp"
#include "advpinn/problem.hpp"
#include "advpinn/reference.hpp"

#include "helpers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifndef ADVPINN_CONFIG_DIR
#define ADVPINN_CONFIG_DIR "configs"
#endif

using namespace advpinn;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

RunConfig recipe(const std::string& name) { return load_run_config(std::string(ADVPINN_CONFIG_DIR) + "/" + name); }

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v)
        s += e;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// ---- 1 ------------------------------------------------------------------------

AdvectionProblem with_source(AdvectionProblem p, SpeedSpec speed, const std::string& source) {
    p.speed = std::move(speed);
    p.source = Expr::parse(source);
    p.validate();
    return p;
}

AdvectionProblem robin_problem() {
    AdvectionProblem p = catalog("linear-pulses");
    BoundaryCondition left;
    left.type = BoundaryCondition::Type::robin;
    left.alpha = 1.0;
    left.beta = 0.3;
    left.data.otherwise = Expr::parse("0.2*sin(3*t)");
    BoundaryCondition right = left;
    right.side = Side::right;
    right.alpha = 0.5;
    right.beta = -0.7;
    p.bc = {left, right};
    p.validate();
    return p;
}

Outcome gradient_correctness() {
    const auto factored =
        with_source(catalog("nonlinear-single-pulse"), SpeedSpec::factored("(1-x)*(1.5+t)"), "0.3*u*x - 0.1*t");
    const auto general = with_source(catalog("nonlinear-single-pulse"), SpeedSpec::general("u*u*(1-x) + 0.2*sin(t)"),
                                     "-0.5*u*x");
    const auto jump = catalog("linear-pulses-bc-jump");
    const auto robin = robin_problem();
    const UpwindConfig up{0.01, 100.0};

    std::size_t checked = 0, bad = 0;
    std::vector<std::string> failing;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto model = testing::random_model(seed, testing::small_arch(3, {5, 4}, 1.5));
        const auto pts = testing::random_points(seed + 100, 24);
        std::vector<double> xs;
        for (const auto& p : pts)
            xs.push_back(p.x);
        std::vector<BcPoint> bcs;
        for (std::size_t i = 0; i < 12; ++i)
            bcs.push_back({i % 2 ? Side::right : Side::left, pts[i].t});
        std::vector<BcPoint> left_only;
        for (std::size_t i = 0; i < 12; ++i)
            left_only.push_back({Side::left, pts[i].t});

        const std::vector<std::pair<std::string, PointLoss>> terms{
            {"standard", pde_term(general, pts, LossVariant::standard)},
            {"upwind-max", pde_term(factored, pts, LossVariant::upwind_max, up)},
            {"upwind-r", pde_term(factored, pts, LossVariant::upwind_r, up)},
            {"upwind-general", pde_term(general, pts, LossVariant::upwind_general, up)},
            {"ic", ic_term(jump, xs)},
            {"bc-dirichlet", bc_term(jump, left_only)},
            {"bc-robin", bc_term(robin, bcs)},
        };
        for (const auto& [name, term] : terms) {
            const auto g = loss_gradient(model, term);
            const auto mism = testing::fd_check(
                model, [&](const PinnModel& m) { return loss_value(m, term); }, g.gradient.values);
            checked += g.gradient.size();
            bad += mism.size();
            if (!mism.empty())
                failing.push_back(name + "/seed" + std::to_string(seed));
        }
    }
    std::string detail = std::to_string(checked) + " components, " + std::to_string(bad) + " mismatches";
    for (const auto& f : failing)
        detail += " " + f;
    return {bad == 0, detail};
}

// ---- 2 ------------------------------------------------------------------------

Outcome mae_experiment() {
    const auto cfg = recipe("mae_experiment.yaml");
    const auto ref = reference_slices(cfg);
    const auto runs = run_seeds(cfg, ref);
    std::vector<double> raw, filtered, interior;
    for (const auto& r : runs) {
        if (r.report.diverged)
            return {false, "seed " + std::to_string(r.seed) + " diverged: " + r.report.reason};
        raw.push_back(r.metrics.raw);
        filtered.push_back(r.metrics.filtered);
        interior.push_back(r.metrics.filtered_interior);
    }
    const double a = mean(raw), b = mean(filtered), c = mean(interior);
    const bool pass = a < 0.05 && a > b && b > c;
    return {pass, std::to_string(runs.size()) + " seeds, mean MAE raw " + fmt(a) + ", filtered " + fmt(b) +
                      ", filtered without boundary " + fmt(c)};
}

// ---- 3, 4 ---------------------------------------------------------------------

struct Paired {
    std::vector<double> a, b;
};

Paired paired_runs(const RunConfig& arm_a, const RunConfig& arm_b, const std::function<double(const RunResult&)>& score) {
    const auto ref = reference_slices(arm_a);
    Paired p;
    for (const auto& r : run_seeds(arm_a, ref))
        p.a.push_back(r.report.diverged ? std::numeric_limits<double>::infinity() : score(r));
    for (const auto& r : run_seeds(arm_b, ref))
        p.b.push_back(r.report.diverged ? std::numeric_limits<double>::infinity() : score(r));
    return p;
}

Outcome two_stage_benefit() {
    const auto cfg = recipe("two_stage.yaml");
    const auto arms = compare_arms(cfg, CompareAxis::two_stage_vs_single);
    const auto p = paired_runs(arms[0].config, arms[1].config, [](const RunResult& r) { return r.final_loss.total; });
    const auto w = count_wins(p.a, p.b);
    return {w.a >= 7.0, "two-stage lower final loss in " + fmt(w.a) + "/" + std::to_string(p.a.size()) +
                            " pairs (mean " + fmt(mean(p.a)) + " vs " + fmt(mean(p.b)) + ")"};
}

Outcome fourier_weighting() {
    const auto weighted = recipe("fourier_weighting.yaml");
    auto plain = weighted;
    plain.stage1.weights = LossWeights{};
    const auto p = paired_runs(weighted, plain, [](const RunResult& r) { return r.final_loss.l_ic; });
    const auto w = count_wins(p.a, p.b);
    return {w.a >= 7.0, "weighted stage one lower final IC loss in " + fmt(w.a) + "/" + std::to_string(p.a.size()) +
                            " pairs (mean " + fmt(mean(p.a)) + " vs " + fmt(mean(p.b)) + ")"};
}

// ---- 5, 6 ---------------------------------------------------------------------

struct UpwindStudy {
    std::vector<double> mae_standard, mae_upwind;
    std::vector<double> mass_standard, mass_upwind;
    std::vector<BoundCheck> bounds;
    std::vector<std::string> notes;
};

double intermediate_mass(const std::vector<double>& v) { return fraction_in(v, 0.2, 0.8); }

const UpwindStudy& upwind_study() {
    static std::optional<UpwindStudy> study;
    if (study)
        return *study;
    study.emplace();
    const auto cfg = recipe("upwind_single_pulse.yaml");
    const auto conv = fd_self_convergence(cfg.problem, cfg.oracle.dx, cfg.oracle.cfl, 1.0);
    study->notes.push_back("oracle self-convergence shift " + fmt(conv.max_shift) + " at dx " + fmt(conv.dx));
    const auto ref = reference_slices(cfg);
    const auto last = ref.t.size() - 1;
    const auto arms = compare_arms(cfg, CompareAxis::standard_vs_upwind);
    for (std::size_t a = 0; a < 2; ++a) {
        const auto& arm = arms[a].config;
        for (std::uint64_t seed : arm.seeds) {
            const auto r = run_seed(arm, seed, ref);
            if (r.report.diverged) {
                study->notes.push_back(arms[a].label + " seed " + std::to_string(seed) + " diverged");
                (a == 0 ? study->mae_standard : study->mae_upwind).push_back(std::numeric_limits<double>::infinity());
                (a == 0 ? study->mass_standard : study->mass_upwind).push_back(1.0);
                continue;
            }
            const auto& slice = r.slices[last];
            (a == 0 ? study->mae_standard : study->mae_upwind).push_back(mae(slice.raw, ref.rows[last]));
            (a == 0 ? study->mass_standard : study->mass_upwind).push_back(intermediate_mass(slice.raw));
            const auto& c = arm.collocation;
            const auto pts = sample_collocation(arm.problem, c.n_pde, c.n_ic, c.n_bc, c.seed + seed, c.sampling).pde;
            study->bounds.push_back(upwind_bound_check(r.report.model, arm.problem, pts, arm.upwind, arms[1].config.variant));
        }
    }
    return *study;
}

Outcome upwind_fixes_lagging() {
    const auto& s = upwind_study();
    const auto w = count_wins(s.mae_upwind, s.mae_standard);
    const double ms = mean(s.mass_standard), mu = mean(s.mass_upwind);
    const bool pass = w.a >= 8.0 && mu < ms;
    std::string detail = "upwind lower MAE at t=1 in " + fmt(w.a) + "/" + std::to_string(s.mae_upwind.size()) +
                         " pairs (mean " + fmt(mean(s.mae_upwind)) + " vs " + fmt(mean(s.mae_standard)) +
                         "), intermediate mass " + fmt(mu) + " vs " + fmt(ms);
    for (const auto& n : s.notes)
        detail += "; " + n;
    return {pass, detail};
}

Outcome bound_diagnostic() {
    const auto& s = upwind_study();
    int ok = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& b : s.bounds) {
        ok += b.holds(1e-6);
        worst = std::max(worst, b.l_standard_max - b.l_upwind_max - b.bound_rhs);
    }
    return {ok == static_cast<int>(s.bounds.size()) && !s.bounds.empty(),
            std::to_string(ok) + "/" + std::to_string(s.bounds.size()) + " models satisfy the bound (worst slack " +
                fmt(-worst) + ")"};
}

// ---- 7 ------------------------------------------------------------------------

Outcome surrogate_convergence() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    // Each surrogate is sampled 0.1 away from its own switching surface: b = c for the max,
    // |b| = |c| for the magnitude selector.
    auto sample = [&](auto separation) {
        std::vector<std::pair<double, double>> pairs;
        while (pairs.size() < 1000) {
            const double b = u(rng), c = u(rng);
            if (separation(b, c) >= 0.1)
                pairs.emplace_back(b, c);
        }
        return pairs;
    };
    const auto max_pairs = sample([](double b, double c) { return std::abs(b - c); });
    const auto r_pairs = sample([](double b, double c) { return std::abs(std::abs(b) - std::abs(c)); });
    const double alphas[] = {10.0, 100.0, 1000.0};
    double err_max[3] = {}, err_r[3] = {};
    for (int k = 0; k < 3; ++k) {
        for (const auto& [b, c] : max_pairs)
            err_max[k] = std::max(err_max[k], std::abs(smooth_max(b, c, alphas[k]) - std::max(b, c)));
        for (const auto& [b, c] : r_pairs)
            err_r[k] = std::max(err_r[k], std::abs(smooth_r(b, c, alphas[k]) - select_r(b, c)));
    }
    // Each tenfold increase of alpha must cut the worst error at least tenfold (or reach zero).
    auto geometric = [](const double* e) { return e[1] <= 0.1 * e[0] && e[2] <= 0.1 * e[1] && e[0] > 0.0; };
    double tie_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double b = u(rng);
        for (double a : alphas) {
            tie_err = std::max(tie_err, std::abs(smooth_max(b, b, a) - b));
            tie_err = std::max(tie_err, std::abs(smooth_r(b, b, a) - b));
        }
    }
    const bool pass = geometric(err_max) && geometric(err_r) && tie_err <= 4.0 * std::numeric_limits<double>::epsilon();
    return {pass, "max errors smooth_max " + fmt(err_max[0]) + "/" + fmt(err_max[1]) + "/" + fmt(err_max[2]) +
                      ", smooth_r " + fmt(err_r[0]) + "/" + fmt(err_r[1]) + "/" + fmt(err_r[2]) +
                      ", tie error " + fmt(tie_err)};
}

// ---- 8 ------------------------------------------------------------------------

AdvectionProblem smooth_wave() {
    AdvectionProblem p;
    p.name = "smooth-wave";
    p.x_min = 0.0;
    p.x_max = 2.0;
    p.t_max = 1.0;
    p.speed = SpeedSpec::constant(2.0);
    p.ic.otherwise = Expr::parse("sin(pi*x/2)");
    BoundaryCondition bc;
    bc.data.otherwise = Expr::parse("sin(-pi*t)");
    p.bc = {bc};
    p.validate();
    return p;
}

std::pair<double, double> data_range(const AdvectionProblem& p) {
    auto [lo, hi] = p.ic.range_on(p.x_min, p.x_max);
    for (const auto& b : p.bc) {
        const auto [blo, bhi] = b.data.range_on(0.0, p.t_max);
        lo = std::min(lo, blo);
        hi = std::max(hi, bhi);
    }
    return {lo, hi};
}

Outcome oracle_consistency() {
    std::vector<std::string> parts;
    bool pass = true;

    // First-order convergence against the exact travelling wave.
    const auto wave = smooth_wave();
    double err[2];
    for (int k = 0; k < 2; ++k) {
        const double dx = 1.0 / (100.0 * (1 << k));
        const auto fd = upwind_fd(wave, dx, 0.9, {1.0});
        double s = 0.0;
        for (std::size_t i = 0; i < fd.x.size(); ++i)
            s += std::abs(fd.value(0, i) - std::sin(std::numbers::pi * (fd.x[i] - 2.0) / 2.0));
        err[k] = s * dx;
    }
    const double ratio = err[0] / err[1];
    pass &= ratio >= 1.6 && ratio <= 2.4;
    parts.push_back("convergence ratio " + fmt(ratio));

    // Backtrace vs upwind FD on the u-independent catalog problems.
    const double dx = 1.0 / 2000.0;
    const std::vector<double> times{0.25, 0.5, 0.75, 1.0};
    for (const auto& name : {"linear-pulses", "linear-pulses-bc-jump", "sin-speed"}) {
        const auto p = catalog(name);
        const auto fd = upwind_fd(p, dx, 0.9, times);
        const auto bt = sample_reference(p, OracleMethod::characteristics_rk4, fd.x, times, 1e-3);
        double gap = 0.0;
        for (std::size_t j = 0; j < times.size(); ++j)
            gap = std::max(gap, l1_distance(fd.slice(j), bt.slice(j), dx));
        const double bound = 5.0 * dx * data_total_variation(p);
        pass &= gap < bound;
        parts.push_back(std::string(name) + " L1 gap " + fmt(gap) + (gap < bound ? " < " : " >= ") + fmt(bound));
    }

    // Maximum principle on every source-free catalog problem.
    int runs = 0, violations = 0;
    for (const auto& name : catalog_names()) {
        const auto p = catalog(name);
        if (!p.source_is_zero())
            continue;
        const auto [lo, hi] = data_range(p);
        const auto fd = upwind_fd(p, dx, 0.9, times);
        ++runs;
        for (double v : fd.values)
            if (v < lo - 1e-12 || v > hi + 1e-12) {
                ++violations;
                break;
            }
    }
    pass &= violations == 0;
    parts.push_back("maximum principle violated in " + std::to_string(violations) + "/" + std::to_string(runs) +
                    " runs");
    std::string detail;
    for (const auto& s : parts)
        detail += (detail.empty() ? "" : "; ") + s;
    return {pass, detail};
}

// ---- 9 ------------------------------------------------------------------------

Outcome filter_invariants() {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> len(6, 200), half(1, 4), extra(0, 4), kind(0, 3);
    std::normal_distribution<double> val(0.0, 1.0);
    long violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int m = half(rng);
        const int k = 2 * m + 1;
        const auto n = static_cast<std::size_t>(std::max(len(rng), k + 1));
        const int margin = std::min<int>(m + extra(rng), static_cast<int>(n / 2));
        std::vector<double> v(n);
        const int shape = kind(rng);
        for (auto& e : v)
            e = shape == 0 ? std::round(val(rng) * 2.0) : val(rng);
        const auto f = median_filter_1d(v, k, margin);

        std::multiset<double> pool(v.begin(), v.end());
        const double lo = *pool.begin(), hi = *pool.rbegin();
        for (std::size_t i = 0; i < n; ++i) {
            const bool in_margin = i < static_cast<std::size_t>(margin) || i >= n - static_cast<std::size_t>(margin);
            if (in_margin && f[i] != v[i])
                ++violations;
            if (!pool.count(f[i]) || f[i] < lo || f[i] > hi)
                ++violations;
        }
        auto mono = v;
        std::sort(mono.begin(), mono.end());
        if (shape == 1)
            std::reverse(mono.begin(), mono.end());
        if (median_filter_1d(mono, k, margin) != mono)
            ++violations;
    }
    return {violations == 0, "10000 sequences, " + std::to_string(violations) + " violations"};
}

// ---- 10 -----------------------------------------------------------------------

Outcome bounded_output_constraint() {
    long probes = 0, violations = 0;
    const std::pair<double, double> bounds[] = {{0.0, 1.0}, {-1.0, 1.0}, {-0.3, 2.7}, {5.0, 5.5}};
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto arch = testing::small_arch(16, {32, 32}, 4.0);
        arch.output = OutputMap::bounded(bounds[seed].first, bounds[seed].second);
        auto model = testing::random_model(seed, arch);
        for (double& v : model.params().values)
            v *= 3.0;
        const auto pts = testing::random_points(seed + 1000, 250000, -10.0, 10.0, -5.0, 5.0);
        const auto u = evaluate_values(model, pts);
        for (double e : u) {
            ++probes;
            if (!(e >= arch.output.lo && e <= arch.output.hi))
                ++violations;
        }
    }
    return {violations == 0, std::to_string(probes) + " probes, " + std::to_string(violations) + " outside bounds"};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "gradient correctness", gradient_correctness},
        {2, "filtered MAE experiment", mae_experiment},
        {3, "two-stage benefit", two_stage_benefit},
        {4, "adaptive Fourier weighting", fourier_weighting},
        {5, "upwind loss fixes lagging", upwind_fixes_lagging},
        {6, "upwind bound diagnostic", bound_diagnostic},
        {7, "surrogate convergence", surrogate_convergence},
        {8, "oracle self-consistency", oracle_consistency},
        {9, "filter invariants", filter_invariants},
        {10, "bounded output constraint", bounded_output_constraint},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!selected.empty() && !selected.count(c.id))
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("[%s] criterion %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
