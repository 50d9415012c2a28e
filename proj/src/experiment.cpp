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


#include "advpinn/experiment.hpp"

#include "advpinn/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <set>

namespace advpinn {

std::string to_string(Sampling s) { return s == Sampling::uniform ? "uniform" : "grid"; }

Sampling parse_sampling(const std::string& s) {
    if (s == "uniform")
        return Sampling::uniform;
    if (s == "grid")
        return Sampling::grid;
    throw ConfigError("unknown sampling '" + s + "'; valid: uniform, grid");
}

void RunConfig::validate() const {
    problem.validate();
    model.validate();
    if (model.output.kind == OutputMap::Kind::bounded && !(model.output.lo < model.output.hi))
        throw ConfigError("invalid bounds");
    check_variant(problem, variant);
    upwind.validate();
    stage1.validate();
    stage2.validate();
    if (!model.fourier_trainable && stage1.max_iters() > 0)
        throw ConfigError("stage one needs a trainable Fourier matrix");
    if (stage1.target != Target::theta1 || stage2.target != Target::theta2)
        throw ConfigError("stage one must train theta1 and stage two theta2");
    if (collocation.n_pde == 0 || collocation.n_ic == 0 || (!problem.bc.empty() && collocation.n_bc == 0))
        throw ConfigError("collocation counts must be >= 1");
    filter.validate();
    if (slice_times.empty())
        throw ConfigError("at least one slice time is required");
    for (double t : slice_times)
        if (!(t >= 0.0 && t <= problem.t_max))
            throw ConfigError("slice time outside [0, t_max]");
    if (!std::is_sorted(slice_times.begin(), slice_times.end()))
        throw ConfigError("slice times must be sorted");
    if (!(oracle.dx > 0.0) || !(oracle.cfl > 0.0 && oracle.cfl <= 1.0) || !(oracle.dt_ode > 0.0))
        throw ConfigError("oracle requires dx > 0, 0 < cfl <= 1 and dt_ode > 0");
    if (seeds.empty())
        throw ConfigError("at least one seed is required");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
        throw ConfigError("seeds must be distinct");
}

OracleMethod RunConfig::oracle_method() const { return oracle.method.value_or(default_oracle(problem)); }

ReferenceSlices reference_slices(const RunConfig& cfg) {
    ReferenceSlices out;
    out.method = cfg.oracle_method();
    out.x = linspace(cfg.problem.x_min, cfg.problem.x_max, static_cast<std::size_t>(cfg.filter.n_x));
    out.t = cfg.slice_times;
    if (out.method == OracleMethod::upwind_fd) {
        const auto ref = upwind_fd(cfg.problem, cfg.oracle.dx, cfg.oracle.cfl, out.t);
        for (std::size_t j = 0; j < out.t.size(); ++j) {
            std::vector<double> row(out.x.size());
            for (std::size_t i = 0; i < out.x.size(); ++i)
                row[i] = ref.at(j, out.x[i]);
            out.rows.push_back(std::move(row));
        }
    } else {
        const auto ref = sample_reference(cfg.problem, out.method, out.x, out.t, cfg.oracle.dt_ode);
        for (std::size_t j = 0; j < out.t.size(); ++j)
            out.rows.push_back(ref.slice(j));
    }
    return out;
}

RunResult run_seed(const RunConfig& cfg, std::uint64_t seed, const ReferenceSlices& reference,
                   const TrainObserver& observer) {
    RunResult r;
    r.seed = seed;
    const auto data = sample_collocation(cfg.problem, cfg.collocation.n_pde, cfg.collocation.n_ic, cfg.collocation.n_bc,
                                         cfg.collocation.seed + seed, cfg.collocation.sampling);
    const Objective objective(cfg.problem, data, cfg.variant, cfg.upwind);
    PinnModel model = init_model(cfg.model, seed);
    r.report = train_two_stage(model, objective, cfg.stage1, cfg.stage2, observer);
    if (r.report.diverged)
        return r;
    r.final_loss = objective.value(model, LossWeights{});
    r.slices = filter_solution(model, cfg.problem, cfg.slice_times, cfg.filter.n_x, cfg.filter);
    r.metrics = filter_metrics(r.slices, reference.rows, cfg.filter.margin);
    return r;
}

std::vector<RunResult> run_seeds(const RunConfig& cfg, const ReferenceSlices& reference) {
    const auto n = static_cast<long>(cfg.seeds.size());
    std::vector<RunResult> out(cfg.seeds.size());
    std::vector<std::exception_ptr> errors(cfg.seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        try {
            out[u] = run_seed(cfg, cfg.seeds[u], reference);
        } catch (...) {
            errors[u] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

std::string to_string(CompareAxis a) {
    switch (a) {
    case CompareAxis::two_stage_vs_single: return "two-stage-vs-single";
    case CompareAxis::standard_vs_upwind: return "standard-vs-upwind";
    case CompareAxis::filtered_vs_raw: return "filtered-vs-raw";
    }
    return {};
}

CompareAxis parse_compare_axis(const std::string& s) {
    for (auto a : {CompareAxis::two_stage_vs_single, CompareAxis::standard_vs_upwind, CompareAxis::filtered_vs_raw})
        if (to_string(a) == s)
            return a;
    throw ConfigError("unknown axis '" + s + "'; valid: two-stage-vs-single, standard-vs-upwind, filtered-vs-raw");
}

std::vector<Arm> compare_arms(const RunConfig& cfg, CompareAxis axis) {
    switch (axis) {
    case CompareAxis::two_stage_vs_single: {
        RunConfig single = cfg;
        const int moved = cfg.stage1.max_iters();
        for (auto& p : single.stage1.phases)
            p.max_iters = 0;
        single.stage1.stop.reset();
        if (single.stage2.phases.empty())
            single.stage2.phases.push_back(Phase{});
        single.stage2.phases.front().max_iters += moved;
        return {{"two-stage", cfg}, {"single-stage", single}};
    }
    case CompareAxis::standard_vs_upwind: {
        RunConfig standard = cfg;
        standard.variant = LossVariant::standard;
        RunConfig upwind = cfg;
        if (cfg.variant == LossVariant::standard)
            upwind.variant = cfg.problem.speed.kind == SpeedSpec::Kind::factored ? LossVariant::upwind_r
                                                                                 : LossVariant::upwind_general;
        return {{"standard", standard}, {to_string(upwind.variant), upwind}};
    }
    case CompareAxis::filtered_vs_raw: return {{"raw", cfg}};
    }
    return {};
}

double arm_score(const RunResult& r, CompareAxis axis, std::size_t arm) {
    switch (axis) {
    case CompareAxis::two_stage_vs_single: return r.final_loss.total;
    case CompareAxis::standard_vs_upwind: return r.metrics.raw;
    case CompareAxis::filtered_vs_raw: return arm == 0 ? r.metrics.raw : r.metrics.filtered;
    }
    return 0.0;
}

WinCount count_wins(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw Error("count_wins: arms differ in length");
    WinCount w;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i])
            w.a += 1.0;
        else if (b[i] < a[i])
            w.b += 1.0;
        else {
            w.a += 0.5;
            w.b += 0.5;
        }
    }
    return w;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace advpinn
