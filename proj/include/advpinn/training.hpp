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

#include "advpinn/diffcore.hpp"
#include "advpinn/losses.hpp"
#include "advpinn/problem.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace advpinn {

/// The three loss terms over one collocation set. One instance serves one run at a
/// time: evaluation records the squared PDE residuals in shared scratch.
class Objective {
public:
    Objective(const AdvectionProblem& problem, const CollocationSet& data, LossVariant variant,
              const UpwindConfig& upwind = {});

    /// Per-term values and gradients at one parameter point; weights are applied afterwards.
    struct Eval {
        double l_pde = 0.0, l_ic = 0.0, l_bc = 0.0;
        double residual_max = 0.0;
        ParamVector g_pde, g_ic, g_bc;
        GradNorms norms;

        LossBreakdown breakdown(const LossWeights& w) const;
        ParamVector total_gradient(const LossWeights& w) const;
    };

    LossBreakdown value(const PinnModel& model, const LossWeights& weights) const;
    Eval evaluate(const PinnModel& model, Target target) const;

    LossVariant variant() const noexcept { return variant_; }
    std::size_t num_pde() const noexcept { return pde_.points.size(); }

private:
    LossVariant variant_;
    PointLoss pde_, ic_, bc_;
    std::shared_ptr<std::vector<double>> squared_;

    double residual_max() const;
};

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    bool operator==(const AdamConfig&) const = default;
};

struct AdamState {
    std::vector<double> m, v;
    long step = 0;
};

/// One bias-corrected Adam update of `params` in place; the state is sized on first use.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> gradient, const AdamConfig& cfg);

struct LbfgsConfig {
    int memory = 10;
    int max_line_search = 20;
    bool operator==(const LbfgsConfig&) const = default;
};

inline constexpr double kArmijoC1 = 1e-4;
inline constexpr double kLineSearchShrink = 0.5;

/// Loss at x; writes the gradient into g.
using FunGrad = std::function<double(std::span<const double> x, std::span<double> g)>;

struct LbfgsState {
    std::deque<std::vector<double>> s, y;
    std::deque<double> rho;
};

enum class LbfgsStatus { ok, converged, line_search_failure };

struct LbfgsResult {
    LbfgsStatus status = LbfgsStatus::ok;
    int evaluations = 0;
    bool steepest_descent = false;
};

/// Search direction from the two-loop recursion (-g/|g| with empty memory).
std::vector<double> lbfgs_direction(const LbfgsState& state, std::span<const double> g);

/// One iteration: direction, backtracking Armijo search, memory update.
/// On success x, f and g hold the accepted point; on failure they are unchanged.
LbfgsResult lbfgs_step(LbfgsState& state, std::vector<double>& x, double& f, std::vector<double>& g,
                       const FunGrad& fg, const LbfgsConfig& cfg);

struct BStopRule {
    enum class Watch { max_abs, mean_abs };
    Watch watch = Watch::mean_abs;
    int plateau_window = 200;
    double plateau_rel_tol = 1e-3;
    std::optional<double> hard_cap;

    void validate() const;
    bool operator==(const BStopRule&) const = default;
};

struct BStats {
    double mean_abs = 0.0;
    double max_abs = 0.0;
};

BStats b_stats(const PinnModel& model);

struct Phase {
    enum class Kind { adam, lbfgs };
    Kind kind = Kind::adam;
    int max_iters = 1000;
    AdamConfig adam;
    LbfgsConfig lbfgs;
    bool operator==(const Phase&) const = default;
};

enum class WeightMode { fixed, gradnorm };

struct StageConfig {
    Target target = Target::theta2;
    std::vector<Phase> phases{Phase{}};
    WeightMode weight_mode = WeightMode::fixed;
    LossWeights weights;     ///< fixed weights, or the starting point for gradnorm
    int gradnorm_every = 100; ///< Adam iterations between weight refreshes
    std::optional<BStopRule> stop;

    int max_iters() const;
    void validate() const;
    bool operator==(const StageConfig&) const = default;
};

enum class Discontinuous { ic, bc, both };

/// 10x (or `factor`) on the flagged terms, 1 elsewhere.
LossWeights fourier_weights(Discontinuous flag, double factor = 10.0);

StageConfig default_stage1();
StageConfig default_stage2();

struct TrainRecord {
    int stage = 1;
    std::string optimizer;
    long iteration = 0; ///< counted across the whole run
    LossBreakdown loss; ///< at the parameters before this iteration's update
    BStats b;
};

struct TrainReport {
    std::vector<TrainRecord> history;
    std::vector<std::string> stage_reasons;
    std::string reason;
    bool diverged = false;
    double wall_seconds = 0.0;
    PinnModel model;
};

/// Called after each logged iteration with the parameters the record was computed at.
using TrainObserver = std::function<void(const TrainRecord&, const PinnModel&)>;

/// Trains the target segment in place; every other entry of the parameter vector is left untouched.
TrainReport train_stage(PinnModel& model, const Objective& objective, const StageConfig& cfg, int stage_id = 1,
                        const TrainObserver& observer = {}, long first_iteration = 0);

TrainReport train_two_stage(PinnModel& model, const Objective& objective, const StageConfig& stage1,
                            const StageConfig& stage2, const TrainObserver& observer = {});

} // namespace advpinn
