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

#include "advpinn/losses.hpp"
#include "advpinn/model.hpp"
#include "advpinn/postprocess.hpp"
#include "advpinn/problem.hpp"
#include "advpinn/reference.hpp"
#include "advpinn/training.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace advpinn {

struct CollocationConfig {
    std::size_t n_pde = 10000;
    std::size_t n_ic = 200;
    std::size_t n_bc = 100;
    std::uint64_t seed = 0; ///< run seed s samples with seed + s
    Sampling sampling = Sampling::uniform;
    bool operator==(const CollocationConfig&) const = default;
};

std::string to_string(Sampling s);
Sampling parse_sampling(const std::string& s);

struct OracleConfig {
    std::optional<OracleMethod> method; ///< unset: default_oracle(problem)
    double dx = 1.0 / 2000.0;           ///< upwind-fd grid
    double cfl = 0.9;
    double dt_ode = 1e-3;
    bool operator==(const OracleConfig&) const = default;
};

/// Everything one experiment needs; a catalog name in the config is expanded into `problem`.
struct RunConfig {
    AdvectionProblem problem;
    Architecture model;
    LossVariant variant = LossVariant::standard;
    UpwindConfig upwind;
    StageConfig stage1 = default_stage1();
    StageConfig stage2 = default_stage2();
    CollocationConfig collocation;
    MedianFilterConfig filter;
    std::vector<double> slice_times{0.0, 0.25, 0.5, 0.75, 1.0};
    OracleConfig oracle;
    std::vector<std::uint64_t> seeds{0};
    std::string output = "out";

    /// Throws ConfigError if any part is inconsistent.
    void validate() const;
    OracleMethod oracle_method() const;
    bool operator==(const RunConfig&) const = default;
};

/// Oracle values on the filter grid at every slice time.
struct ReferenceSlices {
    OracleMethod method = OracleMethod::exact;
    std::vector<double> x;
    std::vector<double> t;
    std::vector<std::vector<double>> rows;
};

/// Throws OracleError if the oracle cannot solve the problem.
ReferenceSlices reference_slices(const RunConfig& cfg);

struct RunResult {
    std::uint64_t seed = 0;
    TrainReport report;
    LossBreakdown final_loss; ///< unit weights, so arms with different weighting compare
    std::vector<SolutionSlice> slices;
    FilterMetrics metrics;
};

/// Trains one seed with both stages and scores the filtered slices against `reference`.
RunResult run_seed(const RunConfig& cfg, std::uint64_t seed, const ReferenceSlices& reference,
                   const TrainObserver& observer = {});

/// Every configured seed, concurrently; results are in seed order.
std::vector<RunResult> run_seeds(const RunConfig& cfg, const ReferenceSlices& reference);

enum class CompareAxis { two_stage_vs_single, standard_vs_upwind, filtered_vs_raw };

std::string to_string(CompareAxis a);
CompareAxis parse_compare_axis(const std::string& s);

struct Arm {
    std::string label;
    RunConfig config;
};

/// The two arms of a comparison. two-stage-vs-single moves the stage-one budget into the first
/// stage-two phase; standard-vs-upwind pairs the standard loss with the configured upwind variant
/// (upwind-r for factored speeds, upwind-general otherwise, when the config names standard).
/// filtered-vs-raw has one training arm; the second arm is its filtered output.
std::vector<Arm> compare_arms(const RunConfig& cfg, CompareAxis axis);

/// Score of arm 0 or 1 on an axis, lower is better: final unit-weight loss for
/// two-stage-vs-single, raw MAE for standard-vs-upwind, raw (0) or filtered (1) MAE otherwise.
double arm_score(const RunResult& r, CompareAxis axis, std::size_t arm);

struct WinCount {
    double a = 0.0; ///< ties count one half to each arm
    double b = 0.0;
};

WinCount count_wins(const std::vector<double>& score_a, const std::vector<double>& score_b);

/// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

} // namespace advpinn
