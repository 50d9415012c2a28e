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

#include "advpinn/model.hpp"
#include "advpinn/problem.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace advpinn {

/// Median of the window [i-m, i+m] at each index in [margin, n-1-margin]; the margins are copied.
/// Where the margin is narrower than m the window shrinks symmetrically to stay inside.
/// Throws ConfigError for even k, k < 1, a negative margin or k >= n.
std::vector<double> median_filter_1d(std::span<const double> values, int k, int margin);

struct MedianFilterConfig {
    int k = 5;
    int margin = 2;
    int n_x = 401;
    bool skip_boundaries = true; ///< requires margin >= (k-1)/2

    void validate() const;
    /// Grid spacing of the filtered slices.
    double probe_spacing(double x_min, double x_max) const { return (x_max - x_min) / (n_x - 1); }
    bool operator==(const MedianFilterConfig&) const = default;
};

struct SolutionSlice {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> raw;
    std::optional<std::vector<double>> filtered;
};

/// Evaluates the model on n_x equispaced points per time and filters each slice in x only.
std::vector<SolutionSlice> filter_solution(const PinnModel& model, const AdvectionProblem& problem,
                                           const std::vector<double>& times, int n_x, const MedianFilterConfig& cfg);

/// Rows (t, x, raw, filtered) with a header; raw is repeated when a slice is unfiltered.
std::string slices_csv(const std::vector<SolutionSlice>& slices);

double mae(std::span<const double> predicted, std::span<const double> reference);
/// MAE over indices [margin, n-1-margin].
double mae_interior(std::span<const double> predicted, std::span<const double> reference, int margin);

struct FilterMetrics {
    double raw = 0.0;
    double filtered = 0.0;
    double filtered_interior = 0.0;
};

/// Mean over slices of the three MAEs against `reference` (one row per slice, same x grid).
FilterMetrics filter_metrics(const std::vector<SolutionSlice>& slices, const std::vector<std::vector<double>>& reference,
                             int margin);

/// Sign changes of the discrete second difference; exact zeros are skipped.
int curvature_sign_changes(std::span<const double> values);

/// Fraction of values inside [lo, hi].
double fraction_in(std::span<const double> values, double lo, double hi);

} // namespace advpinn
