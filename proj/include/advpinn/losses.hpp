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
#include "advpinn/problem.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace advpinn {

// Smooth surrogates. Every *_d variant also returns the partial derivatives.

/// Logistic function, evaluated without overflow for any finite z.
double sigmoid(double z);

double smooth_abs(double b, double alpha);
/// d/db of smooth_abs.
double smooth_abs_deriv(double b, double alpha);

struct Blend {
    double value = 0.0;
    double d_b = 0.0;
    double d_c = 0.0;
};

double smooth_max(double b, double c, double alpha);
Blend smooth_max_d(double b, double c, double alpha);

/// The argument of larger magnitude; b on ties.
double select_r(double b, double c);
double smooth_r(double b, double c, double alpha);
Blend smooth_r_d(double b, double c, double alpha);

struct LossWeights {
    double pde = 1.0;
    double ic = 1.0;
    double bc = 1.0;

    /// Throws ConfigError unless all finite, non-negative and not all zero.
    void validate() const;
    bool operator==(const LossWeights&) const = default;
};

enum class LossVariant { standard, upwind_max, upwind_r, upwind_general };

std::string to_string(LossVariant v);
LossVariant parse_loss_variant(const std::string& s);

struct UpwindConfig {
    double h = 0.01;
    double alpha = 100.0;

    void validate() const;
    bool operator==(const UpwindConfig&) const = default;
};

/// Throws ConfigError when the variant cannot be applied to the problem's speed.
void check_variant(const AdvectionProblem& problem, LossVariant variant);

struct LossBreakdown {
    double l_pde = 0.0;
    double l_ic = 0.0;
    double l_bc = 0.0;
    LossWeights weights;
    double total = 0.0;
    double residual_max = 0.0;
};

LossBreakdown total_loss(double l_pde, double l_ic, double l_bc, const LossWeights& weights,
                         double residual_max = 0.0);

/// Mean squared PDE residual as a differentiable point loss.
///
/// When `squared_residuals` is set, evaluation stores the squared residual of
/// point i at index i (the vector is resized here).
PointLoss pde_term(const AdvectionProblem& problem, std::span<const Point> points, LossVariant variant,
                   const UpwindConfig& upwind = {}, std::shared_ptr<std::vector<double>> squared_residuals = {});
PointLoss ic_term(const AdvectionProblem& problem, std::span<const double> xs);
PointLoss bc_term(const AdvectionProblem& problem, std::span<const BcPoint> points);

double pde_loss_standard(const PinnModel& model, const AdvectionProblem& problem, std::span<const Point> points);
double pde_loss_upwind_max(const PinnModel& model, const AdvectionProblem& problem, std::span<const Point> points,
                           const UpwindConfig& cfg);
double pde_loss_upwind_r(const PinnModel& model, const AdvectionProblem& problem, std::span<const Point> points,
                         const UpwindConfig& cfg);
double pde_loss_upwind_general(const PinnModel& model, const AdvectionProblem& problem,
                               std::span<const Point> points, const UpwindConfig& cfg);
double ic_loss(const PinnModel& model, const AdvectionProblem& problem, std::span<const double> xs);
double bc_loss(const PinnModel& model, const AdvectionProblem& problem, std::span<const BcPoint> points);

struct GradNorms {
    double pde = 0.0;
    double ic = 0.0;
    double bc = 0.0;
};

inline constexpr double kGradnormMin = 1e-2;
inline constexpr double kGradnormMax = 1e4;
inline constexpr double kGradnormDecay = 0.9;

/// Mean-ratio weights, clipped, then blended with `previous` (if any) by the decay factor.
/// The PDE weight is always 1.
LossWeights gradnorm_weights(const GradNorms& norms, const std::optional<LossWeights>& previous = std::nullopt);

struct BoundCheck {
    double l_standard_max = 0.0;
    double l_upwind_max = 0.0;
    double bound_rhs = 0.0;
    int probes = 11;

    bool holds(double tol) const { return l_standard_max - l_upwind_max <= bound_rhs + tol; }
};

/// Exact max residuals of the standard and the upwind-selected residual, and
/// h * max |g * M^2| with M the largest |u_x| over equispaced probes in [x-h, x+h].
/// The upwind-max variant selects max(u, u(x+h)); every other variant uses r(u(x+h), u(x-h)).
BoundCheck upwind_bound_check(const PinnModel& model, const AdvectionProblem& problem, std::span<const Point> points,
                              const UpwindConfig& cfg, LossVariant variant = LossVariant::upwind_r,
                              int probes = 11);

} // namespace advpinn
