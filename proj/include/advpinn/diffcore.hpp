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

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace advpinn {

/// Network output and its two input derivatives at one point.
struct EvalRecord {
    double u = 0.0;
    double du_dx = 0.0;
    double du_dt = 0.0;
    bool operator==(const EvalRecord&) const = default;
};

/// Which parameter group receives gradient; the others are frozen.
enum class Target { theta1, theta2, all };

std::string to_string(Target t);
Target parse_target(const std::string& s);
inline bool trains_theta1(Target t) { return t != Target::theta2; }
inline bool trains_theta2(Target t) { return t != Target::theta1; }

/// Everything a per-point loss can see at one collocation point.
struct LocalState {
    double x = 0.0;
    double t = 0.0;
    double u = 0.0;
    double ux = 0.0;
    double ut = 0.0;
    double u_plus = 0.0;  ///< u(x + shift, t) when PointLoss::use_plus
    double u_minus = 0.0; ///< u(x - shift, t) when PointLoss::use_minus
};

/// Partial derivatives of the per-point contribution with respect to LocalState entries.
struct LocalAdjoint {
    double u = 0.0;
    double ux = 0.0;
    double ut = 0.0;
    double u_plus = 0.0;
    double u_minus = 0.0;
};

/// Per-point loss: returns the contribution and fills its partials.
/// Called concurrently for distinct indices; must be thread-safe.
using LocalLoss = std::function<double(std::size_t index, const LocalState&, LocalAdjoint&)>;

/// A scalar loss  scale * sum_i local(i, state_i)  over a point batch.
///
/// The state may include exact input derivatives and shifted evaluations
/// u(x +- shift, t); gradients flow through all of them.
struct PointLoss {
    std::vector<Point> points;
    double shift = 0.0;
    bool use_plus = false;
    bool use_minus = false;
    bool use_input_derivs = true;
    double scale = 1.0;
    LocalLoss local;
};

struct LossGradient {
    double value = 0.0;
    ParamVector gradient;
};

double evaluate(const PinnModel& model, double x, double t);
std::vector<double> evaluate_values(const PinnModel& model, std::span<const Point> points);
std::vector<EvalRecord> evaluate_with_input_derivs(const PinnModel& model, std::span<const Point> points);

/// Forward-only loss value; adjoints written by `local` are ignored.
double loss_value(const PinnModel& model, const PointLoss& loss);

/// Exact loss gradient. Entries of frozen groups are identically zero.
/// Throws NumericalError("diverged loss") on a non-finite value and names the
/// segment of the first non-finite gradient entry.
LossGradient loss_gradient(const PinnModel& model, const PointLoss& loss, Target target = Target::all);

/// Straight-line single-threaded implementations kept as a cross-check for the
/// parallel kernels. Same contracts; summation strictly in point order.
namespace serial {

std::vector<EvalRecord> evaluate_with_input_derivs(const PinnModel& model, std::span<const Point> points);
double loss_value(const PinnModel& model, const PointLoss& loss);
LossGradient loss_gradient(const PinnModel& model, const PointLoss& loss, Target target = Target::all);

} // namespace serial

} // namespace advpinn
