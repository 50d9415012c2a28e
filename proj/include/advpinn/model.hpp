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

#include "advpinn/param_vector.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace advpinn {

enum class Activation { tanh };

/// Identity, or the sine squash 0.5*[(M-m) sin(N) + M + m] onto [m, M].
struct OutputMap {
    enum class Kind { identity, bounded };
    Kind kind = Kind::identity;
    double lo = 0.0;
    double hi = 1.0;

    static OutputMap identity() { return {}; }
    /// Throws ConfigError("invalid bounds") unless lo < hi.
    static OutputMap bounded(double lo, double hi);
    bool operator==(const OutputMap&) const = default;
};

/// Maps every real to [m, M]; throws ConfigError("invalid bounds") if m >= M.
double bounded_output(double raw, double m, double M);

struct Architecture {
    int fourier_pairs = 128; ///< D
    double sigma = 1.0;
    bool fourier_trainable = true;
    std::vector<int> hidden{128, 128, 128};
    Activation activation = Activation::tanh;
    OutputMap output;

    /// {2D, hidden..., 1}
    std::vector<int> widths() const;
    std::size_t num_layers() const { return hidden.size() + 1; }
    void validate() const;
    bool operator==(const Architecture&) const = default;
};

ParamLayout make_layout(const Architecture& arch);

struct FourierFeatures {
    int pairs = 0;
    double sigma = 1.0;
    bool trainable = true;
    std::vector<double> B; ///< pairs x 2, row-major; row i = (b_x, b_t)
};

/// gamma(x,t) = [cos(B m), sin(B m)], m = (x, t).
std::vector<double> fourier_map(const FourierFeatures& f, double x, double t);

/// Fourier input layer + tanh MLP + output map, all parameters in one flat vector.
///
/// Segments: "theta1.B" (Fourier matrix) and "theta2.W<l>", "theta2.b<l>" for
/// every dense layer l. Weight matrices are row-major (out x in).
class PinnModel {
public:
    PinnModel() = default;
    PinnModel(Architecture arch, std::uint64_t seed);

    const Architecture& arch() const noexcept { return arch_; }
    std::uint64_t seed() const noexcept { return seed_; }
    ParamVector& params() noexcept { return params_; }
    const ParamVector& params() const noexcept { return params_; }

    std::span<const double> B() const { return params_.view("theta1.B"); }
    std::span<const double> weight(std::size_t layer) const;
    std::span<const double> bias(std::size_t layer) const;
    FourierFeatures features() const;

    /// Throws NumericalError("non-finite model state") if any parameter is NaN/inf.
    void check_finite() const;

private:
    Architecture arch_;
    std::uint64_t seed_ = 0;
    ParamVector params_;
    std::vector<std::string> weight_names_;
    std::vector<std::string> bias_names_;
};

/// Gaussian B (std sigma), Glorot-uniform weights, zero biases. Deterministic in seed.
PinnModel init_model(const Architecture& arch, std::uint64_t seed);

/// Text checkpoint: header lines then one hex-float parameter per line (bit-exact round trip).
std::string checkpoint_text(const PinnModel& model);
PinnModel parse_checkpoint(const std::string& text);
void save_checkpoint(const PinnModel& model, const std::filesystem::path& path);
PinnModel load_checkpoint(const std::filesystem::path& path);

} // namespace advpinn
