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
#include "advpinn/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace advpinn::testing {

inline Architecture small_arch(int pairs = 3, std::vector<int> hidden = {5, 4}, double sigma = 1.0) {
    Architecture a;
    a.fourier_pairs = pairs;
    a.sigma = sigma;
    a.hidden = std::move(hidden);
    return a;
}

/// Model with every parameter (biases included) randomised so no gradient is trivially zero.
inline PinnModel random_model(std::uint64_t seed, const Architecture& arch = small_arch()) {
    PinnModel m = init_model(arch, seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> pert(-0.3, 0.3);
    for (double& v : m.params().values)
        v += pert(rng);
    return m;
}

inline std::vector<Point> random_points(std::uint64_t seed, std::size_t n, double x0 = 0.0, double x1 = 2.0,
                                        double t0 = 0.0, double t1 = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(x0, x1), ut(t0, t1);
    std::vector<Point> p(n);
    for (auto& q : p) {
        q.x = ux(rng);
        q.t = ut(rng);
    }
    return p;
}

struct FdMismatch {
    std::size_t index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
};

/// Central differences over every parameter; returns components failing both tolerances.
inline std::vector<FdMismatch> fd_check(PinnModel model, const std::function<double(const PinnModel&)>& f,
                                        const std::vector<double>& grad, double step = 1e-6, double rel = 1e-5,
                                        double abs = 1e-8) {
    std::vector<FdMismatch> bad;
    auto& v = model.params().values;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double keep = v[i];
        v[i] = keep + step;
        const double fp = f(model);
        v[i] = keep - step;
        const double fm = f(model);
        v[i] = keep;
        const double num = (fp - fm) / (2.0 * step);
        const double err = std::abs(num - grad[i]);
        const double scale = std::max(std::abs(num), std::abs(grad[i]));
        if (err > abs && err > rel * scale)
            bad.push_back({i, grad[i], num});
    }
    return bad;
}

} // namespace advpinn::testing
