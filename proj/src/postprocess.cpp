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


#include "advpinn/postprocess.hpp"

#include "advpinn/diffcore.hpp"
#include "advpinn/error.hpp"

#include <algorithm>
#include <cmath>

namespace advpinn {

std::vector<double> median_filter_1d(std::span<const double> values, int k, int margin) {
    const auto n = static_cast<long>(values.size());
    if (k < 1 || k % 2 == 0)
        throw ConfigError("median window must be odd and positive");
    if (k >= n)
        throw ConfigError("median window must be shorter than the sequence");
    if (margin < 0)
        throw ConfigError("median margin must be >= 0");
    const long m = (k - 1) / 2;
    std::vector<double> out(values.begin(), values.end());
    std::vector<double> win;
    win.reserve(static_cast<std::size_t>(k));
    for (long i = margin; i < n - margin; ++i) {
        const long r = std::min({m, i, n - 1 - i});
        win.assign(values.begin() + (i - r), values.begin() + (i + r + 1));
        const auto mid = win.begin() + r;
        std::nth_element(win.begin(), mid, win.end());
        out[static_cast<std::size_t>(i)] = *mid;
    }
    return out;
}

void MedianFilterConfig::validate() const {
    if (k < 3 || k % 2 == 0)
        throw ConfigError("median window k must be odd and >= 3");
    if (margin < 0)
        throw ConfigError("median margin must be >= 0");
    if (skip_boundaries && margin < (k - 1) / 2)
        throw ConfigError("median margin must be >= (k-1)/2 when boundaries are skipped");
    if (n_x <= k)
        throw ConfigError("n_x must exceed the median window");
}

std::vector<SolutionSlice> filter_solution(const PinnModel& model, const AdvectionProblem& problem,
                                           const std::vector<double>& times, int n_x, const MedianFilterConfig& cfg) {
    cfg.validate();
    if (n_x <= cfg.k)
        throw ConfigError("n_x must exceed the median window");
    const auto xs = linspace(problem.x_min, problem.x_max, static_cast<std::size_t>(n_x));
    std::vector<Point> pts;
    pts.reserve(xs.size() * times.size());
    for (double t : times)
        for (double x : xs)
            pts.push_back({x, t});
    const auto u = evaluate_values(model, pts);
    std::vector<SolutionSlice> out(times.size());
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < times.size(); ++j) {
        SolutionSlice& s = out[j];
        s.t = times[j];
        s.x = xs;
        const auto first = u.begin() + static_cast<std::ptrdiff_t>(j * xs.size());
        s.raw.assign(first, first + static_cast<std::ptrdiff_t>(xs.size()));
        s.filtered = median_filter_1d(s.raw, cfg.k, cfg.margin);
    }
    return out;
}

std::string slices_csv(const std::vector<SolutionSlice>& slices) {
    std::string out = "t,x,raw,filtered\n";
    for (const auto& s : slices) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            out += format_double(s.t) + ',' + format_double(s.x[i]) + ',' + format_double(s.raw[i]) + ',';
            out += format_double(s.filtered ? (*s.filtered)[i] : s.raw[i]);
            out += '\n';
        }
    }
    return out;
}

double mae(std::span<const double> predicted, std::span<const double> reference) {
    return mae_interior(predicted, reference, 0);
}

double mae_interior(std::span<const double> predicted, std::span<const double> reference, int margin) {
    if (predicted.size() != reference.size())
        throw Error("mae: length mismatch");
    const auto n = static_cast<long>(predicted.size());
    if (margin < 0 || 2L * margin >= n)
        throw Error("mae: margin leaves no points");
    double s = 0.0;
    for (long i = margin; i < n - margin; ++i)
        s += std::abs(predicted[static_cast<std::size_t>(i)] - reference[static_cast<std::size_t>(i)]);
    return s / static_cast<double>(n - 2 * margin);
}

FilterMetrics filter_metrics(const std::vector<SolutionSlice>& slices, const std::vector<std::vector<double>>& reference,
                             int margin) {
    if (slices.size() != reference.size() || slices.empty())
        throw Error("filter_metrics: slice count mismatch");
    FilterMetrics m;
    for (std::size_t j = 0; j < slices.size(); ++j) {
        const auto& f = slices[j].filtered ? *slices[j].filtered : slices[j].raw;
        m.raw += mae(slices[j].raw, reference[j]);
        m.filtered += mae(f, reference[j]);
        m.filtered_interior += mae_interior(f, reference[j], margin);
    }
    const auto n = static_cast<double>(slices.size());
    m.raw /= n;
    m.filtered /= n;
    m.filtered_interior /= n;
    return m;
}

int curvature_sign_changes(std::span<const double> v) {
    int changes = 0;
    int last = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double d2 = v[i + 1] - 2.0 * v[i] + v[i - 1];
        const int s = (d2 > 0.0) - (d2 < 0.0);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

double fraction_in(std::span<const double> values, double lo, double hi) {
    if (values.empty())
        return 0.0;
    const auto c = std::count_if(values.begin(), values.end(), [&](double v) { return v >= lo && v <= hi; });
    return static_cast<double>(c) / static_cast<double>(values.size());
}

} // namespace advpinn
