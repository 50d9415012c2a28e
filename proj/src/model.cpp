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

#include "advpinn/model.hpp"

#include "advpinn/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace advpinn {

OutputMap OutputMap::bounded(double lo, double hi) {
    if (!(lo < hi))
        throw ConfigError("invalid bounds");
    return {Kind::bounded, lo, hi};
}

double bounded_output(double raw, double m, double M) {
    if (!(m < M))
        throw ConfigError("invalid bounds");
    const double u = 0.5 * ((M - m) * std::sin(raw) + M + m);
    // Rounding can leave the interval by an ulp.
    return std::clamp(u, m, M);
}

std::vector<int> Architecture::widths() const {
    std::vector<int> w{2 * fourier_pairs};
    w.insert(w.end(), hidden.begin(), hidden.end());
    w.push_back(1);
    return w;
}

void Architecture::validate() const {
    if (fourier_pairs < 1)
        throw ConfigError("architecture: fourier_pairs must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ConfigError("architecture: sigma must be > 0");
    for (int h : hidden)
        if (h < 1)
            throw ConfigError("architecture: hidden widths must be positive");
    if (output.kind == OutputMap::Kind::bounded && !(output.lo < output.hi))
        throw ConfigError("invalid bounds");
}

ParamLayout make_layout(const Architecture& arch) {
    ParamLayout layout;
    layout.append("theta1.B", static_cast<std::size_t>(arch.fourier_pairs) * 2);
    const auto w = arch.widths();
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
        layout.append("theta2.W" + std::to_string(l), static_cast<std::size_t>(w[l]) * w[l + 1]);
        layout.append("theta2.b" + std::to_string(l), static_cast<std::size_t>(w[l + 1]));
    }
    return layout;
}

std::vector<double> fourier_map(const FourierFeatures& f, double x, double t) {
    const auto D = static_cast<std::size_t>(f.pairs);
    std::vector<double> out(2 * D);
    for (std::size_t i = 0; i < D; ++i) {
        const double z = f.B[2 * i] * x + f.B[2 * i + 1] * t;
        out[i] = std::cos(z);
        out[D + i] = std::sin(z);
    }
    return out;
}

PinnModel::PinnModel(Architecture arch, std::uint64_t seed)
    : arch_(std::move(arch)), seed_(seed) {
    arch_.validate();
    params_ = ParamVector(make_layout(arch_));
    for (std::size_t l = 0; l < arch_.num_layers(); ++l) {
        weight_names_.push_back("theta2.W" + std::to_string(l));
        bias_names_.push_back("theta2.b" + std::to_string(l));
    }
}

std::span<const double> PinnModel::weight(std::size_t layer) const { return params_.view(weight_names_.at(layer)); }

std::span<const double> PinnModel::bias(std::size_t layer) const { return params_.view(bias_names_.at(layer)); }

FourierFeatures PinnModel::features() const {
    auto b = B();
    return {arch_.fourier_pairs, arch_.sigma, arch_.fourier_trainable, {b.begin(), b.end()}};
}

void PinnModel::check_finite() const {
    for (double v : params_.values)
        if (!std::isfinite(v))
            throw NumericalError("non-finite model state");
}

PinnModel init_model(const Architecture& arch, std::uint64_t seed) {
    PinnModel model(arch, seed);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, arch.sigma);
    for (double& b : model.params().view("theta1.B"))
        b = gauss(rng);
    const auto w = arch.widths();
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
        const double limit = std::sqrt(6.0 / static_cast<double>(w[l] + w[l + 1]));
        std::uniform_real_distribution<double> glorot(-limit, limit);
        for (double& v : model.params().view("theta2.W" + std::to_string(l)))
            v = glorot(rng);
    }
    return model;
}

namespace {

std::string output_text(const OutputMap& m) {
    if (m.kind == OutputMap::Kind::identity)
        return "identity";
    char buf[128];
    std::snprintf(buf, sizeof buf, "bounded %a %a", m.lo, m.hi);
    return buf;
}

std::string hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

} // namespace

std::string checkpoint_text(const PinnModel& model) {
    const auto& a = model.arch();
    std::ostringstream os;
    os << "advpinn-checkpoint 1\n";
    os << "fourier_pairs " << a.fourier_pairs << "\n";
    os << "sigma " << hex(a.sigma) << "\n";
    os << "fourier_trainable " << (a.fourier_trainable ? 1 : 0) << "\n";
    os << "hidden";
    for (int h : a.hidden)
        os << ' ' << h;
    os << "\n";
    os << "activation tanh\n";
    os << "output " << output_text(a.output) << "\n";
    os << "seed " << model.seed() << "\n";
    os << "params " << model.params().size() << "\n";
    for (double v : model.params().values)
        os << hex(v) << "\n";
    return os.str();
}

PinnModel parse_checkpoint(const std::string& text) {
    std::istringstream is(text);
    std::string key;
    int version = 0;
    if (!(is >> key >> version) || key != "advpinn-checkpoint" || version != 1)
        throw ConfigError("not an advpinn checkpoint");
    Architecture a;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    auto read_hex = [&]() {
        std::string tok;
        is >> tok;
        return std::strtod(tok.c_str(), nullptr);
    };
    std::string line;
    while (is >> key) {
        if (key == "fourier_pairs") {
            is >> a.fourier_pairs;
        } else if (key == "sigma") {
            a.sigma = read_hex();
        } else if (key == "fourier_trainable") {
            int f = 1;
            is >> f;
            a.fourier_trainable = f != 0;
        } else if (key == "hidden") {
            std::getline(is, line);
            std::istringstream hs(line);
            a.hidden.clear();
            for (int h; hs >> h;)
                a.hidden.push_back(h);
        } else if (key == "activation") {
            is >> key;
            if (key != "tanh")
                throw ConfigError("unsupported activation '" + key + "'");
        } else if (key == "output") {
            is >> key;
            if (key == "bounded") {
                const double lo = read_hex();
                const double hi = read_hex();
                a.output = OutputMap::bounded(lo, hi);
            } else {
                a.output = OutputMap::identity();
            }
        } else if (key == "seed") {
            is >> seed;
        } else if (key == "params") {
            is >> count;
            break;
        } else {
            throw ConfigError("unknown checkpoint key '" + key + "'");
        }
    }
    PinnModel model(a, seed);
    if (count != model.params().size())
        throw ConfigError("checkpoint parameter count does not match architecture");
    for (double& v : model.params().values) {
        std::string tok;
        if (!(is >> tok))
            throw ConfigError("truncated checkpoint");
        v = std::strtod(tok.c_str(), nullptr);
    }
    return model;
}

void save_checkpoint(const PinnModel& model, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot write " + path.string());
    os << checkpoint_text(model);
}

PinnModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_checkpoint(ss.str());
}

} // namespace advpinn
