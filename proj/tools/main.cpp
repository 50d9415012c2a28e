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


#include "artifacts.hpp"

#include "advpinn/config.hpp"
#include "advpinn/error.hpp"
#include "advpinn/experiment.hpp"
#include "advpinn/reference.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef ADVPINN_BUILD_ID
#define ADVPINN_BUILD_ID "unknown"
#endif

namespace fs = std::filesystem;
using namespace advpinn;

namespace {

enum Exit : int { kOk = 0, kOther = 1, kConfig = 2, kDiverged = 3, kOracle = 4 };

struct DivergedError : Error {
    using Error::Error;
};

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw ConfigError("--seeds expects comma-separated non-negative integers, got '" + list + "'");
        seeds.push_back(v);
    }
    return seeds;
}

/// --out, then $ADVPINN_OUT, then the config's output entry.
fs::path output_dir(const std::string& flag, const std::string& from_config) {
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv("ADVPINN_OUT"); env && *env)
        return env;
    return from_config;
}

struct Loaded {
    RunConfig cfg;
    std::string hash;
    fs::path out;
};

Loaded load(const std::string& path, const std::string& seeds, const std::string& out) {
    Loaded l;
    l.cfg = load_run_config(path);
    if (!seeds.empty()) {
        l.cfg.seeds = parse_seeds(seeds);
        l.cfg.validate();
    }
    l.out = output_dir(out, l.cfg.output);
    RunConfig hashed = l.cfg;
    hashed.output.clear();
    l.hash = fnv1a_hex(emit_run_config(hashed));
    return l;
}

std::string meta_text(const Loaded& l, const std::string& command) {
    RunConfig shown = l.cfg;
    shown.output = l.out.string();
    std::ostringstream os;
    os << "# command: " << command << "\n";
    os << "# build: " << ADVPINN_BUILD_ID << "\n";
    os << "# config_hash: " << l.hash << "\n";
    os << emit_run_config(shown);
    return os.str();
}

ReferenceSlices oracle_for(const RunConfig& cfg) {
    try {
        return reference_slices(cfg);
    } catch (const ConfigError& e) {
        throw OracleError(e.what());
    }
}

std::vector<RunResult> train_all(const RunConfig& cfg, const ReferenceSlices& ref, const std::string& label) {
    const auto start = std::chrono::steady_clock::now();
    auto runs = run_seeds(cfg, ref);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& r : runs) {
        if (r.report.diverged)
            throw DivergedError(label + "seed " + std::to_string(r.seed) + ": " + r.report.reason);
        std::cerr << label << "seed " << r.seed << ": " << r.report.reason << ", mae raw=" << r.metrics.raw
                  << " filtered=" << r.metrics.filtered << " interior=" << r.metrics.filtered_interior << "\n";
    }
    std::cerr << label << runs.size() << " seed(s) in " << secs << " s\n";
    return runs;
}

void write_run_files(const fs::path& dir, const std::string& hash, const std::vector<RunResult>& runs,
                     const ReferenceSlices& ref) {
    fs::create_directories(dir);
    cli::write_atomic(dir / "train_log.csv", cli::train_log_csv(hash, runs));
    cli::write_atomic(dir / "slices.csv", cli::slices_csv(hash, runs, ref));
    cli::write_atomic(dir / "metrics.csv", cli::metrics_csv(hash, runs));
}

int cmd_run(const std::string& path, const std::string& seeds, const std::string& out) {
    const auto l = load(path, seeds, out);
    const auto ref = oracle_for(l.cfg);
    const auto runs = train_all(l.cfg, ref, "");
    write_run_files(l.out, l.hash, runs, ref);
    cli::write_atomic(l.out / "meta.yaml", meta_text(l, "run"));
    std::cout << "wrote " << l.out.string() << "\n";
    return kOk;
}

int cmd_compare(const std::string& path, const std::string& axis_name, const std::string& seeds,
                const std::string& out) {
    const auto axis = parse_compare_axis(axis_name);
    const auto l = load(path, seeds, out);
    const auto arms = compare_arms(l.cfg, axis);
    std::vector<cli::ArmResults> results;
    const auto ref = oracle_for(l.cfg);
    for (const auto& arm : arms) {
        arm.config.validate();
        results.push_back({arm.label, train_all(arm.config, ref, arm.label + " ")});
    }
    for (const auto& r : results)
        write_run_files(l.out / r.label, l.hash, r.runs, ref);
    cli::write_atomic(l.out / "summary.csv", cli::summary_csv(l.hash, axis, results));
    cli::write_atomic(l.out / "traces.csv", cli::traces_csv(l.hash, results));
    const auto wins = cli::wins_csv(l.hash, axis, results);
    cli::write_atomic(l.out / "wins.csv", wins);
    cli::write_atomic(l.out / "meta.yaml", meta_text(l, "compare --axis " + to_string(axis)));
    std::cout << wins.substr(wins.find('\n') + 1);
    return kOk;
}

AdvectionProblem problem_from(const std::string& name_or_path) {
    if (!fs::is_regular_file(name_or_path))
        return catalog(name_or_path);
    std::ifstream in(name_or_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto text = ss.str();
    if (text.find("problem:") != std::string::npos)
        return parse_run_config(text).problem;
    return parse_problem_config(text);
}

int cmd_oracle(const std::string& name, const std::string& method_name, double dx, double cfl,
               std::vector<double> times, bool self_convergence, double dt_ode, const std::string& out) {
    const auto problem = problem_from(name);
    const auto method = method_name == "auto" ? default_oracle(problem) : parse_oracle_method(method_name);
    if (!(dx > 0.0))
        throw ConfigError("--dx must be > 0");
    if (times.empty())
        times = linspace(0.0, problem.t_max, 5);
    const fs::path dir = output_dir(out, "out");
    const auto hash = fnv1a_hex(emit_problem_config(problem) + to_string(method) + format_double(dx) +
                                format_double(cfl) + format_double(dt_ode));
    ReferenceSolution ref;
    if (method == OracleMethod::upwind_fd) {
        ref = upwind_fd(problem, dx, cfl, times);
    } else {
        const double cells = (problem.x_max - problem.x_min) / dx;
        const auto n = static_cast<std::size_t>(std::llround(cells));
        if (n == 0 || std::abs(cells - static_cast<double>(n)) > 1e-9 * cells)
            throw ConfigError("--dx must divide the domain length");
        ref = sample_reference(problem, method, linspace(problem.x_min, problem.x_max, n + 1), times, dt_ode);
        ref.dx = dx;
    }
    fs::create_directories(dir);
    cli::write_atomic(dir / "reference.csv", cli::hash_line(hash) + reference_csv(ref));
    if (self_convergence) {
        const auto sc = fd_self_convergence(problem, dx, cfl, times.back());
        std::ostringstream os;
        os << cli::hash_line(hash) << "dx,time,crossings_coarse,crossings_fine,max_shift\n";
        os << format_double(sc.dx) << ',' << format_double(times.back()) << ',' << sc.coarse.size() << ','
           << sc.fine.size() << ',' << format_double(sc.max_shift) << '\n';
        cli::write_atomic(dir / "self_convergence.csv", os.str());
        std::cout << "self-convergence max shift " << sc.max_shift << " at dx " << sc.dx << "\n";
    }
    std::cout << "wrote " << (dir / "reference.csv").string() << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Physics-informed networks for 1-D advection with discontinuous data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ADVPINN_BUILD_ID);
    app.footer("Exit codes: 0 ok, 1 other error, 2 config error, 3 training diverged, 4 oracle failure.\n"
               "ADVPINN_OUT sets the output directory when --out is absent.");

    std::string config, axis, seeds, out, problem, method = "auto";
    double dx = 1.0 / 2000.0, cfl = 0.9, dt_ode = 1e-3;
    std::vector<double> times;
    bool self_conv = false;

    auto* run = app.add_subcommand("run", "Train every seed of a config and score it against the oracle");
    run->add_option("config", config, "Run config (YAML)")->required();
    run->add_option("--seeds", seeds, "Comma-separated seeds overriding the config");
    run->add_option("--out", out, "Output directory");

    auto* compare = app.add_subcommand("compare", "Train two arms with paired seeds and summarize");
    compare->add_option("config", config, "Run config (YAML)")->required();
    compare->add_option("--axis", axis, "two-stage-vs-single | standard-vs-upwind | filtered-vs-raw")->required();
    compare->add_option("--seeds", seeds, "Comma-separated seeds overriding the config");
    compare->add_option("--out", out, "Output directory");

    auto* oracle = app.add_subcommand("oracle", "Write a reference solution without training");
    oracle->add_option("problem", problem, "Catalog name, problem config or run config")->required();
    oracle->add_option("--method", method, "auto | exact | characteristics-rk4 | upwind-fd");
    oracle->add_option("--dx", dx, "Grid spacing");
    oracle->add_option("--cfl", cfl, "CFL number for upwind-fd");
    oracle->add_option("--dt-ode", dt_ode, "RK4 step for characteristics-rk4");
    oracle->add_option("--times", times, "Output times (default: 5 equispaced)")->delimiter(',');
    oracle->add_flag("--self-convergence", self_conv, "Also compare upwind-fd at dx and dx/2");
    oracle->add_option("--out", out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run)
            return cmd_run(config, seeds, out);
        if (*compare)
            return cmd_compare(config, axis, seeds, out);
        return cmd_oracle(problem, method, dx, cfl, times, self_conv, dt_ode, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const DivergedError& e) {
        std::cerr << "training diverged: " << e.what() << "\n";
        return kDiverged;
    } catch (const OracleError& e) {
        std::cerr << "oracle failure: " << e.what() << "\n";
        return kOracle;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
}
