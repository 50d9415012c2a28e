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

#include "advpinn/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace advpinn::cli {

namespace {

std::string f(double v) { return format_double(v); }

/// The arm that scores each pair: for filtered-vs-raw both columns come from one training.
std::vector<double> arm_scores(const std::vector<ArmResults>& arms, CompareAxis axis, std::size_t arm) {
    const auto& runs = arms[axis == CompareAxis::filtered_vs_raw ? 0 : arm].runs;
    std::vector<double> s;
    for (const auto& r : runs)
        s.push_back(arm_score(r, axis, arm));
    return s;
}

std::vector<std::string> arm_labels(const std::vector<ArmResults>& arms, CompareAxis axis) {
    if (axis == CompareAxis::filtered_vs_raw)
        return {"raw", "filtered"};
    return {arms[0].label, arms[1].label};
}

} // namespace

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write '" + tmp.string() + "'");
        out << text;
        out.flush();
        if (!out)
            throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename into '" + path.string() + "': " + ec.message());
    }
}

std::string hash_line(const std::string& hash) { return "# config_hash=" + hash + "\n"; }

std::string train_log_csv(const std::string& hash, const std::vector<RunResult>& runs) {
    std::ostringstream os;
    os << hash_line(hash);
    os << "seed,stage,optimizer,iteration,total,l_pde,l_ic,l_bc,w_pde,w_ic,w_bc,b_mean_abs,b_max_abs\n";
    for (const auto& r : runs)
        for (const auto& h : r.report.history)
            os << r.seed << ',' << h.stage << ',' << h.optimizer << ',' << h.iteration << ','
               << f(h.loss.total) << ',' << f(h.loss.l_pde) << ',' << f(h.loss.l_ic) << ',' << f(h.loss.l_bc) << ','
               << f(h.loss.weights.pde) << ',' << f(h.loss.weights.ic) << ',' << f(h.loss.weights.bc) << ','
               << f(h.b.mean_abs) << ',' << f(h.b.max_abs) << '\n';
    return os.str();
}

std::string slices_csv(const std::string& hash, const std::vector<RunResult>& runs, const ReferenceSlices& ref) {
    std::ostringstream os;
    os << hash_line(hash);
    os << "seed,t,x,raw,filtered,reference\n";
    for (const auto& r : runs)
        for (std::size_t j = 0; j < r.slices.size(); ++j) {
            const auto& s = r.slices[j];
            for (std::size_t i = 0; i < s.x.size(); ++i)
                os << r.seed << ',' << f(s.t) << ',' << f(s.x[i]) << ',' << f(s.raw[i]) << ','
                   << f(s.filtered ? (*s.filtered)[i] : s.raw[i]) << ',' << f(ref.rows[j][i]) << '\n';
        }
    return os.str();
}

std::string metrics_csv(const std::string& hash, const std::vector<RunResult>& runs) {
    std::ostringstream os;
    os << hash_line(hash);
    os << "seed,mae_raw,mae_filtered,mae_filtered_interior,final_total,final_pde,final_ic,final_bc,iterations\n";
    double m[7] = {};
    for (const auto& r : runs) {
        const double row[7] = {r.metrics.raw,      r.metrics.filtered,   r.metrics.filtered_interior,
                               r.final_loss.total, r.final_loss.l_pde,   r.final_loss.l_ic,
                               r.final_loss.l_bc};
        os << r.seed;
        for (int k = 0; k < 7; ++k) {
            os << ',' << f(row[k]);
            m[k] += row[k];
        }
        os << ',' << r.report.history.size() << '\n';
    }
    if (!runs.empty()) {
        os << "mean";
        for (double v : m)
            os << ',' << f(v / static_cast<double>(runs.size()));
        os << ",\n";
    }
    return os.str();
}

std::string summary_csv(const std::string& hash, CompareAxis axis, const std::vector<ArmResults>& arms) {
    std::ostringstream os;
    os << hash_line(hash);
    os << "# axis=" << to_string(axis) << '\n';
    os << "arm,label,seed,final_total,final_pde,final_ic,final_bc,mae_raw,mae_filtered,mae_filtered_interior,score\n";
    const auto labels = arm_labels(arms, axis);
    for (std::size_t a = 0; a < 2; ++a) {
        const auto& runs = arms[axis == CompareAxis::filtered_vs_raw ? 0 : a].runs;
        for (const auto& r : runs)
            os << a << ',' << labels[a] << ',' << r.seed << ',' << f(r.final_loss.total) << ','
               << f(r.final_loss.l_pde) << ',' << f(r.final_loss.l_ic) << ',' << f(r.final_loss.l_bc) << ','
               << f(r.metrics.raw) << ',' << f(r.metrics.filtered) << ',' << f(r.metrics.filtered_interior) << ','
               << f(arm_score(r, axis, a)) << '\n';
    }
    return os.str();
}

std::string traces_csv(const std::string& hash, const std::vector<ArmResults>& arms) {
    std::ostringstream os;
    os << hash_line(hash);
    os << "seed,iteration";
    for (const auto& a : arms)
        for (const char* term : {"pde", "ic", "bc", "total"})
            os << ',' << a.label << '_' << term;
    os << '\n';
    const auto& lead = arms.front().runs;
    for (std::size_t s = 0; s < lead.size(); ++s) {
        std::size_t n = 0;
        for (const auto& a : arms)
            n = std::max(n, a.runs[s].report.history.size());
        for (std::size_t i = 0; i < n; ++i) {
            os << lead[s].seed << ',' << i;
            for (const auto& a : arms) {
                const auto& h = a.runs[s].report.history;
                if (i < h.size())
                    os << ',' << f(h[i].loss.l_pde) << ',' << f(h[i].loss.l_ic) << ',' << f(h[i].loss.l_bc) << ','
                       << f(h[i].loss.total);
                else
                    os << ",,,,";
            }
            os << '\n';
        }
    }
    return os.str();
}

std::string wins_csv(const std::string& hash, CompareAxis axis, const std::vector<ArmResults>& arms) {
    const auto w = count_wins(arm_scores(arms, axis, 0), arm_scores(arms, axis, 1));
    const auto labels = arm_labels(arms, axis);
    const auto pairs = arms.front().runs.size();
    std::ostringstream os;
    os << hash_line(hash);
    os << "arm,label,wins,pairs\n";
    os << "0," << labels[0] << ',' << f(w.a) << ',' << pairs << '\n';
    os << "1," << labels[1] << ',' << f(w.b) << ',' << pairs << '\n';
    return os.str();
}

} // namespace advpinn::cli
