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

#include "advpinn/experiment.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace advpinn::cli {

/// Writes via a sibling temporary file and a rename, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& text);

/// "# config_hash=<hex>" first line shared by every CSV of one run.
std::string hash_line(const std::string& hash);

/// seed,stage,optimizer,iteration,total,l_pde,l_ic,l_bc,w_pde,w_ic,w_bc,b_mean_abs,b_max_abs
std::string train_log_csv(const std::string& hash, const std::vector<RunResult>& runs);
/// seed,t,x,raw,filtered,reference
std::string slices_csv(const std::string& hash, const std::vector<RunResult>& runs, const ReferenceSlices& ref);
/// One row per seed plus a "mean" row.
std::string metrics_csv(const std::string& hash, const std::vector<RunResult>& runs);

struct ArmResults {
    std::string label;
    std::vector<RunResult> runs;
};

/// arm,label,seed,final_total,final_pde,final_ic,final_bc,mae_raw,mae_filtered,mae_filtered_interior,score
std::string summary_csv(const std::string& hash, CompareAxis axis, const std::vector<ArmResults>& arms);
/// Per-iteration PDE, IC, BC and total loss of both arms side by side.
std::string traces_csv(const std::string& hash, const std::vector<ArmResults>& arms);
/// arm,label,wins,pairs
std::string wins_csv(const std::string& hash, CompareAxis axis, const std::vector<ArmResults>& arms);

} // namespace advpinn::cli
