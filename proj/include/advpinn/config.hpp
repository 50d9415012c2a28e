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
#include "advpinn/problem.hpp"

#include <filesystem>
#include <string>

namespace advpinn {

/// Problem in the config schema: a catalog name, or a mapping with
/// {name, domain, speed, source, ic, bc, bounds}. Errors carry line and column.
AdvectionProblem parse_problem_config(const std::string& text);
/// Fully expanded mapping; parse_problem_config(emit_problem_config(p)) == p.
std::string emit_problem_config(const AdvectionProblem& problem);

/// Run config; omitted sections take their defaults.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Every field materialized, so the text alone determines the run.
std::string emit_run_config(const RunConfig& cfg);

} // namespace advpinn
