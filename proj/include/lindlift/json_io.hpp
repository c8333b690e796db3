// Copyright 2026 The lindlift authors
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

#include <string>
#include <vector>

#include <json.hpp>

#include "lindlift/propagate.hpp"

namespace lindlift {

// Complex matrix encoding used repo-wide: d rows of d entries, entry [re, im].
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

// {"dim", "hamiltonian", "jumps" + "rates"} or
// {"dim", "hamiltonian", "kossakowski", "basis": "gellmann-v1"}
nlohmann::json lindbladian_to_json(const Lindbladian& l);
Lindbladian lindbladian_from_json(const nlohmann::json& j);

// {"dim", "times", "states", optional "derivatives"} (grid trajectories)
nlohmann::json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j, bool validate = true);

// {"dim", "times", "generators", "diagnostics"}; a generator entry is a
// Lindbladian object or {"dim", "superoperator"} for blended families.
nlohmann::json lift_family_to_json(const LiftFamily& family);
LiftFamily lift_family_from_json(const nlohmann::json& j);

nlohmann::json verify_report_to_json(const VerifyReport& rep);

// {"dim", "matrix"} for single states / directions
nlohmann::json state_to_json(const Matrix& m);
Matrix state_from_json(const nlohmann::json& j);

/// Writes via a temp file in the same directory followed by rename.
void write_text_atomic(const std::string& path, const std::string& content);
void save_json_atomic(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json(const std::string& path);

/// 64-bit decimal text with 17 significant digits.
std::string format_g17(double v);

/// Plot CSV: header row, first column t, then named series.
void write_plot_csv(const std::string& path,
                    const std::vector<std::pair<std::string, std::vector<double>>>& series);

/// RankProfile CSV: t, lambda_1..lambda_d, rank.
void write_rank_profile_csv(const std::string& path, const RankProfile& profile);

/// Diagnostics CSV: t, epsilon, residual, sigma_min_eig, gksl_valid, gen_norm.
void write_diagnostics_csv(const std::string& path, const LiftFamily& family);

}  // namespace lindlift
