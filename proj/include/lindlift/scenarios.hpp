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

#include "lindlift/propagate.hpp"

namespace lindlift {

struct ScenarioResult {
  std::string id;
  std::vector<std::pair<std::string, Trajectory>> trajectories;  // grid-sampled
  std::vector<std::pair<std::string, LiftFamily>> families;
  std::vector<std::pair<std::string, VerifyReport>> reports;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> findings;
  std::vector<std::pair<std::string, std::vector<double>>> plot_series;  // "t" first
};

// --- analytic building blocks (shared with the test suites) ---

/// rho_t = 1/2 [[1, sin t], [sin t, 1]] with its exact derivative.
Trajectory sin_dephasing_trajectory();
/// rho_t = 1/4 [[2, 1+e^{-2t}], [1+e^{-2t}, 2]] with its exact derivative.
Trajectory eternal_nm_trajectory(double horizon);
Matrix eternal_nm_asymptote();
/// The dephasing-to-equilibrium channel behind the eternal-NM path, as a
/// linear map (entrywise formula extended linearly off the trace-one slice).
Superoperator eternal_nm_channel(double t);
/// Closed-form constant generator with jumps between the |+->-levels at
/// rates 3/2 and 1/2: annihilates the asymptote and maps X to -2X.
Lindbladian eternal_two_point_witness();
/// Solves {L(rho_t*) = drho_t* for t* in {0.2, 1, 3}, L(rho_inf) = 0}.
FeasibilityOutcome eternal_two_point_solve(double tolerance = 1e-10);
/// Sum of single-site copies of the generator (identity elsewhere).
Lindbladian embed_generator_sites(const Lindbladian& single, int n);
/// Qutrit path with coherences (a sin t, b sin t) in the third column and a
/// constant z block between the first two levels.
Trajectory qutrit_trajectory(cd a, cd b, cd z, double horizon);

// --- scenarios ---

ScenarioResult scenario_sin_dephasing(double t0, double t1, double grid_step);

ScenarioResult scenario_eternal_nm(double horizon, int n, double grid_step = 1e-3);

ScenarioResult scenario_qutrit_region(cd a, cd b, const std::vector<cd>& z_list, double t0,
                                      double t1, double report_step = 0.05,
                                      double dense_step = 0.01);

ScenarioResult scenario_discrete_points(const std::vector<Matrix>& states,
                                        const std::vector<double>& times);

/// Writes trajectories, lift families, diagnostics CSVs and the result
/// manifest into outdir (atomically, no timestamps: repeated runs are
/// byte-identical). plotdata additionally emits plot.csv.
void write_scenario_result(const ScenarioResult& result, const std::string& outdir,
                           bool plotdata);

}  // namespace lindlift
