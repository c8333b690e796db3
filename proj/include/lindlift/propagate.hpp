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

#include "lindlift/lift.hpp"

namespace lindlift {

struct EvolveResult {
  Trajectory exp_trajectory;  // midpoint exponential stepper
  Trajectory rk4_trajectory;  // classical RK4 on the vectorized equation
  double max_integrator_disagreement = 0.0;
  /// Largest per-step |tr - 1| before renormalization; stays <= 1e-8/step
  /// under valid generators.
  double max_trace_drift = 0.0;
  double max_herm_drift = 0.0;
};

/// Integrates the family from rho0 along the grid with two integrators:
/// per-cell exponential steps with the midpoint generator, and RK4 with the
/// generator interpolated affinely between family grid points. States are
/// re-Hermitized and trace-renormalized per step with the drift logged.
EvolveResult evolve(const LiftFamily& family, const DensityMatrix& rho0,
                    const std::vector<double>& grid);

struct CpStepReport {
  double choi_min_eig = 0.0;
  bool cp = false;
};

/// Choi positivity of exp(delta * S): a witness that the step is CPTP.
CpStepReport cp_step_check(const Superoperator& s, double delta);
CpStepReport cp_step_check(const Lindbladian& lind, double delta);

struct VerifyReport {
  double max_residual = 0.0;        // max_t ||L_t(rho_t) - drho_t||_F
  double max_traj_deviation = 0.0;  // against the RK4-integrated trajectory
  bool all_steps_cp = false;
  double max_step_choi_negativity = 0.0;
  double grid_step = 0.0;
  double max_integrator_disagreement = 0.0;
};

/// End-to-end check that the family lifts the trajectory: pointwise
/// residuals on the grid, integration deviation at step delta, and per-point
/// CP checks of exp(delta L_t).
VerifyReport verify_lift(const Trajectory& traj, const LiftFamily& family,
                         const std::vector<double>& grid, double delta);

}  // namespace lindlift
