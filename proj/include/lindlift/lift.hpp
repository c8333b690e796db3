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

#include <optional>
#include <utility>
#include <vector>

#include "lindlift/gksl.hpp"
#include "lindlift/paths.hpp"

namespace lindlift {

struct LiftPointDiagnostics {
  double t = 0.0;
  std::optional<double> epsilon;        // replacer-type lifts
  double residual = 0.0;                // ||L_t(rho_t) - drho_t||_F
  std::optional<double> sigma_min_eig;  // min eigenvalue of the replacer target
  bool gksl_valid = false;
  double gen_norm = 0.0;                // superoperator Frobenius norm
};

/// Time grid with one generator per point plus per-point diagnostics.
/// Superoperators are always populated; the Lindbladian form is kept when the
/// construction produces one (blended generators are superoperator-only).
struct LiftFamily {
  int dim = 0;
  std::vector<double> times;
  std::vector<Superoperator> superops;
  std::vector<std::optional<Lindbladian>> lindblads;
  std::vector<LiftPointDiagnostics> diagnostics;

  size_t size() const { return times.size(); }
  /// Generator at arbitrary t by affine interpolation between grid samples
  /// (clamped at the ends).
  Superoperator interpolated(double t) const;
  double max_residual() const;
};

/// Largest eps >= 0 with rho + eps*v PSD; +infinity when the ray never
/// leaves the cone. Bisection on the smallest eigenvalue with bracket
/// growth, relative tolerance 1e-12.
double max_feasible_epsilon(const DensityMatrix& rho, const TangentDirection& v);

struct EpsilonPolicy {
  enum class Kind { Adaptive, FixedFormula, Constant };
  Kind kind = Kind::Adaptive;
  double value = 1.0;  // for Constant

  static EpsilonPolicy adaptive() { return {Kind::Adaptive, 0.0}; }
  /// eps_t = e^{1 - 1/(1-t)^2}; never fails, records target validity instead.
  static EpsilonPolicy fixed_formula() { return {Kind::FixedFormula, 0.0}; }
  static EpsilonPolicy constant(double eps) { return {Kind::Constant, eps}; }
};

/// Replacer lift L_t = (1/eps_t)(R_{rho_t + eps_t v_t} - id) on the grid.
/// The adaptive policy uses eps_t = min(1, eps_max(t)/2) and throws
/// NotInTangentCone when eps_max = 0 at a grid point.
LiftFamily replacer_lift(const Trajectory& traj, const std::vector<double>& grid,
                         const EpsilonPolicy& policy, double fd_step = 1e-5);

/// Eigenframe lift: replacer on the support, jump operators into the kernel
/// for the kernel block of the velocity, Hamiltonian coupling for the
/// support-kernel block, then a nonnegative least-squares rate polish.
/// Throws NotInTangentCone when the kernel compression of the velocity has
/// an eigenvalue below -rank_tol, ResidualTooLarge when the fit misses 1e-8.
LiftFamily spectral_lift(const Trajectory& traj, const std::vector<double>& grid,
                         double rank_tol = tol::rank, double fd_step = 1e-5);

/// Substitutes the off-support action by an affine blend of the generators
/// frozen at the window edges, at grid points inside a window around each
/// rank-shift. Windows are [tau - window, tau + window] and must not overlap.
LiftFamily rankshift_interpolation(const LiftFamily& family, const Trajectory& traj,
                                   const std::vector<double>& rankshift_times, double window,
                                   double rank_tol = tol::rank);

struct GeometricLift {
  std::vector<double> grid;          // reparameterized time in [0, 1)
  std::vector<double> f_values;      // f(t) = e^{1 - 1/(t-1)^2}
  std::vector<double> coefficients;  // f'/(f-1)
  double coefficient_sup = 0.0;
  double coefficient_last = 0.0;
  Trajectory reparameterized_path;   // eta_t = (1-f) sigma_a + f sigma_b
  LiftFamily literal_family;           // L_t = (f'/(f-1))(id - R_{sigma_b})
  /// Adaptive replacer lift of the affine segment on its open interior;
  /// absent when a grid point falls outside the tangent cone.
  std::optional<LiftFamily> replacer_alternative;
};

/// Geometric (reparameterized) lift of the affine segment between two
/// densities, following the mollifier construction literally. The default
/// grid starts at t = 1/8: the literal coefficient behaves like 1/t near
/// t = 0 where the path sits exactly at the replacer target, so the
/// reported sup is only finite away from that endpoint.
GeometricLift geometric_lift_affine(const DensityMatrix& sigma_a, const DensityMatrix& sigma_b,
                                    std::vector<double> grid = {});

enum class FeasibilityObjective { None, MinimizeTotalRate };

struct SolverParams {
  int max_iter = 20000;
  double step = 1.0;    // initial gradient step, adapted by backtracking
  double tol = 1e-8;    // residual target
};

/// Simultaneous lift constraints L(X_i) = Y_i over Lindbladians in
/// Kossakowski form (H, C >= 0).
struct FeasibilityProblem {
  int dim = 0;
  std::vector<std::pair<Matrix, Matrix>> constraints;  // (X_i, Y_i)
  FeasibilityObjective objective = FeasibilityObjective::None;
  SolverParams params;
  /// Optional warm start. The default (empty) keeps the deterministic zero
  /// initialization; dense scenario sweeps pass the neighboring solution.
  std::optional<Lindbladian> warm_start;
  /// Optional cap on tr C, enforced by projection (used by the minimal
  /// dissipation search). Negative means no cap.
  double trace_cap = -1.0;
};

struct FeasibilityOutcome {
  bool feasible = false;
  Lindbladian generator;
  double residual = 0.0;
  int iterations = 0;
  double total_rate = 0.0;  // tr C of the returned generator
};

/// Accelerated projected gradient (PSD cone projection by eigenvalue
/// clipping, monotone restart) on min sum_i ||L(X_i) - Y_i||_F^2.
/// Infeasibility is reported through the converged residual; there is no
/// dual certificate.
FeasibilityOutcome feasibility_lift(const FeasibilityProblem& problem);

struct TangentConeResult {
  bool member = false;
  bool necessary_check = false;  // kernel compression of v >= -tol
  std::optional<double> residual;
  std::optional<Lindbladian> witness;
};

/// Membership of v in the tangent cone at rho: the kernel-compression
/// necessary condition first (no solve when it fails), then a replacer
/// witness when rho + eps v stays PSD for some eps > 0, else a single
/// constraint feasibility solve.
TangentConeResult tangent_cone_membership(const DensityMatrix& rho, const TangentDirection& v,
                                          double tolerance = tol::feasibility);

/// Smallest total rate tr C achieving residual <= 1e-8, by bisection on a
/// trace cap around the first feasible bracket. rate_grid optionally seeds
/// the bracket probes. Throws NotInTangentCone when no cap is feasible.
double min_dissipation_rate(const DensityMatrix& rho, const TangentDirection& v,
                            const std::vector<double>& rate_grid = {},
                            double tolerance = tol::feasibility);

}  // namespace lindlift
