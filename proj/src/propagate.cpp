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

#include "lindlift/propagate.hpp"

#include <algorithm>
#include <cmath>

namespace lindlift {

namespace {

bool family_is_constant(const LiftFamily& family) {
  for (size_t k = 1; k < family.size(); ++k) {
    if (distance(family.superops[k].m, family.superops[0].m) != 0.0) return false;
  }
  return true;
}

// Hermitize + trace-renormalize, recording the drift.
Matrix postprocess(const Matrix& raw, double* trace_drift, double* herm_drift) {
  *herm_drift = std::max(*herm_drift, raw.hermiticity_defect());
  Matrix h = raw.hermitized();
  const double tr = h.trace().real();
  *trace_drift = std::max(*trace_drift, std::abs(tr - 1.0));
  if (tr != 0.0) h *= cd(1.0 / tr);
  return h;
}

}  // namespace

EvolveResult evolve(const LiftFamily& family, const DensityMatrix& rho0,
                    const std::vector<double>& grid) {
  if (grid.size() < 2) throw Error(ErrorCode::GridMismatch, "evolve: need >= 2 grid points");
  if (family.size() == 0) throw Error(ErrorCode::GridMismatch, "evolve: empty family");
  const bool constant = family.size() == 1 || family_is_constant(family);
  if (!constant &&
      (family.times.front() > grid.front() + 1e-9 || family.times.back() < grid.back() - 1e-9)) {
    throw Error(ErrorCode::GridMismatch, "evolve: family does not cover the grid");
  }
  const int d = family.dim;
  if (rho0.dim() != d) throw Error(ErrorCode::GridMismatch, "evolve: state dimension mismatch");

  EvolveResult result;
  std::vector<Matrix> exp_states{rho0.mat()};
  std::vector<Matrix> rk4_states{rho0.mat()};
  exp_states.reserve(grid.size());
  rk4_states.reserve(grid.size());

  // constant families need a single matrix exponential only
  Matrix cached_step;
  double cached_delta = -1.0;
  Matrix const_s;
  if (constant) const_s = family.superops[0].m;

  auto generator_at = [&](double t) -> Matrix {
    if (constant) return const_s;
    return family.interpolated(t).m;
  };

  Matrix rho_exp = rho0.mat();
  Matrix rho_rk4 = rho0.mat();
  for (size_t k = 0; k + 1 < grid.size(); ++k) {
    const double t = grid[k];
    const double delta = grid[k + 1] - t;

    // (a) midpoint exponential step
    Matrix step;
    if (constant && cached_delta == delta) {
      step = cached_step;
    } else {
      Matrix a = generator_at(t + 0.5 * delta);
      a *= cd(delta);
      step = expm(a);
      if (constant) {
        cached_step = step;
        cached_delta = delta;
      }
    }
    rho_exp = postprocess(unvec(step.apply(vec(rho_exp)), d), &result.max_trace_drift,
                          &result.max_herm_drift);
    exp_states.push_back(rho_exp);

    // (b) classical RK4 on the vectorized master equation
    const Matrix s0 = generator_at(t);
    const Matrix s_half = generator_at(t + 0.5 * delta);
    const Matrix s1 = generator_at(t + delta);
    const auto y = vec(rho_rk4);
    const auto k1 = s0.apply(y);
    std::vector<cd> tmp(y.size());
    for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * delta * k1[i];
    const auto k2 = s_half.apply(tmp);
    for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * delta * k2[i];
    const auto k3 = s_half.apply(tmp);
    for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + delta * k3[i];
    const auto k4 = s1.apply(tmp);
    for (size_t i = 0; i < y.size(); ++i) {
      tmp[i] = y[i] + (delta / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    rho_rk4 = postprocess(unvec(tmp, d), &result.max_trace_drift, &result.max_herm_drift);
    rk4_states.push_back(rho_rk4);

    result.max_integrator_disagreement =
        std::max(result.max_integrator_disagreement, distance(rho_exp, rho_rk4));
  }

  result.exp_trajectory =
      Trajectory::grid(d, grid, std::move(exp_states), std::nullopt, /*validate=*/false);
  result.rk4_trajectory =
      Trajectory::grid(d, grid, std::move(rk4_states), std::nullopt, /*validate=*/false);
  return result;
}

CpStepReport cp_step_check(const Superoperator& s, double delta) {
  if (delta < 0.0) throw Error(ErrorCode::InvalidInput, "cp_step_check: delta must be >= 0");
  Matrix a = s.m;
  a *= cd(delta);
  const Superoperator step{s.dim, expm(a)};
  const ChoiMatrix choi = choi_of(step);
  CpStepReport rep;
  rep.choi_min_eig = min_eigenvalue(choi.m.hermitized());
  rep.cp = rep.choi_min_eig >= -1e-8;
  return rep;
}

CpStepReport cp_step_check(const Lindbladian& lind, double delta) {
  return cp_step_check(to_superoperator(lind), delta);
}

VerifyReport verify_lift(const Trajectory& traj, const LiftFamily& family,
                         const std::vector<double>& grid, double delta) {
  VerifyReport rep;
  rep.grid_step = delta;

  const bool constant = family.size() == 1 || family_is_constant(family);
  for (double t : grid) {
    const auto [rho, v] = sample_with_derivative(traj, t);
    const Superoperator s = constant ? family.superops[0] : family.interpolated(t);
    rep.max_residual = std::max(rep.max_residual, distance(s.apply(rho.mat()), v.mat()));
  }

  // integrate from the first grid point and compare against the path;
  // the deviation is measured on the RK4 trajectory, the integrator
  // disagreement is reported alongside
  const auto igrid = step_grid(grid.front(), grid.back(), delta);
  const DensityMatrix rho0(traj.state(grid.front()).hermitized(), 1e-6);
  const auto evolved = evolve(family, rho0, igrid);
  for (size_t k = 0; k < igrid.size(); ++k) {
    rep.max_traj_deviation = std::max(
        rep.max_traj_deviation, distance(evolved.rk4_trajectory.knot_states()[k],
                                         traj.state(igrid[k]).hermitized()));
  }
  rep.max_integrator_disagreement = evolved.max_integrator_disagreement;

  // stepwise CP witnesses
  rep.all_steps_cp = true;
  double worst = 0.0;
  if (constant) {
    const auto cp = cp_step_check(family.superops[0], delta);
    rep.all_steps_cp = cp.cp;
    worst = std::min(worst, cp.choi_min_eig);
  } else {
    for (double t : grid) {
      const auto cp = cp_step_check(family.interpolated(t), delta);
      rep.all_steps_cp = rep.all_steps_cp && cp.cp;
      worst = std::min(worst, cp.choi_min_eig);
    }
  }
  rep.max_step_choi_negativity = std::max(0.0, -worst);
  return rep;
}

}  // namespace lindlift
