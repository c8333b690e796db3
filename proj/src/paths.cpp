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

#include "lindlift/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace lindlift {

std::vector<double> linspace(double t0, double t1, int n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = t0;
    return g;
  }
  const double h = (t1 - t0) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = t0 + i * h;
  g.back() = t1;
  return g;
}

std::vector<double> step_grid(double t0, double t1, double step) {
  std::vector<double> g;
  for (double t = t0; t <= t1 + 1e-12; t += step) g.push_back(std::min(t, t1));
  return g;
}

Trajectory Trajectory::analytic(int dim, double t0, double t1, StateFn state, StateFn derivative) {
  Trajectory tr;
  tr.kind_ = Kind::Analytic;
  tr.dim_ = dim;
  tr.t0_ = t0;
  tr.t1_ = t1;
  tr.state_fn_ = std::move(state);
  tr.deriv_fn_ = std::move(derivative);
  return tr;
}

Trajectory Trajectory::grid(int dim, std::vector<double> times, std::vector<Matrix> states,
                            std::optional<std::vector<Matrix>> derivatives, bool validate) {
  if (times.size() < 2 || times.size() != states.size()) {
    throw Error(ErrorCode::InvalidInput, "Trajectory::grid: need matching times/states, >= 2");
  }
  for (size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1]) {
      throw Error(ErrorCode::NonIncreasingTimes, "Trajectory::grid: times must strictly increase");
    }
  }
  if (validate) {
    for (const auto& s : states) {
      const auto rep = validate_density(s, 1e-8);
      if (!rep.is_density) {
        throw Error(ErrorCode::NotADensity, "Trajectory::grid: state fails density validation");
      }
    }
  }
  Trajectory tr;
  tr.kind_ = Kind::Grid;
  tr.dim_ = dim;
  tr.t0_ = times.front();
  tr.t1_ = times.back();
  tr.times_ = std::move(times);
  tr.states_ = std::move(states);
  if (derivatives) {
    if (derivatives->size() != tr.times_.size()) {
      throw Error(ErrorCode::InvalidInput, "Trajectory::grid: derivative count mismatch");
    }
    tr.derivs_ = std::move(*derivatives);
  }
  return tr;
}

Trajectory Trajectory::piecewise_affine(std::vector<double> knot_times, std::vector<Matrix> knots,
                                        bool validate) {
  const int dim = knots.empty() ? 0 : knots.front().dim();
  Trajectory tr = grid(dim, std::move(knot_times), std::move(knots), std::nullopt, validate);
  tr.kind_ = Kind::PiecewiseAffine;
  return tr;
}

bool Trajectory::has_exact_derivative() const {
  switch (kind_) {
    case Kind::Analytic: return static_cast<bool>(deriv_fn_);
    case Kind::Grid: return !derivs_.empty();
    case Kind::PiecewiseAffine: return true;
  }
  return false;
}

void Trajectory::check_interval(double t) const {
  if (t < t0_ - 1e-12 || t > t1_ + 1e-12) {
    throw Error(ErrorCode::OutOfInterval, "Trajectory: t = " + std::to_string(t) +
                                              " outside [" + std::to_string(t0_) + ", " +
                                              std::to_string(t1_) + "]");
  }
}

int Trajectory::cell_of(double t) const {
  // index k with times_[k] <= t < times_[k+1]; last cell is closed
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  int k = static_cast<int>(it - times_.begin()) - 1;
  k = std::clamp(k, 0, static_cast<int>(times_.size()) - 2);
  return k;
}

Matrix Trajectory::state(double t) const {
  check_interval(t);
  if (kind_ == Kind::Analytic) return state_fn_(t);
  const int k = cell_of(t);
  const double tk = times_[k], tk1 = times_[k + 1];
  const double w = (t - tk) / (tk1 - tk);
  return (1.0 - w) * states_[k] + w * states_[k + 1];
}

std::optional<Matrix> Trajectory::exact_derivative(double t) const {
  check_interval(t);
  switch (kind_) {
    case Kind::Analytic:
      if (deriv_fn_) return deriv_fn_(t);
      return std::nullopt;
    case Kind::Grid: {
      if (derivs_.empty()) return std::nullopt;
      const int k = cell_of(t);
      const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
      return (1.0 - w) * derivs_[k] + w * derivs_[k + 1];
    }
    case Kind::PiecewiseAffine: {
      // right-continuous cell slope
      const int k = cell_of(t);
      return (1.0 / (times_[k + 1] - times_[k])) * (states_[k + 1] - states_[k]);
    }
  }
  return std::nullopt;
}

std::pair<DensityMatrix, TangentDirection> sample_with_derivative(const Trajectory& traj, double t,
                                                                  double h) {
  Matrix rho = traj.state(t);
  Matrix v(traj.dim());
  if (auto exact = traj.exact_derivative(t)) {
    v = std::move(*exact);
  } else {
    if (h <= 0.0) throw Error(ErrorCode::InvalidInput, "sample_with_derivative: h must be > 0");
    const double lo = traj.t_begin(), hi = traj.t_end();
    if (t - h >= lo && t + h <= hi) {
      v = (1.0 / (2.0 * h)) * (traj.state(t + h) - traj.state(t - h));
    } else if (t + h <= hi) {
      v = (1.0 / h) * (traj.state(t + h) - traj.state(t));
    } else {
      v = (1.0 / h) * (traj.state(t) - traj.state(t - h));
    }
  }
  return {DensityMatrix(rho.hermitized(), 1e-8), TangentDirection::project(v)};
}

RankProfile rank_profile(const Trajectory& traj, const std::vector<double>& grid,
                         double rank_tol) {
  RankProfile profile;
  profile.times = grid;
  profile.min_gap = std::numeric_limits<double>::infinity();

  std::vector<double> inv_gap, inv_sqrt_gap;
  Matrix prev_frame;
  for (size_t i = 0; i < grid.size(); ++i) {
    const Matrix rho = traj.state(grid[i]).hermitized();
    const auto eig = hermitian_eig(rho);
    profile.eigenvalues.push_back(eig.eigenvalues);
    int rank = 0;
    double gap = 0.0;
    for (double l : eig.eigenvalues) {
      if (l > rank_tol) {
        ++rank;
        gap = l;  // eigenvalues descending: last one above tol is the gap
      }
    }
    if (rank == 0) gap = std::max(eig.eigenvalues.front(), 1e-300);
    profile.ranks.push_back(rank);
    profile.min_gap = std::min(profile.min_gap, gap);
    inv_gap.push_back(1.0 / gap);
    inv_sqrt_gap.push_back(1.0 / std::sqrt(gap));

    // eigenvector continuity monitoring: match successive frames greedily
    if (i > 0) {
      const Matrix overlap = prev_frame.adjoint() * eig.eigenvectors;
      const int d = overlap.dim();
      std::vector<bool> used(d, false);
      double worst = 1.0;
      for (int c = 0; c < d; ++c) {
        double best = 0.0;
        int best_r = -1;
        for (int r = 0; r < d; ++r) {
          if (used[r]) continue;
          const double o = std::abs(overlap(r, c));
          if (o > best) {
            best = o;
            best_r = r;
          }
        }
        if (best_r >= 0) used[best_r] = true;
        worst = std::min(worst, best);
      }
      if (worst < 0.9) profile.frame_overlap_warnings.push_back(grid[i]);
    }
    prev_frame = eig.eigenvectors;
  }

  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    const double dt = grid[i + 1] - grid[i];
    profile.integral_inv_gap += 0.5 * dt * (inv_gap[i] + inv_gap[i + 1]);
    profile.integral_inv_sqrt_gap += 0.5 * dt * (inv_sqrt_gap[i] + inv_sqrt_gap[i + 1]);
    if (profile.ranks[i + 1] != profile.ranks[i]) {
      profile.rankshift_times.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
  }
  return profile;
}

std::vector<double> cluster_rankshift_times(const std::vector<double>& times,
                                            double min_separation) {
  std::vector<double> out;
  size_t i = 0;
  while (i < times.size()) {
    size_t j = i;
    while (j + 1 < times.size() && times[j + 1] - times[j] < min_separation) ++j;
    out.push_back(0.5 * (times[i] + times[j]));
    i = j + 1;
  }
  return out;
}

Trajectory piecewise_affine_from_points(const std::vector<Matrix>& states,
                                        const std::vector<double>& times) {
  if (states.size() < 2) {
    throw Error(ErrorCode::InvalidInput, "piecewise_affine_from_points: need >= 2 points");
  }
  for (size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1]) {
      throw Error(ErrorCode::NonIncreasingTimes, "piecewise_affine_from_points: bad times");
    }
  }
  for (const auto& s : states) {
    if (!validate_density(s, 1e-8).is_density) {
      throw Error(ErrorCode::NotADensity, "piecewise_affine_from_points: knot is not a density");
    }
  }
  return Trajectory::piecewise_affine(times, states);
}

AffineApproximation affine_approximation(const Trajectory& traj,
                                         const std::vector<double>& knot_grid) {
  std::vector<Matrix> knots;
  knots.reserve(knot_grid.size());
  for (double t : knot_grid) knots.push_back(traj.state(t).hermitized());
  Trajectory interp = Trajectory::piecewise_affine(knot_grid, knots, /*validate=*/false);

  // refined trapezoid estimate of the trace-norm gap
  constexpr int kRefine = 8;
  double err = 0.0;
  for (size_t k = 0; k + 1 < knot_grid.size(); ++k) {
    const double a = knot_grid[k], b = knot_grid[k + 1];
    const double h = (b - a) / kRefine;
    double prev = 0.0;
    for (int j = 0; j <= kRefine; ++j) {
      const double t = (j == kRefine) ? b : a + j * h;
      const double gap = trace_norm_hermitian((traj.state(t) - interp.state(t)).hermitized());
      if (j > 0) err += 0.5 * h * (prev + gap);
      prev = gap;
    }
  }
  return {std::move(interp), err};
}

Trajectory product_path(const Trajectory& base, const DensityMatrix& asymptote,
                        const std::set<int>& s, int n) {
  if (n < 1 || n > 3) {
    throw Error(ErrorCode::DimensionCap, "product_path: n must be in [1, 3]");
  }
  if (base.dim() != 2 || asymptote.dim() != 2) {
    throw Error(ErrorCode::DimensionCap, "product_path: base and asymptote must be qubit-valued");
  }
  const Matrix asym = asymptote.mat();
  const int dim = 1 << n;

  // lambdas own copies so the result outlives the caller's arguments
  const Trajectory base_copy = base;
  auto factor_state = [base_copy, asym, s](double t, int i) -> Matrix {
    return s.count(i) ? base_copy.state(t) : asym;
  };

  auto state_fn = [factor_state, n](double t) {
    Matrix out = factor_state(t, 1);
    for (int i = 2; i <= n; ++i) out = kron(out, factor_state(t, i));
    return out;
  };

  Trajectory::StateFn deriv_fn = nullptr;
  if (base.has_exact_derivative()) {
    deriv_fn = [factor_state, base_copy, s, n, dim](double t) {
      Matrix total(dim);
      for (int which : s) {
        Matrix term = (which == 1) ? *base_copy.exact_derivative(t) : factor_state(t, 1);
        for (int i = 2; i <= n; ++i) {
          term = kron(term, (i == which) ? *base_copy.exact_derivative(t) : factor_state(t, i));
        }
        total += term;
      }
      return total;
    };
  }
  return Trajectory::analytic(dim, base.t_begin(), base.t_end(), state_fn, deriv_fn);
}

Trajectory resample(const Trajectory& traj, const std::vector<double>& grid,
                    bool with_derivatives, double fd_step) {
  std::vector<Matrix> states;
  states.reserve(grid.size());
  std::optional<std::vector<Matrix>> derivs;
  if (with_derivatives) derivs.emplace();
  for (double t : grid) {
    const auto [rho, v] = sample_with_derivative(traj, t, fd_step);
    states.push_back(rho.mat());
    if (derivs) derivs->push_back(v.mat());
  }
  return Trajectory::grid(traj.dim(), grid, std::move(states), std::move(derivs),
                          /*validate=*/false);
}

}  // namespace lindlift
