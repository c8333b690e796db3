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

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "lindlift/matcore.hpp"

namespace lindlift {

/// Uniformly spaced grid of n points on [t0, t1], endpoints included.
std::vector<double> linspace(double t0, double t1, int n);
/// Grid with fixed step; the last point is t1 when it lands within 1e-12.
std::vector<double> step_grid(double t0, double t1, double step);

/// A time-parameterized path of density matrices on [t0, t1), with optional
/// exact derivatives. Sources: analytic evaluation functions, sampled grids
/// (linearly interpolated), or piecewise affine knots. Endpoint t1 is
/// sampleable when finite (closed on the right for practical grids).
class Trajectory {
 public:
  using StateFn = std::function<Matrix(double)>;

  static Trajectory analytic(int dim, double t0, double t1, StateFn state,
                             StateFn derivative = nullptr);
  /// times strictly increasing; states validated at tol 1e-8 unless
  /// validate == false (used for raw integrator output).
  static Trajectory grid(int dim, std::vector<double> times, std::vector<Matrix> states,
                         std::optional<std::vector<Matrix>> derivatives = std::nullopt,
                         bool validate = true);
  static Trajectory piecewise_affine(std::vector<double> knot_times, std::vector<Matrix> knots,
                                     bool validate = true);

  int dim() const { return dim_; }
  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  bool has_exact_derivative() const;
  bool is_piecewise_affine() const { return kind_ == Kind::PiecewiseAffine; }

  Matrix state(double t) const;
  /// Exact derivative when the source provides one; nullopt otherwise.
  std::optional<Matrix> exact_derivative(double t) const;

  const std::vector<double>& knot_times() const { return times_; }
  const std::vector<Matrix>& knot_states() const { return states_; }

 private:
  enum class Kind { Analytic, Grid, PiecewiseAffine };
  Kind kind_ = Kind::Grid;
  int dim_ = 0;
  double t0_ = 0.0, t1_ = 0.0;
  StateFn state_fn_, deriv_fn_;
  std::vector<double> times_;
  std::vector<Matrix> states_;
  std::vector<Matrix> derivs_;

  void check_interval(double t) const;
  int cell_of(double t) const;
};

/// Samples state and derivative at t. The derivative is the exact one when
/// available, else a central finite difference with step h (one-sided at the
/// interval edges); either way it is Hermitized and trace-projected.
std::pair<DensityMatrix, TangentDirection> sample_with_derivative(const Trajectory& traj, double t,
                                                                  double h = 1e-5);

struct RankProfile {
  std::vector<double> times;
  std::vector<std::vector<double>> eigenvalues;  // descending, per time
  std::vector<int> ranks;
  std::vector<double> rankshift_times;  // midpoints of cells where rank changes
  double integral_inv_gap = 0.0;        // trapezoid of 1/lambda_gap
  double integral_inv_sqrt_gap = 0.0;   // trapezoid of 1/sqrt(lambda_gap)
  double min_gap = 0.0;                 // smallest spectral gap over the grid
  /// Times where successive eigenframes matched with overlap below 0.9
  /// (eigenvector continuity warning, not an error).
  std::vector<double> frame_overlap_warnings;
};

RankProfile rank_profile(const Trajectory& traj, const std::vector<double>& grid,
                         double rank_tol = tol::rank);

/// Merges rank-shift times closer than min_separation into single events
/// (their midpoints), so windowed smoothing sees one event per dip.
std::vector<double> cluster_rankshift_times(const std::vector<double>& times,
                                            double min_separation);

/// Piecewise affine interpolation through the given density knots.
Trajectory piecewise_affine_from_points(const std::vector<Matrix>& states,
                                        const std::vector<double>& times);

struct AffineApproximation {
  Trajectory interpolant;
  double l1_error_estimate = 0.0;  // trapezoid estimate of the L1 (trace-norm) gap
};

AffineApproximation affine_approximation(const Trajectory& traj,
                                         const std::vector<double>& knot_grid);

/// Tensor-product path: factor i follows `base` when i is in S (1-based)
/// and stays at `asymptote` otherwise. Derivatives assemble by product rule.
Trajectory product_path(const Trajectory& base, const DensityMatrix& asymptote,
                        const std::set<int>& s, int n);

/// Grid-sampled copy (with derivatives when requested), e.g. for export.
Trajectory resample(const Trajectory& traj, const std::vector<double>& grid,
                    bool with_derivatives = false, double fd_step = 1e-5);

}  // namespace lindlift
