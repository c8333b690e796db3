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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lindlift/paths.hpp"
#include "lindlift/scenarios.hpp"
#include "test_support.hpp"

using namespace lindlift;
using namespace lindlift::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sample_with_derivative on a constant path") {
  auto state = [](double) { return Matrix::from_rows({{0.5, 0.0}, {0.0, 0.5}}); };
  const Trajectory traj = Trajectory::analytic(2, 0.0, 1.0, state);
  const auto [rho, v] = sample_with_derivative(traj, 0.5);
  CHECK(v.mat().frobenius_norm() < 1e-9);
}

TEST_CASE("sample_with_derivative on the dephasing paths") {
  // sin path at t = 0: derivative is cos(0)/2 on the off-diagonal
  const Trajectory sin_path = sin_dephasing_trajectory();
  const auto [rho0, v0] = sample_with_derivative(sin_path, 0.0);
  CHECK(distance(v0.mat(), Matrix::from_rows({{0.0, 0.5}, {0.5, 0.0}})) < 1e-12);

  const Trajectory eternal = eternal_nm_trajectory(5.0);
  const auto [re, ve] = sample_with_derivative(eternal, 0.0);
  CHECK(distance(ve.mat(), Matrix::from_rows({{0.0, -0.5}, {-0.5, 0.0}})) < 1e-12);

  CHECK_THROWS_AS(sample_with_derivative(sin_path, 7.0), Error);
}

TEST_CASE("finite differences agree with exact derivatives on smooth paths") {
  // drop the exact derivative and compare the central difference against it
  auto state = [](double t) {
    const double s = 0.5 * std::sin(t);
    return Matrix::from_rows({{0.5, s}, {s, 0.5}});
  };
  const Trajectory no_deriv = Trajectory::analytic(2, 0.0, 2.0 * kPi, state);
  const Trajectory with_deriv = sin_dephasing_trajectory();
  const double h = 1e-5;
  for (double t : {0.3, 1.0, 2.5, 5.0}) {
    const auto fd = sample_with_derivative(no_deriv, t, h).second;
    const auto exact = sample_with_derivative(with_deriv, t).second;
    // third derivative of the path is bounded by 1/2 entrywise
    CHECK(distance(fd.mat(), exact.mat()) <= 10.0 * h * h * 1.0);
    CHECK(std::abs(fd.mat().trace()) <= 1e-12);
  }
}

TEST_CASE("rank_profile flags the sin-dephasing rank dips") {
  const Trajectory traj = sin_dephasing_trajectory();
  const auto grid = step_grid(0.0, 2.0 * kPi, 1e-3);
  const auto profile = rank_profile(traj, grid, 1e-6);

  // rank 2 away from the dips, rank 1 near pi/2 and 3 pi/2
  bool saw_rank1_near_half_pi = false, saw_rank1_near_three_half_pi = false;
  for (size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const bool near_dip = std::abs(t - kPi / 2) < 0.01 || std::abs(t - 3 * kPi / 2) < 0.01;
    if (!near_dip) CHECK(profile.ranks[k] == 2);
    if (profile.ranks[k] == 1 && std::abs(t - kPi / 2) < 0.01) saw_rank1_near_half_pi = true;
    if (profile.ranks[k] == 1 && std::abs(t - 3 * kPi / 2) < 0.01) {
      saw_rank1_near_three_half_pi = true;
    }
  }
  CHECK(saw_rank1_near_half_pi);
  CHECK(saw_rank1_near_three_half_pi);
  CHECK(!profile.rankshift_times.empty());
  for (double tau : profile.rankshift_times) {
    const bool near_dip =
        std::abs(tau - kPi / 2) < 0.01 || std::abs(tau - 3 * kPi / 2) < 0.01;
    CHECK(near_dip);
  }
  // both dips merge into two events
  const auto events = cluster_rankshift_times(profile.rankshift_times, 0.1);
  CHECK(events.size() == 2);
}

TEST_CASE("rank_profile on full-rank and constant-pure paths") {
  const Trajectory eternal = eternal_nm_trajectory(5.0);
  const auto profile = rank_profile(eternal, step_grid(0.1, 5.0, 0.01));
  CHECK(profile.rankshift_times.empty());
  CHECK(profile.min_gap > 0.0);
  for (int r : profile.ranks) CHECK(r == 2);

  auto pure = [](double) { return Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}); };
  const Trajectory constant = Trajectory::analytic(2, 0.0, 1.0, pure);
  const auto pprofile = rank_profile(constant, step_grid(0.0, 1.0, 0.1));
  CHECK(pprofile.rankshift_times.empty());
  for (int r : pprofile.ranks) CHECK(r == 1);
}

TEST_CASE("piecewise affine interpolation") {
  const Matrix s0 = Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
  const Matrix s1 = Matrix::from_rows({{0.5, 0.0}, {0.0, 0.5}});
  const Trajectory traj = piecewise_affine_from_points({s0, s1}, {0.0, 2.0});
  CHECK(distance(traj.state(0.0), s0) < 1e-15);
  CHECK(distance(traj.state(2.0), s1) < 1e-15);
  CHECK(distance(traj.state(1.0), 0.5 * (s0 + s1)) < 1e-15);

  const Trajectory flat = piecewise_affine_from_points({s1, s1}, {0.0, 1.0});
  CHECK(sample_with_derivative(flat, 0.5).second.mat().frobenius_norm() < 1e-14);

  CHECK_THROWS_AS(piecewise_affine_from_points({s0, Matrix::from_rows({{2.0, 0.0}, {0.0, 0.0}})},
                                               {0.0, 1.0}),
                  Error);
  CHECK_THROWS_AS(piecewise_affine_from_points({s0, s1}, {1.0, 1.0}), Error);
}

TEST_CASE("affine_approximation error estimates") {
  // affine input reproduces exactly
  const Matrix s0 = Matrix::from_rows({{0.9, 0.0}, {0.0, 0.1}});
  const Matrix s1 = Matrix::from_rows({{0.2, 0.0}, {0.0, 0.8}});
  const Trajectory affine = piecewise_affine_from_points({s0, s1}, {0.0, 1.0});
  CHECK(affine_approximation(affine, linspace(0.0, 1.0, 5)).l1_error_estimate <= 1e-12);

  // C^2 input: halving the knot spacing shrinks the estimate ~4x
  const Trajectory smooth = sin_dephasing_trajectory();
  const double coarse = affine_approximation(smooth, linspace(0.0, 1.2, 7)).l1_error_estimate;
  const double fine = affine_approximation(smooth, linspace(0.0, 1.2, 13)).l1_error_estimate;
  CHECK(coarse / fine >= 3.5);
  CHECK(coarse / fine <= 4.5);

  // single cell on [0, 0.1]
  CHECK(affine_approximation(smooth, linspace(0.0, 0.1, 2)).l1_error_estimate <= 1e-3);
}

TEST_CASE("product_path construction") {
  const Trajectory base = eternal_nm_trajectory(5.0);
  const DensityMatrix asym(eternal_nm_asymptote());

  // empty subset: constant path with zero derivative
  const Trajectory empty = product_path(base, asym, {}, 2);
  const auto [rho, v] = sample_with_derivative(empty, 1.0);
  CHECK(distance(rho.mat(), kron(asym.mat(), asym.mat())) < 1e-12);
  CHECK(v.mat().frobenius_norm() < 1e-12);

  // S = {1}, n = 2: base (x) asymptote
  const Trajectory first = product_path(base, asym, {1}, 2);
  CHECK(distance(first.state(0.7), kron(base.state(0.7), asym.mat())) < 1e-14);

  // n = 1, S = {1}: the base itself
  const Trajectory same = product_path(base, asym, {1}, 1);
  CHECK(distance(same.state(0.3), base.state(0.3)) < 1e-14);

  // trace one along the grid
  for (double t : step_grid(0.0, 5.0, 0.5)) {
    CHECK(std::abs(first.state(t).trace() - cd(1.0)) < 1e-12);
  }

  CHECK_THROWS_AS(product_path(base, asym, {1}, 4), Error);
}
