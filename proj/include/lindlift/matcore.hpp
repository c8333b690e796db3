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

#include <vector>

#include "lindlift/errors.hpp"
#include "lindlift/matrix.hpp"

namespace lindlift {

/// Default tolerances. Every operation that uses one takes it as a parameter
/// with these values as defaults.
namespace tol {
inline constexpr double hermiticity = 1e-12;
inline constexpr double density = 1e-10;
inline constexpr double rank = 1e-9;
inline constexpr double conditional_cp = 1e-9;
inline constexpr double feasibility = 1e-8;
inline constexpr double traceless = 1e-10;
}  // namespace tol

struct EigResult {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // unitary, columns match eigenvalues
};

/// Hermitian eigendecomposition by cyclic Jacobi sweeps. Sweeps run until the
/// off-diagonal Frobenius mass is below 1e-14 * ||M||_F. Ordering is
/// descending by eigenvalue; each eigenvector is phased so its first
/// component above a relative threshold is real positive, and exact
/// eigenvalue ties are broken lexicographically on the phased vectors.
/// Throws NonHermitianInput if the Hermiticity defect exceeds the tolerance.
EigResult hermitian_eig(const Matrix& m, double herm_tol = tol::hermiticity);

/// Smallest eigenvalue of a Hermitian matrix (convenience around the solver).
double min_eigenvalue(const Matrix& m, double herm_tol = tol::hermiticity);
/// Spectral norm max |eigenvalue| of a Hermitian matrix.
double spectral_norm_hermitian(const Matrix& m, double herm_tol = tol::hermiticity);
/// Trace norm (sum of |eigenvalues|) of a Hermitian matrix.
double trace_norm_hermitian(const Matrix& m, double herm_tol = tol::hermiticity);

/// Orthogonal projector onto the span of eigenvectors with eigenvalue
/// strictly above rank_tol.
Matrix support_projection(const Matrix& rho, double rank_tol = tol::rank);

struct DensityReport {
  bool hermitian = false;
  double trace_dev = 0.0;
  double min_eig = 0.0;
  bool is_density = false;
};

/// Diagnostic density check: Hermitian, |tr - 1| <= tol, min eig >= -tol.
DensityReport validate_density(const Matrix& m, double tolerance = tol::density);

/// d x d complex Hermitian PSD trace-one matrix. Validates on construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m, double tolerance = tol::density);
  const Matrix& mat() const { return m_; }
  int dim() const { return m_.dim(); }

 private:
  Matrix m_;
};

/// d x d complex Hermitian traceless matrix (a velocity of the state path).
class TangentDirection {
 public:
  explicit TangentDirection(Matrix m, double tolerance = tol::traceless);
  /// Hermitizes and trace-projects an arbitrary matrix into a valid direction.
  static TangentDirection project(const Matrix& m);
  const Matrix& mat() const { return m_; }
  int dim() const { return m_.dim(); }

 private:
  Matrix m_;
};

}  // namespace lindlift
