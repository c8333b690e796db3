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
#include <vector>

#include "lindlift/matcore.hpp"

namespace lindlift {

/// Orthonormal traceless Hermitian basis (generalized Gell-Mann), fixed
/// order: symmetric off-diagonal (lexicographic j<k), antisymmetric
/// off-diagonal (lexicographic), then diagonal. tr(F_k F_l) = delta_kl.
/// This ordering is the "gellmann-v1" convention used in serialized files.
std::vector<Matrix> gellmann_basis(int dim);

/// A GKSL generator. The dissipative part is stored either as jump operators
/// with rates or as a Kossakowski matrix over the gellmann-v1 basis.
/// Validity (rates >= 0 / Kossakowski PSD) is not enforced structurally;
/// gksl_validity_check is the single source of truth for that.
struct Lindbladian {
  int dim = 0;
  Matrix hamiltonian;  // Hermitian, traceless by convention
  // jump form
  std::vector<Matrix> jumps;
  std::vector<double> rates;
  // Kossakowski form ((d^2-1) x (d^2-1) Hermitian over gellmann-v1)
  std::optional<Matrix> kossakowski;

  static Lindbladian zero(int dim);
  static Lindbladian from_jumps(Matrix hamiltonian, std::vector<Matrix> jumps,
                                std::vector<double> rates);
  static Lindbladian from_kossakowski(Matrix hamiltonian, Matrix kossakowski);
  bool has_kossakowski() const { return kossakowski.has_value(); }
};

/// d^2 x d^2 matrix acting on column-vectorized operators.
struct Superoperator {
  int dim = 0;   // Hilbert space dimension d
  Matrix m;      // d^2 x d^2

  static Superoperator identity(int dim);
  static Superoperator zero(int dim);
  Matrix apply(const Matrix& x) const;

  Superoperator& operator+=(const Superoperator& o);
  Superoperator& operator-=(const Superoperator& o);
  Superoperator& operator*=(double s);
};

Superoperator operator+(Superoperator a, const Superoperator& b);
Superoperator operator-(Superoperator a, const Superoperator& b);
Superoperator operator*(double s, Superoperator a);
/// Composition (matrix product of the vectorized representations).
Superoperator operator*(const Superoperator& a, const Superoperator& b);

/// Choi matrix C = sum_ij e_ij (x) Phi(e_ij).
struct ChoiMatrix {
  int dim = 0;
  Matrix m;  // d^2 x d^2
};

/// L_a(rho) = a rho a^dagger - 1/2 {a^dagger a, rho}.
Matrix dissipator_apply(const Matrix& a, const Matrix& rho);

/// Applies the generator: -i[H, X] + dissipative part.
Matrix lindbladian_apply(const Lindbladian& lind, const Matrix& x);

Superoperator to_superoperator(const Lindbladian& lind);
ChoiMatrix choi_of(const Superoperator& s);

/// R_sigma(X) = tr(X) sigma.
Superoperator replacer_superoperator(const DensityMatrix& sigma);
/// Jump-form Lindbladian equal to rate * (R_sigma - id); sigma may be any
/// Hermitian trace-one matrix, negative rates appear when it is not PSD.
Lindbladian replacer_lindbladian(const Matrix& sigma, double rate);

struct GkslValidityReport {
  bool hermiticity_preserving = false;
  bool trace_annihilating = false;
  bool conditionally_cp = false;
  double min_cond_eig = 0.0;
  bool valid = false;
};

/// GKSL membership test: Hermiticity-preserving, trace-annihilating and
/// conditionally completely positive (Choi positive off the maximally
/// entangled vector). The tolerance is relative to the Choi spectral norm.
GkslValidityReport gksl_validity_check(const Superoperator& s,
                                       double tolerance = tol::conditional_cp);

/// Converts the dissipative part to the Kossakowski form. Jumps with an
/// identity component yield a Hamiltonian correction so the superoperator
/// action is preserved exactly.
Lindbladian jumps_to_kossakowski(const Lindbladian& lind);

/// Diagonalizes the Kossakowski matrix into jumps + rates (clipped at
/// -1e-10). Throws NegativeKossakowski when an eigenvalue is below
/// -1e-8 * ||C||.
Lindbladian kossakowski_to_jumps(const Lindbladian& lind);

}  // namespace lindlift
