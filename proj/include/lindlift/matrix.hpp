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

#include <complex>
#include <initializer_list>
#include <vector>

namespace lindlift {

using cd = std::complex<double>;

/// Dense square complex matrix, row-major. This is the workhorse for states,
/// generators and superoperators; dimensions stay small (at most d^2 x d^2
/// for d <= 16) so everything is kept simple and allocation-friendly.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}
  Matrix(int dim, std::vector<cd> entries);

  static Matrix identity(int dim);
  static Matrix zero(int dim) { return Matrix(dim); }
  /// Convenience constructor for literal test matrices.
  static Matrix from_rows(std::initializer_list<std::initializer_list<cd>> rows);
  /// Matrix unit e_{r,c} = |r><c|.
  static Matrix unit(int dim, int r, int c);

  int dim() const { return dim_; }
  size_t size() const { return a_.size(); }

  cd& operator()(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
  const cd& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

  const std::vector<cd>& data() const { return a_; }
  std::vector<cd>& data() { return a_; }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(cd s);

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conjugate() const;

  cd trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool is_finite() const;

  /// (M + M^dagger)/2
  Matrix hermitized() const;
  /// ||M - M^dagger||_F
  double hermiticity_defect() const;

  /// Applies the matrix to a vector (matrix-vector product).
  std::vector<cd> apply(const std::vector<cd>& v) const;

 private:
  int dim_ = 0;
  std::vector<cd> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(cd s, Matrix a);
Matrix operator*(double s, Matrix a);

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Column-stacking vectorization: vec(X)[j*d + i] = X(i, j).
std::vector<cd> vec(const Matrix& x);
Matrix unvec(const std::vector<cd>& v, int dim);

double distance(const Matrix& a, const Matrix& b);
/// Real part of the Frobenius inner product tr(A^dagger B).
double inner_real(const Matrix& a, const Matrix& b);

/// Solves A X = B by LU with partial pivoting.
Matrix lu_solve(Matrix a, Matrix b);

/// Matrix exponential by scaling-and-squaring with a [7/7] Pade approximant.
Matrix expm(const Matrix& a);

}  // namespace lindlift
