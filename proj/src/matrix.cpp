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

#include "lindlift/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace lindlift {

Matrix::Matrix(int dim, std::vector<cd> entries) : dim_(dim), a_(std::move(entries)) {
  if (a_.size() != static_cast<size_t>(dim) * dim) {
    throw std::invalid_argument("Matrix: entry count does not match dimension");
  }
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<cd>> rows) {
  const int d = static_cast<int>(rows.size());
  Matrix m(d);
  int r = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != d) {
      throw std::invalid_argument("Matrix::from_rows: ragged rows");
    }
    int c = 0;
    for (const cd& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

Matrix Matrix::unit(int dim, int r, int c) {
  Matrix m(dim);
  m(r, c) = 1.0;
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Matrix& Matrix::operator*=(cd s) {
  for (auto& v : a_) v *= s;
  return *this;
}

Matrix Matrix::adjoint() const {
  Matrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

Matrix Matrix::conjugate() const {
  Matrix m(dim_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = std::conj(a_[i]);
  return m;
}

cd Matrix::trace() const {
  cd t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::is_finite() const {
  for (const auto& v : a_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

Matrix Matrix::hermitized() const {
  Matrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c)
      m(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
  return m;
}

double Matrix::hermiticity_defect() const {
  double s = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) s += std::norm((*this)(r, c) - std::conj((*this)(c, r)));
  return std::sqrt(s);
}

std::vector<cd> Matrix::apply(const std::vector<cd>& v) const {
  std::vector<cd> out(static_cast<size_t>(dim_), cd(0.0));
  for (int r = 0; r < dim_; ++r) {
    cd acc = 0.0;
    const cd* row = a_.data() + static_cast<size_t>(r) * dim_;
    for (int c = 0; c < dim_; ++c) acc += row[c] * v[c];
    out[r] = acc;
  }
  return out;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

Matrix operator-(const Matrix& a) {
  Matrix m = a;
  return m *= cd(-1.0);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  const int d = a.dim();
  if (b.dim() != d) throw std::invalid_argument("Matrix multiply: dimension mismatch");
  Matrix out(d);
  for (int r = 0; r < d; ++r) {
    for (int k = 0; k < d; ++k) {
      const cd arc = a(r, k);
      if (arc == cd(0.0)) continue;
      for (int c = 0; c < d; ++c) out(r, c) += arc * b(k, c);
    }
  }
  return out;
}

Matrix operator*(cd s, Matrix a) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= cd(s); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }
Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

Matrix kron(const Matrix& a, const Matrix& b) {
  const int da = a.dim(), db = b.dim();
  Matrix out(da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      const cd aij = a(i, j);
      if (aij == cd(0.0)) continue;
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) out(i * db + k, j * db + l) = aij * b(k, l);
    }
  return out;
}

std::vector<cd> vec(const Matrix& x) {
  const int d = x.dim();
  std::vector<cd> v(static_cast<size_t>(d) * d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) v[static_cast<size_t>(j) * d + i] = x(i, j);
  return v;
}

Matrix unvec(const std::vector<cd>& v, int dim) {
  Matrix x(dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) x(i, j) = v[static_cast<size_t>(j) * dim + i];
  return x;
}

double distance(const Matrix& a, const Matrix& b) { return (a - b).frobenius_norm(); }

double inner_real(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  const auto& av = a.data();
  const auto& bv = b.data();
  for (size_t i = 0; i < av.size(); ++i) s += (std::conj(av[i]) * bv[i]).real();
  return s;
}

Matrix lu_solve(Matrix a, Matrix b) {
  const int n = a.dim();
  if (b.dim() != n) throw std::invalid_argument("lu_solve: dimension mismatch");
  std::vector<int> piv(n);
  for (int i = 0; i < n; ++i) piv[i] = i;

  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a(k, k));
    for (int r = k + 1; r < n; ++r) {
      const double v = std::abs(a(r, k));
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("lu_solve: singular matrix");
    if (p != k) {
      for (int c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
      for (int c = 0; c < n; ++c) std::swap(b(k, c), b(p, c));
    }
    const cd pivot = a(k, k);
    for (int r = k + 1; r < n; ++r) {
      const cd f = a(r, k) / pivot;
      if (f == cd(0.0)) continue;
      a(r, k) = f;
      for (int c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
      for (int c = 0; c < n; ++c) b(r, c) -= f * b(k, c);
    }
  }
  // back substitution
  Matrix x(n);
  for (int c = 0; c < n; ++c) {
    for (int r = n - 1; r >= 0; --r) {
      cd acc = b(r, c);
      for (int k = r + 1; k < n; ++k) acc -= a(r, k) * x(k, c);
      x(r, c) = acc / a(r, r);
    }
  }
  return x;
}

Matrix expm(const Matrix& a) {
  const int n = a.dim();
  // 1-norm estimate (max column sum)
  double norm1 = 0.0;
  for (int c = 0; c < n; ++c) {
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += std::abs(a(r, c));
    norm1 = std::max(norm1, s);
  }
  int squarings = 0;
  Matrix as = a;
  if (norm1 > 0.9) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.9)));
    as *= cd(std::ldexp(1.0, -squarings));
  }

  // [7/7] Pade approximant
  static const double b[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                             25200.0,    1512.0,    56.0,      1.0};
  const Matrix id = Matrix::identity(n);
  const Matrix a2 = as * as;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  Matrix u = b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  u = as * u;
  Matrix v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  Matrix x = lu_solve(v - u, v + u);
  for (int i = 0; i < squarings; ++i) x = x * x;
  return x;
}

}  // namespace lindlift
