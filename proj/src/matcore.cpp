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

#include "lindlift/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lindlift {

namespace {

double offdiag_mass(const Matrix& a) {
  double s = 0.0;
  const int d = a.dim();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// Fixes the global phase of an eigenvector column: the first component whose
// magnitude exceeds 1e-9 of the column norm is made real positive.
void fix_column_phase(Matrix& u, int col) {
  const int d = u.dim();
  double norm = 0.0;
  for (int r = 0; r < d; ++r) norm += std::norm(u(r, col));
  norm = std::sqrt(norm);
  if (norm == 0.0) return;
  for (int r = 0; r < d; ++r) {
    const cd v = u(r, col);
    if (std::abs(v) > 1e-9 * norm) {
      const cd phase = std::conj(v) / std::abs(v);
      for (int k = 0; k < d; ++k) u(k, col) *= phase;
      return;
    }
  }
}

}  // namespace

EigResult hermitian_eig(const Matrix& m, double herm_tol) {
  const int d = m.dim();
  const double norm = m.frobenius_norm();
  if (m.hermiticity_defect() > herm_tol * (1.0 + norm)) {
    throw Error(ErrorCode::NonHermitianInput, "hermitian_eig: input is not Hermitian");
  }

  Matrix a = m.hermitized();
  Matrix v = Matrix::identity(d);
  const double target = 1e-14 * std::max(norm, 1e-300);

  for (int sweep = 0; sweep < 100 && offdiag_mass(a) > target; ++sweep) {
    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const cd apq = a(p, q);
        const double g = std::abs(apq);
        if (g <= 1e-300) continue;
        const cd u = apq / g;  // phase, so conj(u)*apq is real
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Unitary rotation R: R(p,p)=c, R(p,q)=s, R(q,p)=-s*conj(u), R(q,q)=c*conj(u).
        const cd rqp = -s * std::conj(u);
        const cd rqq = c * std::conj(u);
        // columns: A <- A R, V <- V R
        for (int r = 0; r < d; ++r) {
          const cd arp = a(r, p), arq = a(r, q);
          a(r, p) = arp * c + arq * rqp;
          a(r, q) = arp * s + arq * rqq;
          const cd vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp * c + vrq * rqp;
          v(r, q) = vrp * s + vrq * rqq;
        }
        // rows: A <- R^dagger A
        for (int col = 0; col < d; ++col) {
          const cd apc = a(p, col), aqc = a(q, col);
          a(p, col) = c * apc + std::conj(rqp) * aqc;
          a(q, col) = s * apc + std::conj(rqq) * aqc;
        }
        a(p, q) = cd(0.0);
        a(q, p) = cd(0.0);
      }
    }
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  for (int c = 0; c < d; ++c) fix_column_phase(v, c);
  // descending; exact ties keep the deterministic Jacobi output order
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

  EigResult out;
  out.eigenvalues.resize(d);
  out.eigenvectors = Matrix(d);
  for (int c = 0; c < d; ++c) {
    out.eigenvalues[c] = a(order[c], order[c]).real();
    for (int r = 0; r < d; ++r) out.eigenvectors(r, c) = v(r, order[c]);
  }
  return out;
}

double min_eigenvalue(const Matrix& m, double herm_tol) {
  return hermitian_eig(m, herm_tol).eigenvalues.back();
}

double spectral_norm_hermitian(const Matrix& m, double herm_tol) {
  const auto eig = hermitian_eig(m, herm_tol);
  return std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
}

double trace_norm_hermitian(const Matrix& m, double herm_tol) {
  const auto eig = hermitian_eig(m, herm_tol);
  double s = 0.0;
  for (double l : eig.eigenvalues) s += std::abs(l);
  return s;
}

Matrix support_projection(const Matrix& rho, double rank_tol) {
  const auto eig = hermitian_eig(rho);
  const int d = rho.dim();
  Matrix p(d);
  for (int k = 0; k < d; ++k) {
    if (eig.eigenvalues[k] <= rank_tol) continue;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        p(r, c) += eig.eigenvectors(r, k) * std::conj(eig.eigenvectors(c, k));
  }
  return p.hermitized();
}

DensityReport validate_density(const Matrix& m, double tolerance) {
  DensityReport rep;
  rep.hermitian = m.hermiticity_defect() <= tol::hermiticity * (1.0 + m.frobenius_norm());
  rep.trace_dev = std::abs(m.trace() - cd(1.0));
  rep.min_eig = min_eigenvalue(m.hermitized());
  rep.is_density = rep.hermitian && rep.trace_dev <= tolerance && rep.min_eig >= -tolerance;
  return rep;
}

DensityMatrix::DensityMatrix(Matrix m, double tolerance) : m_(std::move(m)) {
  if (m_.dim() < 1 || !m_.is_finite()) {
    throw Error(ErrorCode::InvalidDensity, "DensityMatrix: non-finite or empty");
  }
  const auto rep = validate_density(m_, tolerance);
  if (!rep.is_density) {
    throw Error(ErrorCode::InvalidDensity, "DensityMatrix: validation failed (trace dev " +
                                               std::to_string(rep.trace_dev) + ", min eig " +
                                               std::to_string(rep.min_eig) + ")");
  }
}

TangentDirection::TangentDirection(Matrix m, double tolerance) : m_(std::move(m)) {
  if (m_.hermiticity_defect() > tol::hermiticity * (1.0 + m_.frobenius_norm())) {
    throw Error(ErrorCode::NonHermitianInput, "TangentDirection: not Hermitian");
  }
  if (std::abs(m_.trace()) > tolerance * (1.0 + m_.frobenius_norm())) {
    throw Error(ErrorCode::InvalidInput, "TangentDirection: not traceless");
  }
}

TangentDirection TangentDirection::project(const Matrix& m) {
  Matrix h = m.hermitized();
  const cd tr = h.trace();
  const int d = h.dim();
  for (int i = 0; i < d; ++i) h(i, i) -= tr / static_cast<double>(d);
  return TangentDirection(std::move(h));
}

}  // namespace lindlift
