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

#include "lindlift/gksl.hpp"

#include <cmath>
#include <utility>

namespace lindlift {

namespace {
const cd kI(0.0, 1.0);

Matrix traceless_part(const Matrix& m) {
  Matrix out = m;
  const cd shift = m.trace() / static_cast<double>(m.dim());
  for (int i = 0; i < m.dim(); ++i) out(i, i) -= shift;
  return out;
}
}  // namespace

std::vector<Matrix> gellmann_basis(int dim) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(dim) * dim - 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < dim; ++j)
    for (int k = j + 1; k < dim; ++k) {
      Matrix f(dim);
      f(j, k) = inv_sqrt2;
      f(k, j) = inv_sqrt2;
      basis.push_back(f);
    }
  for (int j = 0; j < dim; ++j)
    for (int k = j + 1; k < dim; ++k) {
      Matrix f(dim);
      f(j, k) = -kI * inv_sqrt2;
      f(k, j) = kI * inv_sqrt2;
      basis.push_back(f);
    }
  for (int l = 1; l < dim; ++l) {
    Matrix f(dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int m = 0; m < l; ++m) f(m, m) = norm;
    f(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(f);
  }
  return basis;
}

Lindbladian Lindbladian::zero(int dim) {
  Lindbladian l;
  l.dim = dim;
  l.hamiltonian = Matrix(dim);
  return l;
}

Lindbladian Lindbladian::from_jumps(Matrix hamiltonian, std::vector<Matrix> jumps,
                                    std::vector<double> rates) {
  if (jumps.size() != rates.size()) {
    throw Error(ErrorCode::ShapeMismatch, "Lindbladian: jumps/rates size mismatch");
  }
  Lindbladian l;
  l.dim = hamiltonian.dim();
  for (const auto& j : jumps) {
    if (j.dim() != l.dim) throw Error(ErrorCode::ShapeMismatch, "Lindbladian: jump dim mismatch");
  }
  l.hamiltonian = traceless_part(hamiltonian.hermitized());
  l.jumps = std::move(jumps);
  l.rates = std::move(rates);
  return l;
}

Lindbladian Lindbladian::from_kossakowski(Matrix hamiltonian, Matrix kossakowski) {
  Lindbladian l;
  l.dim = hamiltonian.dim();
  const int nb = l.dim * l.dim - 1;
  if (kossakowski.dim() != nb) {
    throw Error(ErrorCode::ShapeMismatch, "Lindbladian: Kossakowski matrix has wrong size");
  }
  l.hamiltonian = traceless_part(hamiltonian.hermitized());
  l.kossakowski = kossakowski.hermitized();
  return l;
}

Superoperator Superoperator::identity(int dim) { return {dim, Matrix::identity(dim * dim)}; }
Superoperator Superoperator::zero(int dim) { return {dim, Matrix(dim * dim)}; }

Matrix Superoperator::apply(const Matrix& x) const {
  if (x.dim() != dim) throw Error(ErrorCode::ShapeMismatch, "Superoperator::apply: dim mismatch");
  return unvec(m.apply(vec(x)), dim);
}

Superoperator& Superoperator::operator+=(const Superoperator& o) {
  m += o.m;
  return *this;
}
Superoperator& Superoperator::operator-=(const Superoperator& o) {
  m -= o.m;
  return *this;
}
Superoperator& Superoperator::operator*=(double s) {
  m *= cd(s);
  return *this;
}

Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
Superoperator operator-(Superoperator a, const Superoperator& b) { return a -= b; }
Superoperator operator*(double s, Superoperator a) { return a *= s; }
Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  return {a.dim, a.m * b.m};
}

Matrix dissipator_apply(const Matrix& a, const Matrix& rho) {
  if (a.dim() != rho.dim()) throw Error(ErrorCode::ShapeMismatch, "dissipator_apply: dim mismatch");
  const Matrix adag = a.adjoint();
  return a * rho * adag - 0.5 * anticommutator(adag * a, rho);
}

Matrix lindbladian_apply(const Lindbladian& lind, const Matrix& x) {
  if (x.dim() != lind.dim) throw Error(ErrorCode::ShapeMismatch, "lindbladian_apply: dim mismatch");
  Matrix out = -kI * commutator(lind.hamiltonian, x);
  if (lind.has_kossakowski()) {
    const auto basis = gellmann_basis(lind.dim);
    const Matrix& c = *lind.kossakowski;
    const int nb = static_cast<int>(basis.size());
    for (int k = 0; k < nb; ++k)
      for (int l = 0; l < nb; ++l) {
        const cd ckl = c(k, l);
        if (ckl == cd(0.0)) continue;
        out += ckl * (basis[k] * x * basis[l] - 0.5 * anticommutator(basis[l] * basis[k], x));
      }
  } else {
    for (size_t i = 0; i < lind.jumps.size(); ++i) {
      if (lind.rates[i] == 0.0) continue;
      out += lind.rates[i] * dissipator_apply(lind.jumps[i], x);
    }
  }
  return out;
}

Superoperator to_superoperator(const Lindbladian& lind) {
  const int d = lind.dim;
  const Matrix id = Matrix::identity(d);
  // vec(AXB) = (B^T (x) A) vec(X), column-stacking
  Matrix s = -kI * (kron(id, lind.hamiltonian) - kron(lind.hamiltonian.transpose(), id));

  auto add_dissipator = [&](const Matrix& a, cd weight) {
    const Matrix adag = a.adjoint();
    const Matrix ada = adag * a;
    s += weight * (kron(a.conjugate(), a) - 0.5 * kron(id, ada) - 0.5 * kron(ada.transpose(), id));
  };
  auto add_cross = [&](const Matrix& fk, const Matrix& fl, cd weight) {
    // weight * (F_k X F_l - 1/2 {F_l F_k, X})
    const Matrix flfk = fl * fk;
    s += weight *
         (kron(fl.transpose(), fk) - 0.5 * kron(id, flfk) - 0.5 * kron(flfk.transpose(), id));
  };

  if (lind.has_kossakowski()) {
    const auto basis = gellmann_basis(d);
    const Matrix& c = *lind.kossakowski;
    const int nb = static_cast<int>(basis.size());
    for (int k = 0; k < nb; ++k)
      for (int l = 0; l < nb; ++l) {
        if (c(k, l) == cd(0.0)) continue;
        add_cross(basis[k], basis[l], c(k, l));
      }
  } else {
    for (size_t i = 0; i < lind.jumps.size(); ++i) {
      if (lind.rates[i] == 0.0) continue;
      add_dissipator(lind.jumps[i], cd(lind.rates[i]));
    }
  }
  return {d, std::move(s)};
}

ChoiMatrix choi_of(const Superoperator& s) {
  const int d = s.dim;
  Matrix c(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Matrix phi = s.apply(Matrix::unit(d, i, j));
      for (int r = 0; r < d; ++r)
        for (int col = 0; col < d; ++col) c(i * d + r, j * d + col) = phi(r, col);
    }
  return {d, std::move(c)};
}

Superoperator replacer_superoperator(const DensityMatrix& sigma) {
  const int d = sigma.dim();
  const auto vs = vec(sigma.mat());
  const auto vi = vec(Matrix::identity(d));
  Matrix m(d * d);
  for (int r = 0; r < d * d; ++r)
    for (int c = 0; c < d * d; ++c) m(r, c) = vs[r] * std::conj(vi[c]);
  return {d, std::move(m)};
}

Lindbladian replacer_lindbladian(const Matrix& sigma, double rate) {
  // rate * (R_sigma - id) has jumps |m><j| over sigma's eigenvectors m and
  // any orthonormal j, with rates rate * lambda_m. Negative lambda_m simply
  // produce negative rates; validity is decided by gksl_validity_check.
  const int d = sigma.dim();
  const auto eig = hermitian_eig(sigma.hermitized());
  std::vector<Matrix> jumps;
  std::vector<double> rates;
  jumps.reserve(static_cast<size_t>(d) * d);
  for (int m = 0; m < d; ++m) {
    for (int j = 0; j < d; ++j) {
      Matrix a(d);
      for (int r = 0; r < d; ++r) a(r, j) = eig.eigenvectors(r, m);
      jumps.push_back(std::move(a));
      rates.push_back(rate * eig.eigenvalues[m]);
    }
  }
  return Lindbladian::from_jumps(Matrix(d), std::move(jumps), std::move(rates));
}

GkslValidityReport gksl_validity_check(const Superoperator& s, double tolerance) {
  GkslValidityReport rep;
  const int d = s.dim;
  const ChoiMatrix choi = choi_of(s);

  const double choi_norm = choi.m.frobenius_norm();
  rep.hermiticity_preserving =
      choi.m.hermiticity_defect() <= 1e-10 * (1.0 + choi_norm);

  // trace annihilation: tr Phi(e_ij) = 0 for all i, j
  double max_tr = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cd t = 0.0;
      for (int r = 0; r < d; ++r) t += choi.m(i * d + r, j * d + r);
      max_tr = std::max(max_tr, std::abs(t));
    }
  rep.trace_annihilating = max_tr <= 1e-10 * (1.0 + choi_norm);

  // conditional complete positivity: Q Choi Q >= -tol with Q = I - |Omega><Omega|
  Matrix omega(d * d);  // |Omega><Omega| with |Omega> = sum_i |ii>/sqrt(d)
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) omega(i * d + i, j * d + j) = 1.0 / d;
  const Matrix q = Matrix::identity(d * d) - omega;
  const Matrix qcq = (q * choi.m.hermitized() * q).hermitized();
  rep.min_cond_eig = min_eigenvalue(qcq);
  // fully relative tolerance: a scaled-down invalid generator stays invalid
  const double scale = spectral_norm_hermitian(choi.m.hermitized());
  rep.conditionally_cp = rep.min_cond_eig >= -tolerance * std::max(scale, 1e-300);

  rep.valid = rep.hermiticity_preserving && rep.trace_annihilating && rep.conditionally_cp;
  return rep;
}

Lindbladian jumps_to_kossakowski(const Lindbladian& lind) {
  if (lind.has_kossakowski()) return lind;
  const int d = lind.dim;
  const auto basis = gellmann_basis(d);
  const int nb = static_cast<int>(basis.size());
  Matrix c(nb);
  Matrix ham_correction(d);
  for (size_t i = 0; i < lind.jumps.size(); ++i) {
    const double gamma = lind.rates[i];
    if (gamma == 0.0) continue;
    const Matrix& a = lind.jumps[i];
    const cd z = a.trace() / static_cast<double>(d);
    Matrix b = a;
    for (int r = 0; r < d; ++r) b(r, r) -= z;
    // identity component of the jump folds into the Hamiltonian:
    // L_{zI+b} = L_b - i[(i/2)(conj(z) b - z b^dagger), .]
    if (std::abs(z) > 0.0) {
      ham_correction += gamma * ((0.5 * kI) * (std::conj(z) * b - z * b.adjoint()));
    }
    std::vector<cd> coeff(nb);
    for (int k = 0; k < nb; ++k) {
      // c_k = tr(F_k^dagger b), F Hermitian
      cd acc = 0.0;
      for (int r = 0; r < d; ++r)
        for (int col = 0; col < d; ++col) acc += std::conj(basis[k](r, col)) * b(r, col);
      coeff[k] = acc;
    }
    for (int k = 0; k < nb; ++k)
      for (int l = 0; l < nb; ++l) c(k, l) += gamma * coeff[k] * std::conj(coeff[l]);
  }
  return Lindbladian::from_kossakowski(lind.hamiltonian + ham_correction.hermitized(),
                                       std::move(c));
}

Lindbladian kossakowski_to_jumps(const Lindbladian& lind) {
  if (!lind.has_kossakowski()) return lind;
  const int d = lind.dim;
  const Matrix& c = *lind.kossakowski;
  const double cnorm = c.frobenius_norm();
  const auto eig = hermitian_eig(c);
  const auto basis = gellmann_basis(d);
  std::vector<Matrix> jumps;
  std::vector<double> rates;
  for (size_t m = 0; m < eig.eigenvalues.size(); ++m) {
    const double lambda = eig.eigenvalues[m];
    if (lambda < -1e-8 * std::max(cnorm, 1.0)) {
      throw Error(ErrorCode::NegativeKossakowski,
                  "kossakowski_to_jumps: eigenvalue " + std::to_string(lambda) +
                      " below tolerance; not a GKSL generator");
    }
    // eigenvalues in [-1e-8 ||C||, 0) are numerical noise; clip to zero
    const double rate = std::max(lambda, 0.0);
    if (rate == 0.0) continue;
    Matrix a(d);
    for (size_t k = 0; k < basis.size(); ++k) {
      const cd w = eig.eigenvectors(static_cast<int>(k), static_cast<int>(m));
      if (w == cd(0.0)) continue;
      a += w * basis[k];
    }
    if (a.frobenius_norm() == 0.0) continue;
    jumps.push_back(std::move(a));
    rates.push_back(rate);
  }
  return Lindbladian::from_jumps(lind.hamiltonian, std::move(jumps), std::move(rates));
}

}  // namespace lindlift
