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

#include "lindlift/lift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lindlift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LiftPointDiagnostics make_diagnostics(double t, const Superoperator& s, const Matrix& rho,
                                      const Matrix& v) {
  LiftPointDiagnostics d;
  d.t = t;
  d.residual = distance(s.apply(rho), v);
  d.gksl_valid = gksl_validity_check(s).valid;
  d.gen_norm = s.m.frobenius_norm();
  return d;
}

}  // namespace

Superoperator LiftFamily::interpolated(double t) const {
  if (times.empty()) throw Error(ErrorCode::GridMismatch, "LiftFamily: empty family");
  if (t <= times.front()) return superops.front();
  if (t >= times.back()) return superops.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const size_t k = static_cast<size_t>(it - times.begin()) - 1;
  const double w = (t - times[k]) / (times[k + 1] - times[k]);
  Superoperator out = superops[k];
  out.m *= cd(1.0 - w);
  Matrix rhs = superops[k + 1].m;
  rhs *= cd(w);
  out.m += rhs;
  return out;
}

double LiftFamily::max_residual() const {
  double r = 0.0;
  for (const auto& d : diagnostics) r = std::max(r, d.residual);
  return r;
}

double max_feasible_epsilon(const DensityMatrix& rho, const TangentDirection& v) {
  if (v.mat().frobenius_norm() == 0.0) return kInf;
  const Matrix& r = rho.mat();
  const Matrix& dv = v.mat();
  auto min_eig_at = [&](double eps) { return min_eigenvalue((r + eps * dv).hermitized()); };

  double lo = 0.0;
  double hi = 1.0;
  while (min_eig_at(hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) return kInf;
  }
  while (hi - lo > 1e-12 * std::max(hi, 1.0)) {
    const double mid = 0.5 * (lo + hi);
    if (min_eig_at(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

LiftFamily replacer_lift(const Trajectory& traj, const std::vector<double>& grid,
                         const EpsilonPolicy& policy, double fd_step) {
  if (policy.kind == EpsilonPolicy::Kind::Constant && !(policy.value > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "replacer_lift: constant epsilon must be positive");
  }
  LiftFamily family;
  family.dim = traj.dim();
  family.times = grid;
  family.superops.reserve(grid.size());
  family.lindblads.reserve(grid.size());
  family.diagnostics.reserve(grid.size());

  for (double t : grid) {
    const auto [rho, v] = sample_with_derivative(traj, t, fd_step);
    double eps = 0.0;
    bool zero_velocity = false;
    switch (policy.kind) {
      case EpsilonPolicy::Kind::Adaptive: {
        if (v.mat().frobenius_norm() <= 1e-14 * (1.0 + rho.mat().frobenius_norm())) {
          zero_velocity = true;  // nothing to generate
          break;
        }
        const double eps_max = max_feasible_epsilon(rho, v);
        if (!(eps_max > 0.0)) {
          throw Error(ErrorCode::NotInTangentCone,
                      "replacer_lift: eps_max = 0 at t = " + std::to_string(t));
        }
        eps = std::isinf(eps_max) ? 1.0 : std::min(1.0, 0.5 * eps_max);
        break;
      }
      case EpsilonPolicy::Kind::FixedFormula: {
        const double om = 1.0 - t;
        eps = std::exp(1.0 - 1.0 / (om * om));  // underflows to 0 near t = 1
        break;
      }
      case EpsilonPolicy::Kind::Constant: eps = policy.value; break;
    }

    if (zero_velocity) {
      Superoperator s = Superoperator::zero(family.dim);
      LiftPointDiagnostics d = make_diagnostics(t, s, rho.mat(), v.mat());
      family.superops.push_back(std::move(s));
      family.lindblads.emplace_back(Lindbladian::zero(family.dim));
      family.diagnostics.push_back(d);
      continue;
    }

    if (eps < 1e-300) {
      // Degenerate fixed-formula point: the formula gives eps = 0 and the
      // 1/eps generator is not representable. Record a zero generator with
      // its honest residual ||v||.
      Lindbladian zero = Lindbladian::zero(family.dim);
      Superoperator s = Superoperator::zero(family.dim);
      LiftPointDiagnostics d = make_diagnostics(t, s, rho.mat(), v.mat());
      d.epsilon = 0.0;
      d.sigma_min_eig = min_eigenvalue(rho.mat());
      family.superops.push_back(std::move(s));
      family.lindblads.emplace_back(std::move(zero));
      family.diagnostics.push_back(d);
      continue;
    }

    const Matrix sigma = (rho.mat() + eps * v.mat()).hermitized();
    Lindbladian lind = replacer_lindbladian(sigma, 1.0 / eps);
    Superoperator s = to_superoperator(lind);
    LiftPointDiagnostics d = make_diagnostics(t, s, rho.mat(), v.mat());
    d.epsilon = eps;
    d.sigma_min_eig = min_eigenvalue(sigma);
    family.superops.push_back(std::move(s));
    family.lindblads.emplace_back(std::move(lind));
    family.diagnostics.push_back(d);
  }
  return family;
}

namespace {

// Nonnegative least-squares polish of jump rates: minimizes
// || sum_j s_j * actions[j] + fixed - target ||_F over s >= 0, s scaled
// multiplicatively onto the constructed rates (init s = 1).
std::vector<double> polish_rates(const std::vector<Matrix>& actions, const Matrix& fixed,
                                 const Matrix& target) {
  const size_t n = actions.size();
  std::vector<double> s(n, 1.0);
  if (n == 0) return s;

  auto objective = [&](const std::vector<double>& x) {
    Matrix r = fixed - target;
    for (size_t j = 0; j < n; ++j) r += x[j] * actions[j];
    return inner_real(r, r);
  };

  double step = 1.0;
  double f = objective(s);
  for (int iter = 0; iter < 400; ++iter) {
    Matrix r = fixed - target;
    for (size_t j = 0; j < n; ++j) r += s[j] * actions[j];
    std::vector<double> grad(n);
    for (size_t j = 0; j < n; ++j) grad[j] = 2.0 * inner_real(actions[j], r);

    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> cand(n);
      for (size_t j = 0; j < n; ++j) cand[j] = std::max(0.0, s[j] - step * grad[j]);
      const double fc = objective(cand);
      if (fc <= f) {
        if (f - fc < 1e-16 * (1.0 + f)) {
          return cand;
        }
        s = std::move(cand);
        f = fc;
        step *= 1.2;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return s;
}

}  // namespace

LiftFamily spectral_lift(const Trajectory& traj, const std::vector<double>& grid, double rank_tol,
                         double fd_step) {
  LiftFamily family;
  family.dim = traj.dim();
  family.times = grid;
  const int d = family.dim;

  for (double t : grid) {
    const auto [rho_t, v_t] = sample_with_derivative(traj, t, fd_step);
    const Matrix& rho = rho_t.mat();
    const Matrix& v = v_t.mat();
    const auto eig = hermitian_eig(rho);
    int rank = 0;
    for (double l : eig.eigenvalues) rank += (l > rank_tol) ? 1 : 0;
    const Matrix& u = eig.eigenvectors;
    const Matrix x = u.adjoint() * v * u;  // velocity in the eigenframe

    std::vector<Matrix> jumps_frame;
    std::vector<double> rates;
    Matrix ham_frame(d);
    double used_eps = 1.0;
    double sigma_min = 0.0;

    if (rank == 0) {
      throw Error(ErrorCode::NotInTangentCone, "spectral_lift: zero state at t=" + std::to_string(t));
    }

    // kernel compression must stay in the PSD cone
    const int kdim = d - rank;
    if (kdim > 0) {
      Matrix x22(kdim);
      for (int i = 0; i < kdim; ++i)
        for (int j = 0; j < kdim; ++j) x22(i, j) = x(rank + i, rank + j);
      const auto keig = hermitian_eig(x22);
      if (keig.eigenvalues.back() < -rank_tol) {
        throw Error(ErrorCode::NotInTangentCone,
                    "spectral_lift: kernel compression eigenvalue " +
                        std::to_string(keig.eigenvalues.back()) + " at t = " + std::to_string(t));
      }

      // kernel block: one jump per positive kernel eigendirection, fed from
      // the top eigenvector of rho
      const double lam0 = eig.eigenvalues[0];
      double kernel_trace = 0.0;
      for (int m = 0; m < kdim; ++m) {
        const double w = std::max(keig.eigenvalues[m], 0.0);
        if (w <= 0.0) continue;
        kernel_trace += w;
        Matrix a(d);
        for (int r = 0; r < kdim; ++r) a(rank + r, 0) = keig.eigenvectors(r, m);
        jumps_frame.push_back(std::move(a));
        rates.push_back(w / lam0);
      }

      // support-kernel block via Hamiltonian coupling: h = -i rho11^{-1} x12
      double x12_norm = 0.0;
      for (int i = 0; i < rank; ++i)
        for (int j = 0; j < kdim; ++j) x12_norm += std::norm(x(i, rank + j));
      if (x12_norm > 0.0) {
        for (int i = 0; i < rank; ++i)
          for (int j = 0; j < kdim; ++j) {
            const cd h = cd(0.0, -1.0) / eig.eigenvalues[i] * x(i, rank + j);
            ham_frame(i, rank + j) = h;
            ham_frame(rank + j, i) = std::conj(h);
          }
      }

      // support block handled by a replacer on the support; it must also
      // absorb the population the kernel jumps removed from the top state
      Matrix y(rank);
      for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) y(i, j) = x(i, j);
      y(0, 0) += kernel_trace;
      if (y.frobenius_norm() > 1e-14) {
        Matrix rho_sup(rank);
        for (int i = 0; i < rank; ++i) rho_sup(i, i) = eig.eigenvalues[i];
        const double scale = rho_sup.trace().real();
        Matrix rho_sup_normalized = (1.0 / scale) * rho_sup;
        const double eps_max =
            max_feasible_epsilon(DensityMatrix(rho_sup_normalized, 1e-6),
                                 TangentDirection::project((1.0 / scale) * y));
        // eps for the unnormalized pair (shared rescaling cancels)
        double eps = std::isinf(eps_max) ? 1.0 : std::min(1.0, 0.5 * eps_max);
        used_eps = eps;
        Matrix sigma_sup = rho_sup + eps * y;
        sigma_min = min_eigenvalue(sigma_sup.hermitized());
        const auto seig = hermitian_eig(sigma_sup.hermitized());
        for (int m = 0; m < rank; ++m) {
          for (int j = 0; j < rank; ++j) {
            Matrix a(d);
            for (int r = 0; r < rank; ++r) a(r, j) = seig.eigenvectors(r, m);
            jumps_frame.push_back(std::move(a));
            rates.push_back(seig.eigenvalues[m] / eps);
          }
        }
      }
    } else {
      // full rank: plain adaptive replacer
      const double eps_max = max_feasible_epsilon(rho_t, v_t);
      const double eps = std::isinf(eps_max) ? 1.0 : std::min(1.0, 0.5 * eps_max);
      used_eps = eps;
      const Matrix sigma = (rho + eps * v).hermitized();
      sigma_min = min_eigenvalue(sigma);
      const auto seig = hermitian_eig(sigma);
      const Matrix xsigma = u.adjoint() * sigma * u;
      const auto sfeig = hermitian_eig(xsigma.hermitized());
      for (int m = 0; m < d; ++m)
        for (int j = 0; j < d; ++j) {
          Matrix a(d);
          for (int r = 0; r < d; ++r) a(r, j) = sfeig.eigenvectors(r, m);
          jumps_frame.push_back(std::move(a));
          rates.push_back(sfeig.eigenvalues[m] / eps);
        }
    }

    // rotate out of the eigenframe
    std::vector<Matrix> jumps;
    jumps.reserve(jumps_frame.size());
    for (const auto& a : jumps_frame) jumps.push_back(u * a * u.adjoint());
    const Matrix hamiltonian = (u * ham_frame * u.adjoint()).hermitized();

    // nonnegative rate polish against the sampled velocity
    std::vector<Matrix> actions;
    actions.reserve(jumps.size());
    for (size_t j = 0; j < jumps.size(); ++j) {
      actions.push_back(rates[j] * dissipator_apply(jumps[j], rho));
    }
    const Matrix ham_action = cd(0.0, -1.0) * commutator(hamiltonian, rho);
    const auto scale = polish_rates(actions, ham_action, v);
    for (size_t j = 0; j < rates.size(); ++j) rates[j] = std::max(0.0, rates[j] * scale[j]);

    Lindbladian lind = Lindbladian::from_jumps(hamiltonian, std::move(jumps), std::move(rates));
    Superoperator s = to_superoperator(lind);
    LiftPointDiagnostics diag = make_diagnostics(t, s, rho, v);
    diag.epsilon = used_eps;
    diag.sigma_min_eig = sigma_min;
    if (diag.residual > 1e-8) {
      throw Error(ErrorCode::ResidualTooLarge,
                  "spectral_lift: residual " + std::to_string(diag.residual) + " at t = " +
                      std::to_string(t) + "; fall back to feasibility_lift");
    }
    family.superops.push_back(std::move(s));
    family.lindblads.emplace_back(std::move(lind));
    family.diagnostics.push_back(diag);
  }
  return family;
}

LiftFamily rankshift_interpolation(const LiftFamily& family, const Trajectory& traj,
                                   const std::vector<double>& rankshift_times, double window,
                                   double rank_tol) {
  if (rankshift_times.empty()) return family;
  for (size_t i = 0; i + 1 < rankshift_times.size(); ++i) {
    if (rankshift_times[i + 1] - rankshift_times[i] < 2.0 * window) {
      throw Error(ErrorCode::WindowTooWide, "rankshift_interpolation: windows overlap");
    }
  }

  LiftFamily out = family;
  const int d = family.dim;
  const Superoperator id = Superoperator::identity(d);

  for (double tau : rankshift_times) {
    const double w_lo = tau - window, w_hi = tau + window;
    // frozen generators at the window edges
    size_t lo_idx = 0, hi_idx = family.size() - 1;
    for (size_t k = 0; k < family.size(); ++k) {
      if (family.times[k] <= w_lo) lo_idx = k;
    }
    for (size_t k = family.size(); k-- > 0;) {
      if (family.times[k] >= w_hi) hi_idx = k;
    }
    const Matrix& frozen_lo = family.superops[lo_idx].m;
    const Matrix& frozen_hi = family.superops[hi_idx].m;

    for (size_t k = 0; k < family.size(); ++k) {
      const double t = family.times[k];
      if (t < w_lo || t > w_hi) continue;
      const Matrix rho = traj.state(t).hermitized();
      const Matrix p = support_projection(rho, rank_tol);
      if ((Matrix::identity(d) - p).frobenius_norm() < 1e-12) continue;  // full rank

      const Matrix e = kron(p.transpose(), p);  // vec(PXP) = (P^T (x) P) vec X
      const double alpha = std::clamp((t - w_lo) / (2.0 * window), 0.0, 1.0);
      const Matrix frozen = (1.0 - alpha) * frozen_lo + alpha * frozen_hi;
      Matrix blended = family.superops[k].m * e + frozen * (id.m - e);

      const auto [rho_k, v_k] = sample_with_derivative(traj, t);
      Superoperator s{d, std::move(blended)};
      LiftPointDiagnostics diag = make_diagnostics(t, s, rho_k.mat(), v_k.mat());
      out.superops[k] = std::move(s);
      out.lindblads[k] = std::nullopt;
      out.diagnostics[k] = diag;
    }
  }
  return out;
}

GeometricLift geometric_lift_affine(const DensityMatrix& sigma_a, const DensityMatrix& sigma_b,
                                    std::vector<double> grid) {
  const Matrix& sa = sigma_a.mat();
  const Matrix& sb = sigma_b.mat();
  if (distance(sa, sb) <= 1e-14 * (1.0 + sa.frobenius_norm())) {
    throw Error(ErrorCode::IdenticalEndpoints, "geometric_lift_affine: identical endpoints");
  }
  if (grid.empty()) {
    // [1/8, 7/8] step 1/128; the coefficient diverges like 1/t toward t = 0
    grid = linspace(0.125, 0.875, 97);
  }
  const int d = sa.dim();

  GeometricLift out;
  out.grid = grid;

  auto f_of = [](double t) {
    const double om = t - 1.0;
    return std::exp(1.0 - 1.0 / (om * om));
  };
  auto fprime_of = [&](double t) {
    const double om = t - 1.0;
    return f_of(t) * 2.0 / (om * om * om);
  };

  const Superoperator id = Superoperator::identity(d);
  const Superoperator rb = replacer_superoperator(sigma_b);

  std::vector<Matrix> eta_states;
  LiftFamily fam;
  fam.dim = d;
  fam.times = grid;
  for (double t : grid) {
    const double f = f_of(t);
    const double fp = fprime_of(t);
    const double g = fp / (f - 1.0);
    out.f_values.push_back(f);
    out.coefficients.push_back(g);

    const Matrix eta = ((1.0 - f) * sa + f * sb).hermitized();
    const Matrix eta_dot = fp * (sb - sa);
    eta_states.push_back(eta);

    Superoperator s = id;
    s.m *= cd(g);
    Matrix rterm = rb.m;
    rterm *= cd(-g);
    s.m += rterm;

    LiftPointDiagnostics diag;
    diag.t = t;
    diag.residual = distance(s.apply(eta), eta_dot);
    diag.gksl_valid = gksl_validity_check(s).valid;
    diag.gen_norm = s.m.frobenius_norm();
    fam.superops.push_back(std::move(s));
    fam.lindblads.emplace_back(std::nullopt);
    fam.diagnostics.push_back(diag);
  }
  double sup = 0.0;
  for (double g : out.coefficients) sup = std::max(sup, std::abs(g));
  out.coefficient_sup = sup;
  out.coefficient_last = std::abs(out.coefficients.back());
  out.reparameterized_path = Trajectory::grid(d, grid, eta_states, std::nullopt, false);
  out.literal_family = std::move(fam);

  // validated alternative: adaptive replacer on the open interior of the
  // original affine segment
  try {
    const Trajectory segment = Trajectory::piecewise_affine({0.0, 1.0}, {sa, sb});
    const auto inner = linspace(1.0 / 128.0, 127.0 / 128.0, 127);
    out.replacer_alternative = replacer_lift(segment, inner, EpsilonPolicy::adaptive());
  } catch (const Error&) {
    out.replacer_alternative = std::nullopt;
  }
  return out;
}

// ---------------------------------------------------------------------------
// feasibility solver
// ---------------------------------------------------------------------------

namespace {

// Precomputed linear map (h, C) -> L(X_i) for one constraint.
struct ConstraintData {
  Matrix x;
  Matrix y;
  std::vector<Matrix> ham_actions;    // -i[F_k, X]
  std::vector<Matrix> koss_actions;   // F_k X F_l - 1/2 {F_l F_k, X}, index k*nb+l
};

// Projection onto {C >= 0} or {C >= 0, tr C <= cap} by spectral clipping
// (waterfilling when the trace cap binds).
Matrix project_psd(const Matrix& c, double trace_cap) {
  const auto eig = hermitian_eig(c.hermitized());
  const int n = c.dim();
  std::vector<double> lam(n);
  for (int i = 0; i < n; ++i) lam[i] = std::max(eig.eigenvalues[i], 0.0);
  if (trace_cap >= 0.0) {
    double total = 0.0;
    for (double l : lam) total += l;
    if (total > trace_cap) {
      // find mu with sum max(lam - mu, 0) = cap (lam sorted descending)
      double mu_lo = 0.0, mu_hi = lam[0];
      for (int it = 0; it < 200; ++it) {
        const double mu = 0.5 * (mu_lo + mu_hi);
        double s = 0.0;
        for (double l : lam) s += std::max(l - mu, 0.0);
        if (s > trace_cap) {
          mu_lo = mu;
        } else {
          mu_hi = mu;
        }
      }
      for (double& l : lam) l = std::max(l - mu_hi, 0.0);
    }
  }
  Matrix out(n);
  for (int k = 0; k < n; ++k) {
    if (lam[k] == 0.0) continue;
    for (int r = 0; r < n; ++r)
      for (int col = 0; col < n; ++col)
        out(r, col) += lam[k] * eig.eigenvectors(r, k) * std::conj(eig.eigenvectors(col, k));
  }
  return out.hermitized();
}

}  // namespace

FeasibilityOutcome feasibility_lift(const FeasibilityProblem& problem) {
  if (problem.constraints.empty()) {
    throw Error(ErrorCode::InvalidInput, "feasibility_lift: need at least one constraint");
  }
  const int d = problem.dim;
  const auto basis = gellmann_basis(d);
  const int nb = static_cast<int>(basis.size());
  const cd mi(0.0, -1.0);

  std::vector<ConstraintData> data;
  data.reserve(problem.constraints.size());
  for (const auto& [x, y] : problem.constraints) {
    if (x.dim() != d || y.dim() != d) {
      throw Error(ErrorCode::ShapeMismatch, "feasibility_lift: constraint dimension mismatch");
    }
    if (x.hermiticity_defect() > 1e-10 * (1.0 + x.frobenius_norm()) ||
        y.hermiticity_defect() > 1e-10 * (1.0 + y.frobenius_norm())) {
      throw Error(ErrorCode::InvalidInput, "feasibility_lift: constraints must be Hermitian");
    }
    if (std::abs(y.trace()) > 1e-8 * (1.0 + y.frobenius_norm())) {
      throw Error(ErrorCode::InvalidInput,
                  "feasibility_lift: target is not traceless, no generator can reach it");
    }
    ConstraintData cdta;
    cdta.x = x.hermitized();
    cdta.y = y.hermitized();
    cdta.ham_actions.reserve(nb);
    for (int k = 0; k < nb; ++k) cdta.ham_actions.push_back(mi * commutator(basis[k], cdta.x));
    cdta.koss_actions.reserve(static_cast<size_t>(nb) * nb);
    for (int k = 0; k < nb; ++k)
      for (int l = 0; l < nb; ++l) {
        cdta.koss_actions.push_back(basis[k] * cdta.x * basis[l] -
                                    0.5 * anticommutator(basis[l] * basis[k], cdta.x));
      }
    data.push_back(std::move(cdta));
  }

  const double rate_lambda =
      (problem.objective == FeasibilityObjective::MinimizeTotalRate) ? 1e-6 : 0.0;

  // The Hamiltonian block is eliminated exactly: for fixed C the optimal h
  // solves a small linear least squares. Precompute the h-Gram pseudo-inverse.
  Matrix h_pinv(nb);
  {
    Matrix h_gram(nb);
    for (int k = 0; k < nb; ++k)
      for (int l = 0; l < nb; ++l) {
        double s = 0.0;
        for (const auto& cdta : data) s += inner_real(cdta.ham_actions[k], cdta.ham_actions[l]);
        h_gram(k, l) = s;
      }
    const auto eig = hermitian_eig(h_gram.hermitized());
    const double cutoff = 1e-12 * std::max(eig.eigenvalues.front(), 1e-300);
    for (int m = 0; m < nb; ++m) {
      if (eig.eigenvalues[m] <= cutoff) continue;
      const double inv = 1.0 / eig.eigenvalues[m];
      for (int r = 0; r < nb; ++r)
        for (int c = 0; c < nb; ++c)
          h_pinv(r, c) += inv * eig.eigenvectors(r, m) * std::conj(eig.eigenvectors(c, m));
    }
  }

  struct Eval {
    std::vector<double> h;
    std::vector<Matrix> residuals;  // L(X_i) - Y_i at the optimal h
    double f = 0.0;
    double residual_sq = 0.0;
  };

  auto koss_apply = [&](const ConstraintData& cdta, const Matrix& c) {
    Matrix out(d);
    for (int k = 0; k < nb; ++k)
      for (int l = 0; l < nb; ++l) {
        const cd w = c(k, l);
        if (w == cd(0.0)) continue;
        out += w * cdta.koss_actions[static_cast<size_t>(k) * nb + l];
      }
    return out;
  };

  auto evaluate = [&](const Matrix& c) {
    Eval e;
    std::vector<Matrix> partial;
    partial.reserve(data.size());
    for (const auto& cdta : data) partial.push_back(koss_apply(cdta, c) - cdta.y);
    // optimal Hamiltonian coefficients
    std::vector<double> rhs(nb, 0.0);
    for (size_t i = 0; i < data.size(); ++i)
      for (int k = 0; k < nb; ++k) rhs[k] -= inner_real(data[i].ham_actions[k], partial[i]);
    e.h.assign(nb, 0.0);
    for (int k = 0; k < nb; ++k)
      for (int l = 0; l < nb; ++l) e.h[k] += h_pinv(k, l).real() * rhs[l];
    e.residuals = std::move(partial);
    for (size_t i = 0; i < data.size(); ++i) {
      for (int k = 0; k < nb; ++k) {
        if (e.h[k] != 0.0) e.residuals[i] += e.h[k] * data[i].ham_actions[k];
      }
      e.residual_sq += inner_real(e.residuals[i], e.residuals[i]);
    }
    e.f = e.residual_sq + rate_lambda * c.trace().real();
    return e;
  };

  // gradient in C at the eliminated-h point (the h-block gradient vanishes
  // there, so this is the full reduced gradient)
  auto gradient_c = [&](const Eval& e) {
    Matrix t_mat(nb);
    for (size_t i = 0; i < data.size(); ++i) {
      const Matrix& r = e.residuals[i];
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l) {
          cd acc = 0.0;
          const Matrix& g = data[i].koss_actions[static_cast<size_t>(k) * nb + l];
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) acc += r(a, b) * g(b, a);  // tr(R G)
          t_mat(k, l) += acc;
        }
    }
    Matrix gc(nb);
    for (int k = 0; k < nb; ++k)
      for (int l = 0; l < nb; ++l) gc(k, l) = std::conj(t_mat(k, l)) + t_mat(l, k);
    for (int k = 0; k < nb; ++k) gc(k, k) += rate_lambda;
    return gc;
  };

  // Lipschitz bound for the C-sector gradient by power iteration on its Gram
  double lipschitz = 0.0;
  {
    Matrix probe = Matrix::identity(nb);
    probe *= cd(1.0 / std::sqrt(static_cast<double>(nb)));
    for (int it = 0; it < 40; ++it) {
      Matrix t_mat(nb);
      for (const auto& cdta : data) {
        const Matrix r = koss_apply(cdta, probe);
        for (int k = 0; k < nb; ++k)
          for (int l = 0; l < nb; ++l) {
            cd acc = 0.0;
            const Matrix& g = cdta.koss_actions[static_cast<size_t>(k) * nb + l];
            for (int a = 0; a < d; ++a)
              for (int b = 0; b < d; ++b) acc += r(a, b) * g(b, a);
            t_mat(k, l) += acc;
          }
      }
      Matrix gram(nb);
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l) gram(k, l) = std::conj(t_mat(k, l)) + t_mat(l, k);
      const double norm = gram.frobenius_norm();
      lipschitz = norm;
      if (norm < 1e-300) break;
      probe = gram;
      probe *= cd(1.0 / norm);
    }
    lipschitz = std::max(lipschitz, 1e-12);
  }
  const double step = problem.params.step / lipschitz;

  Matrix cur(nb);
  if (problem.warm_start) {
    const Lindbladian warm = jumps_to_kossakowski(*problem.warm_start);
    cur = project_psd(*warm.kossakowski, problem.trace_cap);
  }
  Matrix prev = cur;
  Eval eval_cur = evaluate(cur);
  Matrix best = cur;
  Eval eval_best = eval_cur;
  double theta = 1.0;
  int iterations = 0;
  int stall = 0;

  const double tol_sq = problem.params.tol * problem.params.tol;
  while (iterations < problem.params.max_iter && eval_best.residual_sq > tol_sq &&
         stall < 1500) {
    ++iterations;
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    const double beta = (theta - 1.0) / theta_next;
    Matrix y = cur;
    {
      Matrix diff = cur - prev;
      diff *= cd(beta);
      y += diff;
    }
    const Eval eval_y = evaluate(y);
    Matrix gc = gradient_c(eval_y);
    gc *= cd(-step);
    const Matrix cand = project_psd(y + gc, problem.trace_cap);
    const Eval eval_cand = evaluate(cand);

    // adaptive restart when the momentum opposes the gradient mapping
    theta = (inner_real(y - cand, cand - cur) > 0.0) ? 1.0 : theta_next;

    prev = std::move(cur);
    cur = cand;
    const bool improved = eval_cand.f < eval_best.f * (1.0 - 1e-14) ||
                          eval_cand.residual_sq < eval_best.residual_sq;
    if (eval_cand.residual_sq < eval_best.residual_sq) {
      best = cur;
      eval_best = eval_cand;
    } else if (eval_cand.f < eval_best.f) {
      eval_best.f = eval_cand.f;
    }
    stall = improved ? 0 : stall + 1;
    eval_cur = eval_cand;
  }

  FeasibilityOutcome out;
  const Eval final_eval = evaluate(best);
  out.residual = std::sqrt(final_eval.residual_sq);
  out.iterations = iterations;
  out.feasible = out.residual <= problem.params.tol;
  Matrix hamiltonian(d);
  for (int k = 0; k < nb; ++k) hamiltonian += final_eval.h[k] * basis[k];
  out.generator = Lindbladian::from_kossakowski(hamiltonian.hermitized(), best);
  out.total_rate = best.trace().real();
  return out;
}

TangentConeResult tangent_cone_membership(const DensityMatrix& rho, const TangentDirection& v,
                                          double tolerance) {
  TangentConeResult res;
  const int d = rho.dim();
  const Matrix p = support_projection(rho.mat(), tolerance);
  const Matrix kproj = Matrix::identity(d) - p;
  const Matrix compression = (kproj * v.mat() * kproj).hermitized();
  res.necessary_check = min_eigenvalue(compression) >= -tolerance;
  if (!res.necessary_check) {
    res.member = false;
    return res;
  }

  const double eps_max = max_feasible_epsilon(rho, v);
  if (eps_max > 0.0) {
    const double eps = std::isinf(eps_max) ? 1.0 : std::min(1.0, 0.5 * eps_max);
    const Matrix sigma = (rho.mat() + eps * v.mat()).hermitized();
    Lindbladian witness = replacer_lindbladian(sigma, 1.0 / eps);
    const double residual = distance(lindbladian_apply(witness, rho.mat()), v.mat());
    res.residual = residual;
    if (residual <= tolerance) {
      res.member = true;
      res.witness = std::move(witness);
      return res;
    }
  }

  FeasibilityProblem problem;
  problem.dim = d;
  problem.constraints = {{rho.mat(), v.mat()}};
  problem.params.tol = tolerance;
  const auto outcome = feasibility_lift(problem);
  res.residual = outcome.residual;
  res.member = outcome.feasible;
  if (outcome.feasible) res.witness = outcome.generator;
  return res;
}

double min_dissipation_rate(const DensityMatrix& rho, const TangentDirection& v,
                            const std::vector<double>& rate_grid, double tolerance) {
  const auto membership = tangent_cone_membership(rho, v, tolerance);
  if (!membership.member) {
    throw Error(ErrorCode::NotInTangentCone, "min_dissipation_rate: direction not liftable");
  }

  auto solve_with_cap = [&](double cap) {
    FeasibilityProblem problem;
    problem.dim = rho.dim();
    problem.constraints = {{rho.mat(), v.mat()}};
    problem.params.tol = tolerance;
    problem.trace_cap = cap;
    return feasibility_lift(problem);
  };

  auto probe = solve_with_cap(0.0);
  if (probe.feasible) return 0.0;

  // bracket: scan the provided grid, else grow by doubling
  double lo = 0.0;
  double hi = -1.0;
  FeasibilityOutcome hi_outcome;
  for (double cap : rate_grid) {
    const auto out = solve_with_cap(cap);
    if (out.feasible) {
      hi = cap;
      hi_outcome = out;
      break;
    }
    lo = cap;
  }
  if (hi < 0.0) {
    double cap = std::max(lo, 1.0);
    for (int it = 0; it < 60; ++it) {
      const auto out = solve_with_cap(cap);
      if (out.feasible) {
        hi = cap;
        hi_outcome = out;
        break;
      }
      lo = cap;
      cap *= 2.0;
    }
    if (hi < 0.0) {
      throw Error(ErrorCode::NotInTangentCone,
                  "min_dissipation_rate: no feasible rate cap found");
    }
  }

  while (hi - lo > 0.02 * hi) {
    const double mid = 0.5 * (lo + hi);
    const auto out = solve_with_cap(mid);
    if (out.feasible) {
      hi = mid;
      hi_outcome = out;
    } else {
      lo = mid;
    }
  }
  return hi_outcome.total_rate;
}

}  // namespace lindlift
