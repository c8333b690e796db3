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

#include <cmath>
#include <iostream>
#include <numbers>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "lindlift/json_io.hpp"
#include "lindlift/scenarios.hpp"

namespace {

using namespace lindlift;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitVerifyFailed = 4;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotInTangentCone:
    case ErrorCode::Infeasible:
    case ErrorCode::ResidualTooLarge: return kExitInfeasible;
    default: return kExitInvalidInput;
  }
}

cd complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return cd(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return cd(j[0].get<double>(), j[1].get<double>());
  throw Error(ErrorCode::InvalidInput, "expected number or [re, im]");
}

EpsilonPolicy parse_epsilon_policy(const std::string& text) {
  if (text == "adaptive") return EpsilonPolicy::adaptive();
  if (text == "paper" || text == "formula") return EpsilonPolicy::fixed_formula();
  if (text.rfind("const:", 0) == 0) {
    return EpsilonPolicy::constant(std::stod(text.substr(6)));
  }
  throw Error(ErrorCode::InvalidInput, "epsilon policy must be adaptive|paper|const:<v>");
}

int run_lift(const std::string& input, const std::string& method, const std::string& policy_text,
             double rank_tol, const std::string& out, const std::string& report_csv,
             const std::string& plotdata) {
  const Trajectory traj = trajectory_from_json(load_json(input));
  const auto& grid = traj.knot_times();

  LiftFamily family;
  if (method == "replacer") {
    family = replacer_lift(traj, grid, parse_epsilon_policy(policy_text));
  } else if (method == "spectral") {
    family = spectral_lift(traj, grid, rank_tol);
  } else if (method == "feasibility") {
    family.dim = traj.dim();
    family.times = grid;
    for (double t : grid) {
      const auto [rho, v] = sample_with_derivative(traj, t);
      FeasibilityProblem problem;
      problem.dim = traj.dim();
      problem.constraints = {{rho.mat(), v.mat()}};
      const auto outcome = feasibility_lift(problem);
      if (!outcome.feasible) {
        throw Error(ErrorCode::Infeasible, "feasibility lift failed at t = " + std::to_string(t) +
                                               " with residual " +
                                               std::to_string(outcome.residual));
      }
      Superoperator s = to_superoperator(outcome.generator);
      LiftPointDiagnostics d;
      d.t = t;
      d.residual = outcome.residual;
      d.gksl_valid = gksl_validity_check(s).valid;
      d.gen_norm = s.m.frobenius_norm();
      family.superops.push_back(std::move(s));
      family.lindblads.emplace_back(outcome.generator);
      family.diagnostics.push_back(d);
    }
  } else if (method == "affine") {
    auto result = scenario_discrete_points(traj.knot_states(), grid);
    for (auto& [name, fam] : result.families) {
      if (name == "lift_concatenated") family = std::move(fam);
    }
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown method " + method);
  }

  save_json_atomic(out, lift_family_to_json(family));
  if (!report_csv.empty()) write_diagnostics_csv(report_csv, family);
  if (!plotdata.empty()) {
    std::vector<double> eps, res, norm;
    for (const auto& d : family.diagnostics) {
      eps.push_back(d.epsilon.value_or(0.0));
      res.push_back(d.residual);
      norm.push_back(d.gen_norm);
    }
    write_plot_csv(plotdata, {{"t", family.times},
                              {"epsilon", eps},
                              {"residual", res},
                              {"gen_norm", norm}});
  }
  return kExitOk;
}

int run_verify(const std::string& traj_path, const std::string& lift_path, double step, double tol,
               const std::string& out, const std::string& plotdata) {
  const Trajectory traj = trajectory_from_json(load_json(traj_path));
  const LiftFamily family = lift_family_from_json(load_json(lift_path));
  const auto& grid = traj.knot_times();
  const VerifyReport rep = verify_lift(traj, family, grid, step);
  if (!out.empty()) save_json_atomic(out, verify_report_to_json(rep));
  if (!plotdata.empty()) {
    std::vector<double> residuals;
    for (double t : grid) {
      const auto [rho, v] = sample_with_derivative(traj, t);
      residuals.push_back(distance(family.interpolated(t).apply(rho.mat()), v.mat()));
    }
    write_plot_csv(plotdata, {{"t", grid}, {"residual", residuals}});
  }
  std::cout << "max_residual " << format_g17(rep.max_residual) << "\n"
            << "max_traj_deviation " << format_g17(rep.max_traj_deviation) << "\n"
            << "all_steps_cp " << (rep.all_steps_cp ? "true" : "false") << "\n";
  if (rep.max_traj_deviation > tol) {
    std::cerr << "verification failed: deviation " << format_g17(rep.max_traj_deviation)
              << " above tolerance " << format_g17(tol) << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int run_tangent(const std::string& state_path, const std::string& dir_path, double tol,
                const std::string& out) {
  const DensityMatrix rho(state_from_json(load_json(state_path)));
  const TangentDirection v(state_from_json(load_json(dir_path)).hermitized());
  const auto res = tangent_cone_membership(rho, v, tol);
  nlohmann::json j;
  j["member"] = res.member;
  j["necessary_check"] = res.necessary_check;
  if (res.residual) j["residual"] = *res.residual;
  if (res.witness) j["witness"] = lindbladian_to_json(*res.witness);
  if (!out.empty()) save_json_atomic(out, j);
  std::cout << (res.member ? "member" : "not a member") << "\n";
  if (!res.member) {
    if (!res.necessary_check) std::cerr << "necessary kernel condition violated\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int run_rankprofile(const std::string& input, double rank_tol, const std::string& out) {
  const Trajectory traj = trajectory_from_json(load_json(input));
  const auto profile = rank_profile(traj, traj.knot_times(), rank_tol);
  write_rank_profile_csv(out, profile);
  std::cout << "min_gap " << format_g17(profile.min_gap) << "\n"
            << "rankshifts " << profile.rankshift_times.size() << "\n";
  return kExitOk;
}

int run_mindiss(const std::string& state_path, const std::string& dir_path,
                const std::string& out) {
  const DensityMatrix rho(state_from_json(load_json(state_path)));
  const TangentDirection v(state_from_json(load_json(dir_path)).hermitized());
  const double achieved = min_dissipation_rate(rho, v);
  nlohmann::json j;
  j["achieved_min"] = achieved;
  if (!out.empty()) save_json_atomic(out, j);
  std::cout << "achieved_min " << format_g17(achieved) << "\n";
  return kExitOk;
}

std::vector<Matrix> default_discrete_knots(int count, int dim, unsigned seed) {
  // deterministic full-rank knots: mixtures of a seeded random pure state
  // with the maximally mixed state
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> knots;
  for (int k = 0; k < count; ++k) {
    std::vector<cd> psi(dim);
    double norm = 0.0;
    for (auto& c : psi) {
      c = cd(gauss(rng), gauss(rng));
      norm += std::norm(c);
    }
    norm = std::sqrt(norm);
    Matrix pure(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) pure(i, j) = psi[i] * std::conj(psi[j]) / (norm * norm);
    Matrix mixed = Matrix::identity(dim);
    mixed *= cd(1.0 / dim);
    knots.push_back((0.6 * pure + 0.4 * mixed).hermitized());
  }
  return knots;
}

int run_scenario(const std::string& name, const std::string& params_path,
                 const std::string& outdir, bool plotdata) {
  nlohmann::json params;
  if (!params_path.empty()) params = load_json(params_path);

  ScenarioResult result;
  if (name == "sin-dephasing") {
    const double t0 = params.value("t0", 0.0);
    const double t1 = params.value("t1", 2.0 * std::numbers::pi);
    const double step = params.value("step", 0.01);
    result = scenario_sin_dephasing(t0, t1, step);
  } else if (name == "eternal-nm") {
    const double horizon = params.value("horizon", 5.0);
    const int n = params.value("n", 3);
    const double step = params.value("step", 1e-3);
    result = scenario_eternal_nm(horizon, n, step);
  } else if (name == "qutrit-region") {
    const cd a = params.contains("a") ? complex_from_json(params["a"]) : cd(0.2, 0.0);
    const cd b = params.contains("b") ? complex_from_json(params["b"]) : cd(0.1, 0.0);
    std::vector<cd> z_list{cd(0.0), cd(0.05, 0.0), cd(0.0, 0.05)};
    if (params.contains("z_list")) {
      z_list.clear();
      for (const auto& z : params["z_list"]) z_list.push_back(complex_from_json(z));
    }
    const double t0 = params.value("t0", 0.2);
    const double t1 = params.value("t1", 1.0);
    const double report_step = params.value("report_step", 0.05);
    const double dense_step = params.value("dense_step", 0.01);
    result = scenario_qutrit_region(a, b, z_list, t0, t1, report_step, dense_step);
  } else if (name == "discrete") {
    std::vector<Matrix> states;
    std::vector<double> times;
    if (params.contains("states")) {
      for (const auto& s : params["states"]) states.push_back(matrix_from_json(s));
      times = params.at("times").get<std::vector<double>>();
    } else {
      states = default_discrete_knots(5, 2, 20260810);
      times = {0.0, 0.25, 0.5, 0.75, 1.0};
    }
    result = scenario_discrete_points(states, times);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown scenario " + name);
  }
  write_scenario_result(result, outdir, plotdata);
  std::cout << "scenario " << result.id << ": " << result.findings.size() << " finding(s), "
            << result.reports.size() << " report(s) written to " << outdir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-local GKSL generator families for density-matrix trajectories"};
  app.require_subcommand(1);

  // lift
  auto* lift_cmd = app.add_subcommand("lift", "construct a generator family for a trajectory");
  std::string lift_input, lift_method = "replacer", lift_policy = "adaptive";
  std::string lift_out = "lift.json", lift_report, lift_plot;
  double lift_rank_tol = tol::rank;
  lift_cmd->add_option("--input", lift_input, "trajectory JSON")->required();
  lift_cmd->add_option("--method", lift_method, "replacer|spectral|affine|feasibility");
  lift_cmd->add_option("--epsilon-policy", lift_policy, "adaptive|paper|const:<v>");
  lift_cmd->add_option("--rank-tol", lift_rank_tol, "rank tolerance for the spectral method");
  lift_cmd->add_option("--out", lift_out, "output family JSON");
  lift_cmd->add_option("--report", lift_report, "diagnostics CSV");
  lift_cmd->add_option("--plotdata", lift_plot, "plot CSV (t, named series)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check that a family lifts a trajectory");
  std::string verify_traj, verify_lift_path, verify_out, verify_plot;
  double verify_step = 1e-3, verify_tol = 1e-6;
  verify_cmd->add_option("--traj", verify_traj, "trajectory JSON")->required();
  verify_cmd->add_option("--lift", verify_lift_path, "family JSON")->required();
  verify_cmd->add_option("--step", verify_step, "integration step");
  verify_cmd->add_option("--tol", verify_tol, "deviation tolerance (exit 4 above it)");
  verify_cmd->add_option("--out", verify_out, "report JSON");
  verify_cmd->add_option("--plotdata", verify_plot, "plot CSV");

  // tangent
  auto* tangent_cmd = app.add_subcommand("tangent", "tangent cone membership");
  std::string tangent_state, tangent_dir, tangent_out;
  double tangent_tol = tol::feasibility;
  tangent_cmd->add_option("--state", tangent_state, "density JSON")->required();
  tangent_cmd->add_option("--direction", tangent_dir, "direction JSON")->required();
  tangent_cmd->add_option("--tol", tangent_tol, "membership tolerance");
  tangent_cmd->add_option("--out", tangent_out, "result JSON");

  // mindiss
  auto* mindiss_cmd = app.add_subcommand("mindiss", "minimal total dissipation rate");
  std::string mindiss_state, mindiss_dir, mindiss_out;
  mindiss_cmd->add_option("--state", mindiss_state, "density JSON")->required();
  mindiss_cmd->add_option("--direction", mindiss_dir, "direction JSON")->required();
  mindiss_cmd->add_option("--out", mindiss_out, "result JSON");

  // rankprofile
  auto* rank_cmd = app.add_subcommand("rankprofile", "eigenvalue and rank profile CSV");
  std::string rank_input, rank_out = "profile.csv";
  double rank_tol_arg = tol::rank;
  rank_cmd->add_option("--input", rank_input, "trajectory JSON")->required();
  rank_cmd->add_option("--rank-tol", rank_tol_arg, "rank tolerance");
  rank_cmd->add_option("--out", rank_out, "output CSV");

  // scenario
  auto* scenario_cmd = app.add_subcommand("scenario", "run a built-in scenario");
  std::string scenario_name, scenario_params, scenario_outdir = "scenario-out";
  bool scenario_plot = false;
  scenario_cmd
      ->add_option("name", scenario_name, "sin-dephasing|eternal-nm|qutrit-region|discrete")
      ->required();
  scenario_cmd->add_option("--params", scenario_params, "parameter JSON");
  scenario_cmd->add_option("--outdir", scenario_outdir, "output directory");
  scenario_cmd->add_flag("--plotdata", scenario_plot, "emit plot.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lift_cmd->parsed()) {
      return run_lift(lift_input, lift_method, lift_policy, lift_rank_tol, lift_out, lift_report,
                      lift_plot);
    }
    if (verify_cmd->parsed()) {
      return run_verify(verify_traj, verify_lift_path, verify_step, verify_tol, verify_out,
                        verify_plot);
    }
    if (tangent_cmd->parsed()) {
      return run_tangent(tangent_state, tangent_dir, tangent_tol, tangent_out);
    }
    if (mindiss_cmd->parsed()) {
      return run_mindiss(mindiss_state, mindiss_dir, mindiss_out);
    }
    if (rank_cmd->parsed()) {
      return run_rankprofile(rank_input, rank_tol_arg, rank_out);
    }
    if (scenario_cmd->parsed()) {
      return run_scenario(scenario_name, scenario_params, scenario_outdir, scenario_plot);
    }
  } catch (const Error& e) {
    std::cerr << error_code_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitOk;
}
