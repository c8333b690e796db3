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

#include "lindlift/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lindlift {

using nlohmann::json;

nlohmann::json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.dim(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::InvalidInput, "matrix_from_json: expected nested arrays");
  }
  const int d = static_cast<int>(j.size());
  Matrix m(d);
  for (int r = 0; r < d; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != d) {
      throw Error(ErrorCode::InvalidInput, "matrix_from_json: ragged rows");
    }
    for (int c = 0; c < d; ++c) {
      const auto& e = j[r][c];
      if (!e.is_array() || e.size() != 2) {
        throw Error(ErrorCode::InvalidInput, "matrix_from_json: entry must be [re, im]");
      }
      m(r, c) = cd(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!m.is_finite()) throw Error(ErrorCode::InvalidInput, "matrix_from_json: non-finite entry");
  return m;
}

nlohmann::json lindbladian_to_json(const Lindbladian& l) {
  json j;
  j["dim"] = l.dim;
  j["hamiltonian"] = matrix_to_json(l.hamiltonian);
  if (l.has_kossakowski()) {
    j["kossakowski"] = matrix_to_json(*l.kossakowski);
    j["basis"] = "gellmann-v1";
  } else {
    json jumps = json::array();
    for (const auto& a : l.jumps) jumps.push_back(matrix_to_json(a));
    j["jumps"] = std::move(jumps);
    j["rates"] = l.rates;
  }
  return j;
}

Lindbladian lindbladian_from_json(const json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    Matrix h = j.contains("hamiltonian") ? matrix_from_json(j.at("hamiltonian")) : Matrix(dim);
    if (h.dim() != dim) throw Error(ErrorCode::InvalidInput, "lindbladian: hamiltonian dim");
    if (j.contains("kossakowski")) {
      if (j.contains("basis") && j.at("basis").get<std::string>() != "gellmann-v1") {
        throw Error(ErrorCode::InvalidInput, "lindbladian: unknown basis tag");
      }
      return Lindbladian::from_kossakowski(std::move(h), matrix_from_json(j.at("kossakowski")));
    }
    std::vector<Matrix> jumps;
    for (const auto& a : j.at("jumps")) jumps.push_back(matrix_from_json(a));
    std::vector<double> rates = j.at("rates").get<std::vector<double>>();
    return Lindbladian::from_jumps(std::move(h), std::move(jumps), std::move(rates));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("lindbladian_from_json: ") + e.what());
  }
}

nlohmann::json trajectory_to_json(const Trajectory& traj) {
  const auto& times = traj.knot_times();
  if (times.empty()) {
    throw Error(ErrorCode::InvalidInput, "trajectory_to_json: analytic source, resample first");
  }
  json j;
  j["dim"] = traj.dim();
  j["times"] = times;
  json states = json::array();
  for (const auto& s : traj.knot_states()) states.push_back(matrix_to_json(s));
  j["states"] = std::move(states);
  json derivs = json::array();
  bool have_derivs = traj.has_exact_derivative() && !traj.is_piecewise_affine();
  if (have_derivs) {
    for (double t : times) derivs.push_back(matrix_to_json(*traj.exact_derivative(t)));
    j["derivatives"] = std::move(derivs);
  }
  return j;
}

Trajectory trajectory_from_json(const json& j, bool validate) {
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<double> times = j.at("times").get<std::vector<double>>();
    std::vector<Matrix> states;
    for (const auto& s : j.at("states")) states.push_back(matrix_from_json(s));
    std::optional<std::vector<Matrix>> derivs;
    if (j.contains("derivatives")) {
      derivs.emplace();
      for (const auto& d : j.at("derivatives")) derivs->push_back(matrix_from_json(d));
    }
    return Trajectory::grid(dim, std::move(times), std::move(states), std::move(derivs), validate);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("trajectory_from_json: ") + e.what());
  }
}

nlohmann::json lift_family_to_json(const LiftFamily& family) {
  json j;
  j["dim"] = family.dim;
  j["times"] = family.times;
  json gens = json::array();
  for (size_t k = 0; k < family.size(); ++k) {
    if (family.lindblads[k]) {
      gens.push_back(lindbladian_to_json(*family.lindblads[k]));
    } else {
      json g;
      g["dim"] = family.dim;
      g["superoperator"] = matrix_to_json(family.superops[k].m);
      gens.push_back(std::move(g));
    }
  }
  j["generators"] = std::move(gens);
  json diags = json::array();
  for (const auto& d : family.diagnostics) {
    json e;
    e["t"] = d.t;
    e["epsilon"] = d.epsilon ? json(*d.epsilon) : json(nullptr);
    e["residual"] = d.residual;
    e["sigma_min_eig"] = d.sigma_min_eig ? json(*d.sigma_min_eig) : json(nullptr);
    e["gksl_valid"] = d.gksl_valid;
    e["gen_norm"] = d.gen_norm;
    diags.push_back(std::move(e));
  }
  j["diagnostics"] = std::move(diags);
  return j;
}

LiftFamily lift_family_from_json(const json& j) {
  try {
    LiftFamily family;
    family.dim = j.at("dim").get<int>();
    family.times = j.at("times").get<std::vector<double>>();
    for (const auto& g : j.at("generators")) {
      if (g.contains("superoperator")) {
        family.superops.push_back({family.dim, matrix_from_json(g.at("superoperator"))});
        family.lindblads.emplace_back(std::nullopt);
      } else {
        Lindbladian l = lindbladian_from_json(g);
        family.superops.push_back(to_superoperator(l));
        family.lindblads.emplace_back(std::move(l));
      }
    }
    if (j.contains("diagnostics")) {
      for (const auto& e : j.at("diagnostics")) {
        LiftPointDiagnostics d;
        d.t = e.at("t").get<double>();
        if (e.contains("epsilon") && !e.at("epsilon").is_null()) {
          d.epsilon = e.at("epsilon").get<double>();
        }
        d.residual = e.at("residual").get<double>();
        if (e.contains("sigma_min_eig") && !e.at("sigma_min_eig").is_null()) {
          d.sigma_min_eig = e.at("sigma_min_eig").get<double>();
        }
        d.gksl_valid = e.at("gksl_valid").get<bool>();
        d.gen_norm = e.at("gen_norm").get<double>();
        family.diagnostics.push_back(d);
      }
    }
    if (family.times.size() != family.superops.size()) {
      throw Error(ErrorCode::InvalidInput, "lift_family_from_json: times/generators mismatch");
    }
    return family;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("lift_family_from_json: ") + e.what());
  }
}

nlohmann::json verify_report_to_json(const VerifyReport& rep) {
  json j;
  j["max_residual"] = rep.max_residual;
  j["max_traj_deviation"] = rep.max_traj_deviation;
  j["all_steps_cp"] = rep.all_steps_cp;
  j["max_step_choi_negativity"] = rep.max_step_choi_negativity;
  j["grid_step"] = rep.grid_step;
  j["max_integrator_disagreement"] = rep.max_integrator_disagreement;
  return j;
}

nlohmann::json state_to_json(const Matrix& m) {
  json j;
  j["dim"] = m.dim();
  j["matrix"] = matrix_to_json(m);
  return j;
}

Matrix state_from_json(const json& j) {
  try {
    Matrix m = matrix_from_json(j.at("matrix"));
    if (j.contains("dim") && j.at("dim").get<int>() != m.dim()) {
      throw Error(ErrorCode::InvalidInput, "state_from_json: dim field mismatch");
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("state_from_json: ") + e.what());
  }
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw Error(ErrorCode::InvalidInput, "write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void save_json_atomic(const std::string& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_plot_csv(const std::string& path,
                    const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  std::ostringstream out;
  for (size_t i = 0; i < series.size(); ++i) {
    if (i) out << ",";
    out << series[i].first;
  }
  out << "\n";
  const size_t n = series.empty() ? 0 : series.front().second.size();
  for (size_t r = 0; r < n; ++r) {
    for (size_t i = 0; i < series.size(); ++i) {
      if (i) out << ",";
      if (r < series[i].second.size()) out << format_g17(series[i].second[r]);
    }
    out << "\n";
  }
  write_text_atomic(path, out.str());
}

void write_rank_profile_csv(const std::string& path, const RankProfile& profile) {
  std::ostringstream out;
  const int d = profile.eigenvalues.empty() ? 0 : static_cast<int>(profile.eigenvalues[0].size());
  out << "t";
  for (int i = 1; i <= d; ++i) out << ",lambda_" << i;
  out << ",rank\n";
  for (size_t k = 0; k < profile.times.size(); ++k) {
    out << format_g17(profile.times[k]);
    for (double l : profile.eigenvalues[k]) out << "," << format_g17(l);
    out << "," << profile.ranks[k] << "\n";
  }
  write_text_atomic(path, out.str());
}

void write_diagnostics_csv(const std::string& path, const LiftFamily& family) {
  std::ostringstream out;
  out << "t,epsilon,residual,sigma_min_eig,gksl_valid,gen_norm\n";
  for (const auto& d : family.diagnostics) {
    out << format_g17(d.t) << ",";
    if (d.epsilon) out << format_g17(*d.epsilon);
    out << "," << format_g17(d.residual) << ",";
    if (d.sigma_min_eig) out << format_g17(*d.sigma_min_eig);
    out << "," << (d.gksl_valid ? 1 : 0) << "," << format_g17(d.gen_norm) << "\n";
  }
  write_text_atomic(path, out.str());
}

}  // namespace lindlift
