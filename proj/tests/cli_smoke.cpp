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

// End-to-end CLI checks: file formats, exit codes, determinism.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "lindlift/json_io.hpp"
#include "lindlift/scenarios.hpp"

using namespace lindlift;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void require(bool ok, const std::string& what) {
  if (!ok) {
    std::cerr << "[cli_smoke FAIL] " << what << "\n";
    ++g_failures;
  }
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_smoke <path-to-lindlift-binary>\n";
    return 1;
  }
  const std::string cli = argv[1];
  const fs::path dir = fs::temp_directory_path() / "lindlift_cli_smoke";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();

  // input files
  save_json_atomic(d + "/traj.json",
                   trajectory_to_json(resample(eternal_nm_trajectory(1.0),
                                               step_grid(0.0, 1.0, 0.02), true)));
  save_json_atomic(d + "/rho_pure.json",
                   state_to_json(Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}})));
  save_json_atomic(d + "/v_out.json",
                   state_to_json(Matrix::from_rows({{1.0, 0.0}, {0.0, -1.0}})));
  save_json_atomic(d + "/v_in.json",
                   state_to_json(Matrix::from_rows({{-1.0, 0.0}, {0.0, 1.0}})));
  save_json_atomic(d + "/rho_mixed.json",
                   state_to_json(Matrix::from_rows({{0.5, 0.0}, {0.0, 0.5}})));
  save_json_atomic(d + "/v_zero.json", state_to_json(Matrix(2)));
  write_text_atomic(d + "/bad.json", "{ this is not json");

  // lift + verify round trip through files
  require(run(cli + " lift --input " + d + "/traj.json --method replacer --epsilon-policy" +
              " const:1 --out " + d + "/lift.json --report " + d + "/diag.csv --plotdata " + d +
              "/plot.csv > /dev/null 2>&1") == 0,
          "lift subcommand exits 0");
  require(fs::exists(d + "/lift.json") && fs::exists(d + "/diag.csv") &&
              fs::exists(d + "/plot.csv"),
          "lift writes family, report and plot files");
  require(run(cli + " verify --traj " + d + "/traj.json --lift " + d + "/lift.json --step 0.02" +
              " --tol 1e-4 --out " + d + "/report.json > /dev/null 2>&1") == 0,
          "verify subcommand exits 0 under tolerance");
  {
    const auto rep = load_json(d + "/report.json");
    require(rep.at("max_residual").get<double>() <= 1e-10, "verify report residual is tiny");
    require(rep.at("all_steps_cp").get<bool>(), "verify report records CP steps");
  }
  require(run(cli + " verify --traj " + d + "/traj.json --lift " + d + "/lift.json --step 0.02" +
              " --tol 1e-12 --out " + d + "/report4.json > /dev/null 2>&1") == 4,
          "verify exits 4 above tolerance");

  // tangent cone: outward velocity refused with the kernel message, exit 2
  {
    const int code = run(cli + " tangent --state " + d + "/rho_pure.json --direction " + d +
                         "/v_out.json > /dev/null 2> " + d + "/tangent_err.txt");
    require(code == 2, "tangent exits 2 outside the cone");
    require(slurp(d + "/tangent_err.txt").find("necessary kernel condition violated") !=
                std::string::npos,
            "tangent reports the violated kernel condition");
  }
  require(run(cli + " tangent --state " + d + "/rho_pure.json --direction " + d +
              "/v_in.json > /dev/null 2>&1") == 0,
          "tangent accepts the decay direction");

  // minimal dissipation of the zero velocity is zero, exit 0
  require(run(cli + " mindiss --state " + d + "/rho_mixed.json --direction " + d +
              "/v_zero.json --out " + d + "/mindiss.json > /dev/null 2>&1") == 0,
          "mindiss subcommand exits 0");
  require(load_json(d + "/mindiss.json").at("achieved_min").get<double>() == 0.0,
          "zero velocity needs no dissipation");

  // malformed input: exit 3
  require(run(cli + " lift --input " + d + "/bad.json --out " + d + "/x.json > /dev/null 2>&1") ==
              3,
          "malformed JSON exits 3");

  // scenario run is deterministic
  require(run(cli + " scenario discrete --outdir " + d + "/scn1 --plotdata > /dev/null 2>&1") == 0,
          "scenario discrete exits 0");
  require(run(cli + " scenario discrete --outdir " + d + "/scn2 --plotdata > /dev/null 2>&1") == 0,
          "scenario discrete rerun exits 0");
  require(slurp(d + "/scn1/result.json") == slurp(d + "/scn2/result.json") &&
              !slurp(d + "/scn1/result.json").empty(),
          "scenario result.json is byte-identical across runs");

  fs::remove_all(dir);
  if (g_failures == 0) std::puts("cli_smoke: all checks passed");
  return g_failures;
}
