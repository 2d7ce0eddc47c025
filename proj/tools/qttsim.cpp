// Copyright 2026 The qttsim Authors
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

// Batch front-end: parse a declarative run configuration, build the model,
// integrate, and emit trajectory, telemetry and manifest files.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtt/config.hpp"
#include "qtt/lindblad.hpp"
#include "qtt/models.hpp"
#include "qtt/observables.hpp"
#include "qtt/quantics.hpp"
#include "qtt/schrodinger.hpp"
#include "qtt/serialize.hpp"
#include "qtt/verify.hpp"

namespace {

using namespace qtt;
namespace fs = std::filesystem;
namespace pu = qtt::purified;
namespace lb = qtt::lindblad;
namespace sch = qtt::schrodinger;
namespace q = qtt::quantics;

constexpr const char* kVersion = "qttsim 0.1.0";

std::vector<double> make_grid(double h, double t_final) {
  const size_t steps = static_cast<size_t>(std::llround(std::ceil(t_final / h - 1e-9)));
  std::vector<double> grid(steps + 1);
  for (size_t i = 0; i <= steps; ++i) grid[i] = h * double(i);
  return grid;
}

struct SnapshotPlan {
  std::vector<double> times;
  size_t next = 0;

  bool due(double t, double h) {
    if (next >= times.size()) return false;
    if (t + h / 2 >= times[next]) {
      ++next;
      return true;
    }
    return false;
  }
};

nlohmann::json base_manifest(const config::SimulationConfig& cfg) {
  nlohmann::json m;
  m["version"] = kVersion;
  m["compiler"] = __VERSION__;
  m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
               "." + std::to_string(EIGEN_MINOR_VERSION);
  for (const auto& [k, v] : cfg.resolved) m["config"][k] = v;
  return m;
}

int run_kerr(const config::SimulationConfig& cfg, const fs::path& out, nlohmann::json& manifest) {
  models::KerrParams p = cfg.kerr;
  auto model = models::kerr_model(p);
  if (!cfg.kerr_drive.empty()) {
    auto drive = cfg.kerr_drive;
    model.h = sch::TimeDependentHamiltonian::make(model.h.h0, model.h.h1,
                                                  [drive](double t) { return drive(t); });
  }
  const std::map<std::string, sch::Method> methods{
      {"rk4", sch::Method::Rk4},
      {"cn", sch::Method::CrankNicolson},
      {"tdvp_plain", sch::Method::TdvpPlain},
      {"tdvp_magnus", sch::Method::TdvpMagnus}};
  MPO a_op = q::annihilation_mpo(p.bits, 1e-12);
  MPO n_op = q::number_mpo(p.bits);
  auto grid = make_grid(cfg.h_t, cfg.t_final);
  TruncationPolicy policy{std::min(cfg.budget.tol_q, cfg.budget.tol_e), cfg.budget.max_q};

  SnapshotPlan snaps{cfg.snapshot_times};
  size_t snap_count = 0;
  sch::EvolveOptions opts;
  opts.observer = [&](double t, const TensorTrain& psi) {
    if (snaps.due(t, cfg.h_t)) {
      const std::string name = "snapshot_" + std::to_string(snap_count++) + ".qtt";
      io::save_tt((out / name).string(), psi);
      manifest["snapshots"].push_back({{"t", t}, {"file", name}});
    }
  };
  auto traj = sch::evolve(model.h, model.psi0, grid, methods.at(cfg.integrator), policy,
                          {{"a", a_op}, {"n", n_op}}, opts);

  std::ofstream f(out / "trajectory.txt");
  f.precision(17);
  f << "# t re_a im_a n norm max_chi_q\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const auto& s = traj.report.steps[i];
    f << traj.times[i] << ' ' << traj.observables["a"][i].real() << ' '
      << traj.observables["a"][i].imag() << ' ' << traj.observables["n"][i].real() << ' '
      << s.norm << ' ' << s.max_bond << '\n';
  }
  manifest["status"] = "completed";
  return 0;
}

int run_open(const config::SimulationConfig& cfg, const fs::path& out, nlohmann::json& manifest) {
  lb::LindbladModel model;
  pu::PurifiedDensityMatrix initial;
  std::vector<std::pair<std::string, MPO>> observables;

  if (cfg.model_kind == "cat") {
    model = models::cat_model(cfg.cat);
    initial = models::cat_plus_state(cfg.cat);
    for (const auto& name : cfg.observables) {
      if (name == "a")
        observables.emplace_back(
            name, pu::chain_operator(model.layout,
                                     {{0, q::annihilation_mpo(cfg.cat.bits_a, 1e-12)}}));
      else if (name == "n_a")
        observables.emplace_back(
            name, pu::chain_operator(model.layout, {{0, q::number_mpo(cfg.cat.bits_a)}}));
      else if (name == "n_b")
        observables.emplace_back(
            name, pu::chain_operator(model.layout, {{1, q::number_mpo(cfg.cat.bits_b)}}));
      else
        throw config::ConfigError("unknown cat observable '" + name + "' (a, n_a, n_b)");
    }
  } else {
    auto tm = models::transmon_cavity_model(cfg.transmon);
    manifest["omega_d_ghz"] = tm.omega_d_ghz;
    manifest["omega01_ghz"] = tm.basis.omega01_ghz();
    model = std::move(tm.model);
    initial = models::dressed_initial_state(tm, cfg.transmon_initial);
    for (const auto& name : cfg.observables) {
      if (name == "n_t")
        observables.emplace_back(name,
                                 pu::chain_operator(model.layout, {{0, tm.basis.number_op}}));
      else if (name == "n_c")
        observables.emplace_back(
            name, pu::chain_operator(model.layout, {{1, q::number_mpo(cfg.transmon.bits_c)}}));
      else
        throw config::ConfigError("unknown transmon observable '" + name + "' (n_t, n_c)");
    }
  }

  auto grid = make_grid(cfg.h_t, cfg.t_final);
  SnapshotPlan snaps{cfg.snapshot_times};
  size_t snap_count = 0;
  auto observer = [&](double t, const pu::PurifiedDensityMatrix& state) {
    if (snaps.due(t, cfg.h_t)) {
      const std::string name = "snapshot_" + std::to_string(snap_count++) + ".qtt";
      pu::save_state((out / name).string(), state);
      manifest["snapshots"].push_back({{"t", t}, {"file", name}});
    }
  };
  auto traj = lb::evolve_lindblad(model, initial, grid,
                                  cfg.integrator == "order1" ? lb::Scheme::Order1
                                                             : lb::Scheme::Order2,
                                  cfg.budget, observables, observer);

  std::ofstream f(out / "trajectory.txt");
  f.precision(17);
  f << "# t";
  for (const auto& [name, op] : observables) f << " re_" << name << " im_" << name;
  f << " purity trace_pre chi_q chi_e chi_mu elements\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const auto& rec = traj.records[i];
    f << traj.times[i];
    for (const auto& [name, op] : observables)
      f << ' ' << traj.observables[name][i].real() << ' ' << traj.observables[name][i].imag();
    f << ' ' << rec.purity << ' ' << rec.trace_pre << ' ' << rec.chi_q << ' ' << rec.chi_e << ' '
      << rec.chi_mu << ' ' << rec.elements << '\n';
  }

  if (cfg.model_kind == "cat" && cfg.cat.epsilon_z != 0.0 && traj.completed) {
    manifest["p_z_measured"] = models::z_gate_error(cfg.cat, traj.final_state);
    manifest["p_z_predicted"] = cfg.cat.predicted_pz();
  }
  if (!traj.completed) {
    manifest["status"] = "failed";
    manifest["failure"] = traj.failure;
    return 1;
  }
  manifest["status"] = "completed";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  config::SimulationConfig cfg;
  try {
    cfg = config::parse_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  const fs::path out = out_dir.empty() ? fs::path(cfg.out_dir) : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  nlohmann::json manifest = base_manifest(cfg);
  const auto start = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    rc = (cfg.model_kind == "kerr") ? run_kerr(cfg, out, manifest)
                                    : run_open(cfg, out, manifest);
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["failure"] = e.what();
    rc = 1;
    std::cerr << "run failed: " << e.what() << '\n';
  }
  manifest["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream mf(out / "manifest.json");
  mf << manifest.dump(2) << '\n';
  if (rc == 0) std::cout << "wrote " << (out / "trajectory.txt").string() << '\n';
  return rc;
}

int cmd_verify(const std::string& suite) {
  std::vector<int> ids;
  try {
    ids = verify::suite_criteria(suite);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  bool all = true;
  for (int id : ids) {
    const auto r = verify::run_criterion(id);
    std::cout << verify::format_line(r);
    std::cout.flush();
    all = all && r.pass;
  }
  std::cout << (all ? "suite passed" : "suite FAILED") << '\n';
  return all ? 0 : 1;
}

int cmd_inspect(const std::string& path) {
  // purified snapshot first, plain train second
  try {
    auto state = pu::load_state(path);
    const auto t = observables::telemetry(state);
    std::cout << "purified state: " << state.layout.num_modes() << " modes (";
    for (size_t i = 0; i < state.layout.num_modes(); ++i)
      std::cout << (i ? ", " : "") << state.layout.modes[i].bits << " bits";
    std::cout << ")\n";
    std::cout << "chi_q " << t.chi_q << ", chi_e " << t.chi_e << ", chi_mu " << t.chi_mu
              << ", elements " << t.element_count << '\n';
    std::cout << "trace " << t.trace << ", purity " << t.purity << '\n';
    return 0;
  } catch (const std::exception&) {
  }
  try {
    auto tt = io::load_tt(path);
    std::cout << "tensor train: " << tt.num_sites() << " sites, bonds";
    for (size_t b : tt.bond_dims()) std::cout << ' ' << b;
    std::cout << "\nnorm " << tt.norm() << ", elements " << tt.element_count() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "cannot read " << path << ": " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("QTTSIM_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"tensor-network simulator for closed and open bosonic dynamics"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir, suite = "all", snapshot;
  auto* run = app.add_subcommand("run", "integrate a configured model");
  run->add_option("--config", config_path, "configuration file")->required();
  run->add_option("--out", out_dir, "output directory (overrides the config)");

  auto* ver = app.add_subcommand("verify", "run an acceptance suite");
  ver->add_option("--suite", suite,
                  "operators | integrators | lindblad | cat | transmon | all");

  auto* ins = app.add_subcommand("inspect", "print telemetry of a serialized state");
  ins->add_option("--snapshot", snapshot, "snapshot file")->required();

  CLI11_PARSE(app, argc, argv);
  if (run->parsed()) return cmd_run(config_path, out_dir);
  if (ver->parsed()) return cmd_verify(suite);
  return cmd_inspect(snapshot);
}
