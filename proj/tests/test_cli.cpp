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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qtt/config.hpp"

using namespace qtt;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

const char* kKerrConfig = R"(# driven Kerr oscillator, small register
[model]
kind = kerr

[kerr]
bits = 5
omega0 = 1.0
kerr = 0.04
alpha0 = 1.5
drive = 0.02*cos(1.4142135623730951*t) + 0.0628*cos(1.7320508075688772*t)

[integrator]
method = rk4
h_t = 0.01
t_final = 0.1

[budget]
tol = 1e-10

[output]
directory = cli_out
observables = a, n
snapshots = 0.05
seed = 7
)";

}  // namespace

TEST_CASE("drive grammar accepts the whitelisted forms") {
  auto d = config::parse_drive("0.02*cos(1.5*t) + 0.03*sin(2*t+0.25) - 1e-3*cos(0.5*t-0.1)");
  REQUIRE(d.terms.size() == 3);
  CHECK(d.terms[0].amplitude == 0.02);
  CHECK(!d.terms[0].is_sin);
  CHECK(d.terms[1].is_sin);
  CHECK(d.terms[2].amplitude == -1e-3);
  const double t = 0.37;
  const double expect = 0.02 * std::cos(1.5 * t) + 0.03 * std::sin(2 * t + 0.25) -
                        1e-3 * std::cos(0.5 * t - 0.1);
  CHECK(std::abs(d(t) - expect) < 1e-15);
}

TEST_CASE("drive grammar rejects anything else") {
  CHECK_THROWS_AS(config::parse_drive("exp(t)"), config::ConfigError);
  CHECK_THROWS_AS(config::parse_drive("0.1*cos(t)"), config::ConfigError);  // missing w*t
  CHECK_THROWS_AS(config::parse_drive("0.1*tan(2*t)"), config::ConfigError);
  CHECK_THROWS_AS(config::parse_drive("system('rm')"), config::ConfigError);
  CHECK_THROWS_AS(config::parse_drive(""), config::ConfigError);
}

TEST_CASE("config parsing resolves defaults and records them") {
  auto cfg = config::parse_config_text(kKerrConfig, "test.cfg");
  CHECK(cfg.model_kind == "kerr");
  CHECK(cfg.kerr.bits == 5);
  CHECK(cfg.kerr.alpha0 == 1.5);
  CHECK(cfg.integrator == "rk4");
  CHECK(cfg.h_t == 0.01);
  CHECK(cfg.budget.tol_q == 1e-10);
  CHECK(cfg.observables == std::vector<std::string>{"a", "n"});
  CHECK(cfg.snapshot_times == std::vector<double>{0.05});
  CHECK(cfg.seed == 7);
  CHECK(cfg.resolved.at("model.kind") == "kerr");
  CHECK(cfg.resolved.count("budget.tol_q") == 1);
}

TEST_CASE("config errors carry the offending line") {
  const std::string bad = "[model]\nkind = kerr\n\n[kerr]\nbogus_key = 3\n";
  try {
    config::parse_config_text(bad, "bad.cfg");
    FAIL("expected a config error");
  } catch (const config::ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.cfg:5") != std::string::npos);
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
}

TEST_CASE("config rejects non-positive rates and unknown sections") {
  CHECK_THROWS_AS(
      config::parse_config_text("[model]\nkind = cat\n\n[cat]\nkappa_b = -1\n", "x.cfg"),
      config::ConfigError);
  CHECK_THROWS_AS(
      config::parse_config_text("[model]\nkind = kerr\n\n[mystery]\nx = 1\n", "x.cfg"),
      config::ConfigError);
  CHECK_THROWS_AS(config::parse_config_text("[model]\nkind = carrot\n", "x.cfg"),
                  config::ConfigError);
}

TEST_CASE("full kerr run produces trajectory, manifest and snapshot") {
  write_file("cli_kerr.cfg", kKerrConfig);
  std::system("rm -rf cli_out");
  const int rc = std::system("./qttsim run --config cli_kerr.cfg > /dev/null 2>&1");
  REQUIRE(rc == 0);
  const std::string traj = read_file("cli_out/trajectory.txt");
  CHECK(traj.find("# t re_a im_a n norm max_chi_q") == 0);
  // 10 steps + header + initial
  size_t rows = 0;
  for (char c : traj)
    if (c == '\n') ++rows;
  CHECK(rows == 12);
  const std::string manifest = read_file("cli_out/manifest.json");
  CHECK(manifest.find("\"status\": \"completed\"") != std::string::npos);
  CHECK(manifest.find("snapshot_0.qtt") != std::string::npos);
  // determinism: identical config gives bit-identical trajectories
  std::system("rm -rf cli_out2");
  std::system("./qttsim run --config cli_kerr.cfg --out cli_out2 > /dev/null 2>&1");
  CHECK(read_file("cli_out2/trajectory.txt") == traj);
  // the snapshot is inspectable
  CHECK(std::system("./qttsim inspect --snapshot cli_out/snapshot_0.qtt > /dev/null 2>&1") == 0);
  std::system("rm -rf cli_out cli_out2 cli_kerr.cfg");
}

TEST_CASE("invalid config exits nonzero with a message") {
  write_file("cli_bad.cfg", "[model]\nkind = kerr\n\n[kerr]\nnope = 1\n");
  const int rc = std::system("./qttsim run --config cli_bad.cfg > /dev/null 2>&1");
  CHECK(rc != 0);
  std::system("rm -f cli_bad.cfg");
}

TEST_CASE("a small cat run writes open-system telemetry columns") {
  const char* cat_cfg = R"(
[model]
kind = cat

[cat]
g2 = 1.0
kappa_b = 10.0
epsilon_d = 2.0
epsilon_z = 0.04
bits_a = 3
bits_b = 3

[integrator]
method = order2
h_t = 0.005
t_final = 0.05

[budget]
tol = 1e-8

[output]
directory = cli_cat
observables = a
)";
  write_file("cli_cat.cfg", cat_cfg);
  std::system("rm -rf cli_cat");
  const int rc = std::system("./qttsim run --config cli_cat.cfg > /dev/null 2>&1");
  REQUIRE(rc == 0);
  const std::string traj = read_file("cli_cat/trajectory.txt");
  CHECK(traj.find("# t re_a im_a purity trace_pre chi_q chi_e chi_mu elements") == 0);
  const std::string manifest = read_file("cli_cat/manifest.json");
  CHECK(manifest.find("p_z_measured") != std::string::npos);
  std::system("rm -rf cli_cat cli_cat.cfg");
}
