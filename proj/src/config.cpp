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

#include "qtt/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace qtt::config {

double DriveSpec::operator()(double t) const {
  double v = 0.0;
  for (const auto& term : terms)
    v += term.amplitude *
         (term.is_sin ? std::sin(term.omega * t + term.phase)
                      : std::cos(term.omega * t + term.phase));
  return v;
}

namespace {

struct DriveParser {
  const std::string& s;
  size_t pos = 0;

  explicit DriveParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(const std::string& w) {
    skip_ws();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ConfigError("drive expression: " + what + " at position " + std::to_string(pos) +
                      " of \"" + s + "\"");
  }
  double number() {
    skip_ws();
    size_t end = pos;
    while (end < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' || s[end] == 'e' ||
            s[end] == 'E' || ((s[end] == '+' || s[end] == '-') && end > pos &&
                              (s[end - 1] == 'e' || s[end - 1] == 'E'))))
      ++end;
    if (end == pos) fail("expected a number");
    const double v = std::stod(s.substr(pos, end - pos));
    pos = end;
    return v;
  }

  // term := amplitude '*' ('cos' | 'sin') '(' omega '*t' [('+'|'-') phase] ')'
  DriveTerm term(double sign) {
    DriveTerm t;
    t.amplitude = sign * number();
    if (!eat('*')) fail("expected '*' after the amplitude");
    if (eat_word("cos"))
      t.is_sin = false;
    else if (eat_word("sin"))
      t.is_sin = true;
    else
      fail("expected cos or sin");
    if (!eat('(')) fail("expected '('");
    t.omega = number();
    if (!eat('*')) fail("expected '*t'");
    if (!eat_word("t")) fail("expected '*t'");
    skip_ws();
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      const double psign = (s[pos] == '+') ? 1.0 : -1.0;
      ++pos;
      t.phase = psign * number();
    }
    if (!eat(')')) fail("expected ')'");
    return t;
  }
};

}  // namespace

DriveSpec parse_drive(const std::string& text) {
  DriveSpec spec;
  spec.source = text;
  DriveParser p(text);
  double sign = 1.0;
  p.skip_ws();
  if (p.pos >= text.size()) throw ConfigError("drive expression: empty");
  if (p.eat('-')) sign = -1.0;
  spec.terms.push_back(p.term(sign));
  for (;;) {
    p.skip_ws();
    if (p.pos >= text.size()) break;
    if (p.eat('+'))
      sign = 1.0;
    else if (p.eat('-'))
      sign = -1.0;
    else
      p.fail("expected '+' or '-' between terms");
    spec.terms.push_back(p.term(sign));
  }
  return spec;
}

namespace {

struct RawConfig {
  // section -> key -> (value, line)
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> data;
  std::string filename;

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw ConfigError(filename + ":" + std::to_string(line) + ": " + what);
  }
};

RawConfig tokenize(const std::string& text, const std::string& filename) {
  RawConfig raw;
  raw.filename = filename;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  auto trim = [](std::string v) {
    const auto a = v.find_first_not_of(" \t\r");
    const auto b = v.find_last_not_of(" \t\r");
    return (a == std::string::npos) ? std::string() : v.substr(a, b - a + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') raw.fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) raw.fail(lineno, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) raw.fail(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) raw.fail(lineno, "empty key");
    if (raw.data[section].count(key)) raw.fail(lineno, "duplicate key '" + key + "'");
    raw.data[section][key] = {value, lineno};
  }
  return raw;
}

class Section {
 public:
  Section(RawConfig& raw, std::string name) : raw_(raw), name_(std::move(name)) {}

  bool has(const std::string& key) const {
    auto it = raw_.data.find(name_);
    return it != raw_.data.end() && it->second.count(key);
  }
  std::string str(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    if (!has(key)) return fallback;
    return raw_.data[name_][key].first;
  }
  double num(const std::string& key, double fallback) {
    used_.insert(key);
    if (!has(key)) return fallback;
    const auto& [v, line] = raw_.data[name_][key];
    try {
      size_t taken = 0;
      const double x = std::stod(v, &taken);
      if (taken != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      raw_.fail(line, "key '" + key + "' needs a number, got '" + v + "'");
    }
  }
  double positive(const std::string& key, double fallback) {
    const double v = num(key, fallback);
    if (v <= 0.0) {
      const int line = has(key) ? raw_.data[name_][key].second : 0;
      raw_.fail(line, "key '" + key + "' must be positive");
    }
    return v;
  }
  size_t integer(const std::string& key, size_t fallback) {
    const double v = num(key, double(fallback));
    if (v < 0 || v != std::floor(v)) {
      const int line = has(key) ? raw_.data[name_][key].second : 0;
      raw_.fail(line, "key '" + key + "' must be a non-negative integer");
    }
    return static_cast<size_t>(v);
  }
  void finish() {
    auto it = raw_.data.find(name_);
    if (it == raw_.data.end()) return;
    for (const auto& [key, vl] : it->second)
      if (!used_.count(key))
        raw_.fail(vl.second, "unknown key '" + key + "' in section [" + name_ + "]");
  }

 private:
  RawConfig& raw_;
  std::string name_;
  std::set<std::string> used_;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<std::string> parse_names(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

}  // namespace

SimulationConfig parse_config_text(const std::string& text, const std::string& filename) {
  RawConfig raw = tokenize(text, filename);
  SimulationConfig cfg;

  Section model(raw, "model");
  cfg.model_kind = model.str("kind", "");
  if (cfg.model_kind != "kerr" && cfg.model_kind != "cat" && cfg.model_kind != "transmon")
    throw ConfigError(filename + ": [model] kind must be kerr, cat or transmon");
  model.finish();

  if (cfg.model_kind == "kerr") {
    Section s(raw, "kerr");
    cfg.kerr.omega0 = s.num("omega0", cfg.kerr.omega0);
    cfg.kerr.kerr = s.num("kerr", cfg.kerr.kerr);
    cfg.kerr.alpha0 = s.num("alpha0", cfg.kerr.alpha0);
    cfg.kerr.bits = s.integer("bits", cfg.kerr.bits);
    const std::string drive = s.str("drive", "");
    if (!drive.empty()) cfg.kerr_drive = parse_drive(drive);
    s.finish();
  } else if (cfg.model_kind == "cat") {
    Section s(raw, "cat");
    cfg.cat.g2 = s.positive("g2", cfg.cat.g2);
    cfg.cat.kappa_b = s.positive("kappa_b", cfg.cat.kappa_b);
    cfg.cat.kappa_a = s.num("kappa_a", cfg.cat.kappa_a);
    cfg.cat.kappa_phi = s.num("kappa_phi", cfg.cat.kappa_phi);
    cfg.cat.epsilon_d = s.positive("epsilon_d", cfg.cat.epsilon_d);
    cfg.cat.epsilon_z = s.num("epsilon_z", cfg.cat.epsilon_z);
    cfg.cat.theta = s.num("theta", cfg.cat.theta);
    cfg.cat.bits_a = s.integer("bits_a", cfg.cat.bits_a);
    cfg.cat.bits_b = s.integer("bits_b", cfg.cat.bits_b);
    if (cfg.cat.kappa_a < 0 || cfg.cat.kappa_phi < 0)
      throw ConfigError(filename + ": [cat] rates must not be negative");
    s.finish();
  } else {
    Section s(raw, "transmon");
    cfg.transmon.ec = s.positive("ec", cfg.transmon.ec);
    cfg.transmon.ej_over_ec = s.positive("ej_over_ec", cfg.transmon.ej_over_ec);
    cfg.transmon.omega_r = s.positive("omega_r", cfg.transmon.omega_r);
    cfg.transmon.g = s.num("g", cfg.transmon.g);
    cfg.transmon.kappa = s.positive("kappa", cfg.transmon.kappa);
    cfg.transmon.epsilon_d = s.num("epsilon_d", cfg.transmon.epsilon_d);
    cfg.transmon.omega_d = s.num("omega_d", cfg.transmon.omega_d);
    cfg.transmon.charge_cutoff = static_cast<int>(s.integer("charge_cutoff", 500));
    cfg.transmon.bits_t = s.integer("bits_t", cfg.transmon.bits_t);
    cfg.transmon.bits_c = s.integer("bits_c", cfg.transmon.bits_c);
    cfg.transmon_initial = s.integer("initial", 0);
    s.finish();
  }

  Section integ(raw, "integrator");
  cfg.integrator = integ.str("method", cfg.model_kind == "kerr" ? "rk4" : "order2");
  const std::set<std::string> closed{"rk4", "cn", "tdvp_plain", "tdvp_magnus"};
  const std::set<std::string> open{"order1", "order2"};
  if (cfg.model_kind == "kerr" ? !closed.count(cfg.integrator) : !open.count(cfg.integrator))
    throw ConfigError(filename + ": [integrator] method '" + cfg.integrator +
                      "' not available for model " + cfg.model_kind);
  cfg.h_t = integ.positive("h_t", cfg.h_t);
  cfg.t_final = integ.positive("t_final", cfg.t_final);
  integ.finish();

  Section bud(raw, "budget");
  const double tol = bud.positive("tol", 1e-8);
  cfg.budget = purified::CompressionBudget::uniform(tol);
  cfg.budget.tol_q = bud.positive("tol_q", tol);
  cfg.budget.tol_e = bud.positive("tol_e", tol);
  cfg.budget.tol_mu = bud.positive("tol_mu", tol);
  cfg.budget.max_q = bud.integer("max_q", 0);
  cfg.budget.max_e = bud.integer("max_e", 0);
  cfg.budget.max_mu = bud.integer("max_mu", 0);
  bud.finish();

  Section outp(raw, "output");
  cfg.out_dir = outp.str("directory", ".");
  cfg.observables = parse_names(outp.str("observables", ""));
  cfg.snapshot_times = parse_list(outp.str("snapshots", ""));
  cfg.seed = outp.integer("seed", cfg.seed);
  outp.finish();

  // reject unknown sections
  for (const auto& [section, kv] : raw.data) {
    static const std::set<std::string> known{"model",   "kerr",   "cat",   "transmon",
                                             "integrator", "budget", "output"};
    if (!known.count(section)) {
      const int line = kv.empty() ? 0 : kv.begin()->second.second;
      throw ConfigError(filename + ":" + std::to_string(line) + ": unknown section [" + section +
                        "]");
    }
  }

  // resolved snapshot for the manifest
  auto put = [&](const std::string& k, double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    cfg.resolved[k] = os.str();
  };
  cfg.resolved["model.kind"] = cfg.model_kind;
  cfg.resolved["integrator.method"] = cfg.integrator;
  put("integrator.h_t", cfg.h_t);
  put("integrator.t_final", cfg.t_final);
  put("budget.tol_q", cfg.budget.tol_q);
  put("budget.tol_e", cfg.budget.tol_e);
  put("budget.tol_mu", cfg.budget.tol_mu);
  put("budget.max_q", double(cfg.budget.max_q));
  put("budget.max_e", double(cfg.budget.max_e));
  put("budget.max_mu", double(cfg.budget.max_mu));
  put("output.seed", double(cfg.seed));
  cfg.resolved["output.directory"] = cfg.out_dir;
  if (cfg.model_kind == "kerr") {
    put("kerr.omega0", cfg.kerr.omega0);
    put("kerr.kerr", cfg.kerr.kerr);
    put("kerr.alpha0", cfg.kerr.alpha0);
    put("kerr.bits", double(cfg.kerr.bits));
    cfg.resolved["kerr.drive"] = cfg.kerr_drive.empty() ? "default-two-tone"
                                                        : cfg.kerr_drive.source;
  } else if (cfg.model_kind == "cat") {
    put("cat.g2", cfg.cat.g2);
    put("cat.kappa_b", cfg.cat.kappa_b);
    put("cat.kappa_a", cfg.cat.kappa_a);
    put("cat.kappa_phi", cfg.cat.kappa_phi);
    put("cat.epsilon_d", cfg.cat.epsilon_d);
    put("cat.epsilon_z", cfg.cat.epsilon_z);
    put("cat.theta", cfg.cat.theta);
    put("cat.bits_a", double(cfg.cat.bits_a));
    put("cat.bits_b", double(cfg.cat.bits_b));
  } else {
    put("transmon.ec", cfg.transmon.ec);
    put("transmon.ej_over_ec", cfg.transmon.ej_over_ec);
    put("transmon.omega_r", cfg.transmon.omega_r);
    put("transmon.g", cfg.transmon.g);
    put("transmon.kappa", cfg.transmon.kappa);
    put("transmon.epsilon_d", cfg.transmon.epsilon_d);
    put("transmon.omega_d", cfg.transmon.omega_d);
    put("transmon.charge_cutoff", double(cfg.transmon.charge_cutoff));
    put("transmon.bits_t", double(cfg.transmon.bits_t));
    put("transmon.bits_c", double(cfg.transmon.bits_c));
    put("transmon.initial", double(cfg.transmon_initial));
  }
  return cfg;
}

SimulationConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return parse_config_text(os.str(), path);
}

}  // namespace qtt::config
