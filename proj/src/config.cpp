// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace actwarp {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool consumed = false;
};

struct Sections {
  std::map<std::string, std::map<std::string, Entry>> data;
  std::string label;

  [[noreturn]] void err(const std::string& msg, int line = 0) const {
    std::string where = label;
    if (line > 0) where += ":" + std::to_string(line);
    fail(ErrorKind::Validation, where + ": " + msg);
  }

  const Entry* find(const std::string& sec, const std::string& key) const {
    auto s = data.find(sec);
    if (s == data.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
  }
  Entry* find_mut(const std::string& sec, const std::string& key) {
    return const_cast<Entry*>(find(sec, key));
  }

  std::string require(const std::string& sec, const std::string& key) {
    Entry* e = find_mut(sec, key);
    if (!e) err("missing required key '" + key + "' in section [" + sec + "]");
    e->consumed = true;
    return e->value;
  }
  std::string get_or(const std::string& sec, const std::string& key,
                     const std::string& fallback) {
    Entry* e = find_mut(sec, key);
    if (!e) return fallback;
    e->consumed = true;
    return e->value;
  }
  bool has(const std::string& sec, const std::string& key) const {
    return find(sec, key) != nullptr;
  }
  int line_of(const std::string& sec, const std::string& key) const {
    const Entry* e = find(sec, key);
    return e ? e->line : 0;
  }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Sections split_sections(const std::string& text, const std::string& label) {
  Sections out;
  out.label = label;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') out.err("unterminated section header", lineno);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) out.err("expected 'key = value'", lineno);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) out.err("empty key", lineno);
    if (section.empty()) out.err("key outside any [section]", lineno);
    if (out.data[section].count(key)) out.err("duplicate key '" + key + "'", lineno);
    out.data[section][key] = Entry{value, lineno, false};
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

double parse_double(Sections& cfg, const std::string& sec, const std::string& key,
                    const std::string& raw) {
  try {
    size_t used = 0;
    double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    cfg.err("key '" + key + "' is not a number: '" + raw + "'", cfg.line_of(sec, key));
  }
}

int parse_int(Sections& cfg, const std::string& sec, const std::string& key,
              const std::string& raw) {
  double v = parse_double(cfg, sec, key, raw);
  if (v != std::floor(v)) cfg.err("key '" + key + "' must be an integer", cfg.line_of(sec, key));
  return static_cast<int>(v);
}

std::vector<int> parse_int_list(Sections& cfg, const std::string& sec, const std::string& key,
                                const std::string& raw) {
  std::vector<int> out;
  for (const std::string& tok : split_list(raw, ','))
    out.push_back(parse_int(cfg, sec, key, tok));
  return out;
}

std::vector<Expr> parse_expr_list(Sections& cfg, const std::string& sec,
                                  const std::string& key, const std::string& raw, int dim) {
  std::vector<Expr> out;
  for (const std::string& tok : split_list(raw, ',')) {
    try {
      out.push_back(parse_expr(tok, dim));
    } catch (const Error& e) {
      cfg.err("key '" + key + "': " + e.what(), cfg.line_of(sec, key));
    }
  }
  return out;
}

std::vector<std::vector<Expr>> parse_expr_vectors(Sections& cfg, const std::string& sec,
                                                  const std::string& key,
                                                  const std::string& raw, int dim,
                                                  int expect_len) {
  std::vector<std::vector<Expr>> out;
  for (const std::string& group : split_list(raw, ';')) {
    auto vec = parse_expr_list(cfg, sec, key, group, dim);
    if (static_cast<int>(vec.size()) != expect_len)
      cfg.err("key '" + key + "': each vector needs " + std::to_string(expect_len) +
                  " components",
              cfg.line_of(sec, key));
    out.push_back(std::move(vec));
  }
  return out;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& label) {
  Sections cfg = split_sections(text, label);
  ScenarioConfig out;
  out.label = label;
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(text)));
    out.hash = buf;
  }
  Scenario& sc = out.scenario;
  sc.id = cfg.get_or("scenario", "id", "unnamed");

  // --- ambient ---
  std::string model = cfg.get_or("ambient", "model", "");
  if (model.empty()) cfg.err("missing [ambient] model");
  if (model == "custom") {
    int dim = parse_int(cfg, "ambient", "dim", cfg.require("ambient", "dim"));
    if (dim < 3 || dim % 2 == 0 || dim > kMaxDim)
      cfg.err("custom ambient dim must be odd, >= 3 and <= 16",
              cfg.line_of("ambient", "dim"));
    AlmostContactStructure s;
    s.name = "custom";
    s.dim = dim;
    auto metric_rows =
        parse_expr_vectors(cfg, "ambient", "metric", cfg.require("ambient", "metric"), dim, dim);
    if (static_cast<int>(metric_rows.size()) != dim)
      cfg.err("custom metric needs dim rows", cfg.line_of("ambient", "metric"));
    std::vector<Expr> full;
    for (auto& row : metric_rows)
      for (auto& e : row) full.push_back(e);
    s.metric = MetricField::from_full(dim, full);
    auto phi_rows =
        parse_expr_vectors(cfg, "ambient", "phi", cfg.require("ambient", "phi"), dim, dim);
    if (static_cast<int>(phi_rows.size()) != dim)
      cfg.err("custom phi needs dim rows", cfg.line_of("ambient", "phi"));
    for (auto& row : phi_rows)
      for (auto& e : row) s.phi.push_back(e);
    s.xi = parse_expr_list(cfg, "ambient", "xi", cfg.require("ambient", "xi"), dim);
    s.eta = parse_expr_list(cfg, "ambient", "eta", cfg.require("ambient", "eta"), dim);
    if (static_cast<int>(s.xi.size()) != dim || static_cast<int>(s.eta.size()) != dim)
      cfg.err("custom xi/eta need dim components");
    s.box.assign(dim, {-1.0, 1.0});
    sc.ambient = std::move(s);
  } else {
    int m = parse_int(cfg, "ambient", "m", cfg.get_or("ambient", "m", "2"));
    try {
      sc.ambient = builtin_ambient(model, m);
    } catch (const Error& e) {
      cfg.err(e.what(), cfg.line_of("ambient", "model"));
    }
  }

  // --- immersion ---
  std::string builtin = cfg.get_or("immersion", "builtin", "");
  double theta = 0.0;
  bool has_theta = cfg.has("immersion", "theta");
  if (has_theta) {
    theta = parse_double(cfg, "immersion", "theta", cfg.require("immersion", "theta"));
    if (!(theta >= 0.0 && theta <= std::acos(0.0) + 1e-12))
      cfg.err("theta outside [0, pi/2]", cfg.line_of("immersion", "theta"));
  }
  if (!builtin.empty()) {
    if (builtin != "semi_slant_warp")
      cfg.err("unknown immersion builtin '" + builtin + "'",
              cfg.line_of("immersion", "builtin"));
    if (!has_theta) cfg.err("builtin semi_slant_warp requires theta");
    if (sc.ambient.name != "kenmotsu")
      cfg.err("builtin semi_slant_warp expects the kenmotsu ambient model");
    out.epsilon =
        parse_double(cfg, "immersion", "epsilon", cfg.get_or("immersion", "epsilon", "0"));
    int m = (sc.ambient.dim - 1) / 2;
    Scenario built = make_semi_slant_scenario(m, theta, out.epsilon);
    sc.immersion = built.immersion;
    sc.has_factors = built.has_factors;
    sc.nt_indices = built.nt_indices;
    sc.ntheta_indices = built.ntheta_indices;
    sc.warping = built.warping;
    sc.has_warping = true;
    sc.theta = theta;
    sc.has_theta = true;
    sc.has_declared_ab = built.has_declared_ab;
    sc.alpha = built.alpha;
    sc.beta = built.beta;
    sc.approximate = built.approximate;
    sc.box = built.box;
    out.immersion_builtin = builtin;
  } else {
    int dim = parse_int(cfg, "immersion", "dim", cfg.require("immersion", "dim"));
    if (dim < 1 || dim > kMaxDim)
      cfg.err("immersion dim outside 1..16", cfg.line_of("immersion", "dim"));
    auto map =
        parse_expr_list(cfg, "immersion", "map", cfg.require("immersion", "map"), dim);
    if (static_cast<int>(map.size()) != sc.ambient.dim)
      cfg.err("immersion map needs one expression per ambient coordinate (" +
                  std::to_string(sc.ambient.dim) + ")",
              cfg.line_of("immersion", "map"));
    sc.immersion.n = dim;
    sc.immersion.ambient_dim = sc.ambient.dim;
    sc.immersion.map = std::move(map);
    sc.theta = theta;
    sc.has_theta = has_theta;
    sc.box.assign(dim, {-1.0, 1.0});
  }
  int n = sc.immersion.n;

  // --- splits (optional; builtins may already carry them) ---
  if (cfg.has("splits", "d") || cfg.has("splits", "dtheta") || cfg.has("splits", "xi")) {
    SplitSpec sp;
    if (cfg.has("splits", "d"))
      sp.d_basis = parse_expr_vectors(cfg, "splits", "d", cfg.require("splits", "d"), n, n);
    if (cfg.has("splits", "dtheta"))
      sp.dtheta_basis =
          parse_expr_vectors(cfg, "splits", "dtheta", cfg.require("splits", "dtheta"), n, n);
    if (cfg.has("splits", "xi"))
      sp.xi_dir = parse_expr_list(cfg, "splits", "xi", cfg.require("splits", "xi"), n);
    sc.immersion.splits = std::move(sp);
  }

  // --- factors ---
  if (cfg.has("factors", "nt_indices") || cfg.has("factors", "ntheta_indices")) {
    sc.nt_indices =
        parse_int_list(cfg, "factors", "nt_indices", cfg.require("factors", "nt_indices"));
    sc.ntheta_indices = parse_int_list(cfg, "factors", "ntheta_indices",
                                       cfg.require("factors", "ntheta_indices"));
    sc.has_factors = true;
    for (int i : sc.nt_indices)
      if (i < 0 || i >= n) cfg.err("nt_indices out of range", cfg.line_of("factors", "nt_indices"));
    for (int i : sc.ntheta_indices)
      if (i < 0 || i >= n)
        cfg.err("ntheta_indices out of range", cfg.line_of("factors", "ntheta_indices"));
  }
  if (cfg.has("factors", "warping")) {
    std::string w = cfg.require("factors", "warping");
    try {
      sc.warping = parse_expr(w, n);
    } catch (const Error& e) {
      cfg.err(e.what(), cfg.line_of("factors", "warping"));
    }
    sc.has_warping = true;
  }

  // --- declared type constants ---
  if (cfg.has("type", "alpha") || cfg.has("type", "beta")) {
    sc.alpha = parse_double(cfg, "type", "alpha", cfg.get_or("type", "alpha", "0"));
    sc.beta = parse_double(cfg, "type", "beta", cfg.get_or("type", "beta", "0"));
    sc.has_declared_ab = true;
  }

  // --- sampling ---
  if (!cfg.has("sampling", "seed")) cfg.err("missing mandatory [sampling] seed");
  {
    std::string raw = cfg.require("sampling", "seed");
    try {
      size_t used = 0;
      sc.sampling.seed = std::stoull(raw, &used);
      if (used != raw.size()) throw std::invalid_argument("trailing");
    } catch (...) {
      cfg.err("seed must be an unsigned integer", cfg.line_of("sampling", "seed"));
    }
  }
  sc.sampling.count =
      parse_int(cfg, "sampling", "count", cfg.get_or("sampling", "count", "100"));
  if (sc.sampling.count < 1) cfg.err("sampling count must be positive");
  if (cfg.has("sampling", "box")) {
    auto parts = split_list(cfg.require("sampling", "box"), ',');
    if (static_cast<int>(parts.size()) != n)
      cfg.err("box needs one lo:hi range per submanifold coordinate",
              cfg.line_of("sampling", "box"));
    sc.box.clear();
    for (const std::string& part : parts) {
      auto range = split_list(part, ':');
      if (range.size() != 2) cfg.err("box entries look like lo:hi");
      double lo = parse_double(cfg, "sampling", "box", range[0]);
      double hi = parse_double(cfg, "sampling", "box", range[1]);
      if (!(lo < hi)) cfg.err("box range is empty", cfg.line_of("sampling", "box"));
      sc.box.push_back({lo, hi});
    }
  }

  sc.tol_identity = parse_double(cfg, "tolerances", "identity",
                                 cfg.get_or("tolerances", "identity", "1e-8"));
  sc.tol_inequality = parse_double(cfg, "tolerances", "inequality",
                                   cfg.get_or("tolerances", "inequality", "1e-7"));

  for (const std::string& name : split_list(cfg.get_or("checks", "run", "all"), ','))
    if (!name.empty()) sc.checks.push_back(name);

  return out;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace actwarp
