#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "CLI11.hpp"
#include "pmelab/abp.hpp"
#include "pmelab/dyadic.hpp"
#include "pmelab/errors.hpp"
#include "pmelab/io.hpp"
#include "pmelab/oscillation.hpp"
#include "pmelab/refsol.hpp"
#include "pmelab/scheme.hpp"
#include "pmelab/version.hpp"

namespace pmelab::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "solve",        "front-bench",    "barenblatt-bench", "abp-check",
      "dyadic-select", "time-integrate", "hoelder-fit",      "osc-lemmas"};
  return names;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {  // stod's own message names no input
  }
  throw std::invalid_argument("not a number: '" + s + "'");
}

int parse_int(const std::string& s) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("not an integer: '" + s + "'");
}

std::uint64_t parse_u64(const std::string& s) {
  size_t pos = 0;
  unsigned long long v = std::stoull(s, &pos);
  if (trim(s.substr(pos)).size())
    throw std::invalid_argument("not an unsigned integer: '" + s + "'");
  return v;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& key_table() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"lambda", [](ExperimentConfig& c, const std::string& v) { c.lambda = parse_double(v); }},
      {"Lambda", [](ExperimentConfig& c, const std::string& v) { c.Lambda = parse_double(v); }},
      {"b", [](ExperimentConfig& c, const std::string& v) { c.b = parse_double(v); }},
      {"sign", [](ExperimentConfig& c, const std::string& v) { c.sign = v; }},
      {"dim", [](ExperimentConfig& c, const std::string& v) { c.dim = parse_int(v); }},
      {"nx", [](ExperimentConfig& c, const std::string& v) { c.nx = parse_int(v); }},
      {"domain", [](ExperimentConfig& c, const std::string& v) { c.domain = parse_double(v); }},
      {"cfl", [](ExperimentConfig& c, const std::string& v) { c.cfl = parse_double(v); }},
      {"max_dt", [](ExperimentConfig& c, const std::string& v) { c.max_dt = parse_double(v); }},
      {"t_final", [](ExperimentConfig& c, const std::string& v) { c.t_final = parse_double(v); }},
      {"ic", [](ExperimentConfig& c, const std::string& v) { c.ic = v; }},
      {"k_max", [](ExperimentConfig& c, const std::string& v) { c.k_max = parse_int(v); }},
      {"shift", [](ExperimentConfig& c, const std::string& v) { c.shift = parse_double(v); }},
      {"n_shifts", [](ExperimentConfig& c, const std::string& v) { c.n_shifts = parse_int(v); }},
      {"mu", [](ExperimentConfig& c, const std::string& v) { c.mu = parse_double(v); }},
      {"t0", [](ExperimentConfig& c, const std::string& v) { c.t0 = parse_double(v); }},
      {"center_x", [](ExperimentConfig& c, const std::string& v) { c.center_x = parse_double(v); }},
      {"center_y", [](ExperimentConfig& c, const std::string& v) { c.center_y = parse_double(v); }},
      {"snapshots", [](ExperimentConfig& c, const std::string& v) { c.snapshots = v; }},
      {"out", [](ExperimentConfig& c, const std::string& v) { c.out = v; }},
      {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = parse_u64(v); }},
  };
  return table;
}

std::string valid_keys_message() {
  std::string msg = "valid keys:";
  for (const auto& [key, setter] : key_table()) msg += " " + key;
  return msg;
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("config: " + what);
  };
  if (std::find(command_names().begin(), command_names().end(), cfg.command) ==
      command_names().end())
    fail("unknown command '" + cfg.command + "'");
  if (cfg.dim != 1 && cfg.dim != 2) fail("dim must be 1 or 2");
  if (cfg.nx < 17 || ((cfg.nx - 1) & (cfg.nx - 2)) != 0)
    fail("nx must be a power of two plus one, at least 17");
  if (!(cfg.domain > 0.0)) fail("domain must be positive");
  if (!(cfg.lambda > 0.0) || cfg.Lambda < cfg.lambda)
    fail("need 0 < lambda <= Lambda");
  if (cfg.b < cfg.lambda || cfg.b > cfg.Lambda)
    fail("b must lie in [lambda, Lambda]");
  if (cfg.sign != "minus" && cfg.sign != "plus")
    fail("sign must be 'minus' or 'plus'");
  if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0) fail("cfl must lie in (0, 1]");
  if (cfg.max_dt < 0.0) fail("max_dt must be >= 0");
  if (cfg.k_max < 0) fail("k_max must be >= 0");
  if (cfg.n_shifts < 1) fail("n_shifts must be >= 1");
  if (cfg.shift < 0.0 || cfg.shift > 0.5) fail("shift must lie in [0, 1/2]");
  if (!(cfg.mu > 0.0) || cfg.mu >= 1.0) fail("mu must lie in (0, 1)");
  if (!std::isfinite(cfg.t_final)) fail("t_final must be finite");
}

std::vector<double> parse_snapshots(const std::string& spec) {
  std::vector<double> times;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    times.push_back(parse_double(item));
  }
  return times;
}

ordered_json config_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["command"] = cfg.command;
  j["lambda"] = cfg.lambda;
  j["Lambda"] = cfg.Lambda;
  j["b"] = cfg.b;
  j["sign"] = cfg.sign;
  j["dim"] = cfg.dim;
  j["nx"] = cfg.nx;
  j["domain"] = cfg.domain;
  j["cfl"] = cfg.cfl;
  j["max_dt"] = cfg.max_dt;
  j["t_final"] = cfg.t_final;
  j["ic"] = cfg.ic;
  j["k_max"] = cfg.k_max;
  j["shift"] = cfg.shift;
  j["n_shifts"] = cfg.n_shifts;
  j["mu"] = cfg.mu;
  j["t0"] = cfg.t0;
  j["center_x"] = cfg.center_x;
  j["center_y"] = cfg.center_y;
  j["snapshots"] = cfg.snapshots;
  j["out"] = cfg.out;
  j["seed"] = cfg.seed;
  return j;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out) / name).string();
}

void write_report(const ExperimentConfig& cfg, const ordered_json& results) {
  ordered_json j;
  j["version"] = kVersion;
  j["command"] = cfg.command;
  j["config"] = config_json(cfg);
  j["results"] = results;
  write_json(out_path(cfg, "report.json"), j);
}

void write_meta(const ExperimentConfig& cfg, const SpaceTimeGrid& g,
                double wall_seconds) {
  ordered_json j;
  j["lambda"] = cfg.lambda;
  j["Lambda"] = cfg.Lambda;
  j["b"] = cfg.b;
  j["sign"] = cfg.sign;
  j["h"] = g.h();
  j["cfl_safety"] = cfg.cfl;
  ordered_json dims = ordered_json::array();
  dims.push_back(g.nodes(0));
  if (g.dim() == 2) dims.push_back(g.nodes(1));
  dims.push_back(g.time_count());
  j["dims"] = dims;
  j["steps"] = g.time_count() - 1;
  j["wall_time_seconds"] = wall_seconds;
  write_json(out_path(cfg, "meta.json"), j);
}

GridPtr make_slice_grid(const ExperimentConfig& cfg, double t_start) {
  double h = 2.0 * cfg.domain / (cfg.nx - 1);
  Vec2 origin{-cfg.domain, cfg.dim == 2 ? -cfg.domain : 0.0};
  std::array<int, 2> nodes{cfg.nx, cfg.dim == 2 ? cfg.nx : 1};
  return std::make_shared<SpaceTimeGrid>(cfg.dim, origin, nodes, h, t_start,
                                         std::vector<double>{});
}

struct Prepared {
  GridFunction u0;
  SolverConfig scfg;
  double t_start = 0.0;
};

// Builds the initial slice and solver configuration from the ic spec.
// enforce_start: the command dictates the start time (file slices must
// match). contact_alpha > 0 additionally caps dt so a sliding paraboloid of
// that time opening rises at most ~2 eps_c per step (first-crossing
// resolution).
Prepared prepare(const ExperimentConfig& cfg, double t_start,
                 bool enforce_start, double contact_alpha) {
  Prepared prep;
  prep.t_start = t_start;
  const std::string& ic = cfg.ic;
  BoundaryFn boundary;
  if (ic == "front") {
    FrontSolution front = make_front(cfg.dim, {1.0, 0.0}, cfg.b);
    boundary = [front](const Vec2& x, double t) { return front.value(x, t); };
    prep.u0 = sample(boundary, make_slice_grid(cfg, t_start));
  } else if (ic == "barenblatt") {
    if (!(t_start > 0.0))
      throw std::invalid_argument(
          "ic 'barenblatt' needs a positive start time (start is " +
          std::to_string(t_start) + ")");
    BarenblattPressure p(cfg.dim, 1.0);
    boundary = [p](const Vec2& x, double t) { return p.value(x, t); };
    prep.u0 = sample(boundary, make_slice_grid(cfg, t_start));
  } else if (ic.rfind("constant:", 0) == 0) {
    double c = parse_double(ic.substr(9));
    boundary = [c](const Vec2&, double) { return c; };
    prep.u0 = GridFunction(make_slice_grid(cfg, t_start), c);
  } else if (ic.rfind("file:", 0) == 0) {
    prep.u0 = read_slice_csv(ic.substr(5));
    double file_t = prep.u0.grid->t_start();
    if (enforce_start && std::abs(file_t - t_start) > 1e-9)
      throw std::invalid_argument(
          "initial slice time " + std::to_string(file_t) +
          " does not match the required start " + std::to_string(t_start));
    prep.t_start = file_t;
    boundary = frozen_boundary(prep.u0);
  } else {
    throw std::invalid_argument(
        "unknown ic '" + ic +
        "' (expected front | barenblatt | constant:c | file:PATH)");
  }

  SolverConfig scfg;
  scfg.ell = EllipticityInterval(cfg.lambda, cfg.Lambda);
  scfg.b_coeff = cfg.b;
  scfg.sign = cfg.sign == "minus" ? PucciSign::Minus : PucciSign::Plus;
  scfg.stencil = cfg.dim == 1 ? DirectionStencil::axis(1)
                              : DirectionStencil::standard2d();
  scfg.cfl_safety = cfg.cfl;
  scfg.boundary = boundary;
  scfg.max_dt = cfg.max_dt > 0.0 ? cfg.max_dt
                                 : std::numeric_limits<double>::infinity();
  if (contact_alpha > 0.0) {
    double cap = 2.0 * contact_tolerance(prep.u0.grid->h()) / contact_alpha;
    scfg.max_dt = std::min(scfg.max_dt, cap);
  }
  prep.scfg = scfg;
  return prep;
}

struct Marched {
  Trajectory traj;
  double wall_seconds = 0.0;
};

Marched march(const Prepared& prep, double t_end,
              const std::vector<double>& snapshot_times = {}) {
  if (!(t_end > prep.t_start))
    throw std::invalid_argument("t_final must exceed the start time " +
                                std::to_string(prep.t_start));
  auto clock_start = std::chrono::steady_clock::now();
  Marched m;
  m.traj = solve(prep.u0, prep.scfg, t_end, snapshot_times);
  m.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    clock_start)
          .count();
  return m;
}

void cmd_solve(const ExperimentConfig& cfg) {
  double t_start = cfg.ic == "barenblatt" ? 1.0 : 0.0;
  Prepared prep = prepare(cfg, t_start, false, 0.0);
  std::vector<double> snaps = parse_snapshots(cfg.snapshots);
  if (snaps.empty()) snaps = {cfg.t_final};
  Marched m = march(prep, cfg.t_final, snaps);
  const SpaceTimeGrid& g = *m.traj.u.grid;

  ordered_json files = ordered_json::array();
  for (size_t s = 0; s < m.traj.snapshot_indices.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", s);
    int k = m.traj.snapshot_indices[s];
    write_slice_csv(out_path(cfg, name), m.traj.u, k);
    ordered_json f;
    f["file"] = name;
    f["time_requested"] = m.traj.snapshot_times[s];
    f["time_written"] = g.time(k);
    files.push_back(f);
  }

  ordered_json results;
  results["t_start"] = prep.t_start;
  results["t_end"] = g.t_end();
  results["steps"] = g.time_count() - 1;
  results["max_value"] = m.traj.u.max_value();
  results["min_value"] = m.traj.u.min_value();
  results["snapshots"] = files;
  write_report(cfg, results);
  write_meta(cfg, g, m.wall_seconds);
}

void cmd_front_bench(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  cfg.ic = "front";  // the benchmark is defined against the exact front
  Prepared prep = prepare(cfg, 0.0, true, 0.0);
  Marched m = march(prep, cfg.t_final);
  const SpaceTimeGrid& g = *m.traj.u.grid;
  const int kf = g.time_count() - 1;
  const double t = g.time(kf);
  const double h = g.h();
  FrontSolution front = make_front(cfg.dim, {1.0, 0.0}, cfg.b);
  const double e_norm = std::sqrt(front.e[0] * front.e[0] +
                                  front.e[1] * front.e[1]);

  double max_err = 0.0, away_err = 0.0;
  for (int i = 0; i < g.spatial_count(); ++i) {
    Vec2 x = g.position(i);
    double err = std::abs(m.traj.u.at(i, kf) - front.value(x, t));
    max_err = std::max(max_err, err);
    double signed_dist = (front.e[0] * x[0] + front.e[1] * x[1] + t) / e_norm;
    if (std::abs(signed_dist) > 3.0 * h) away_err = std::max(away_err, err);
  }

  ordered_json results;
  results["h"] = h;
  results["t_end"] = t;
  results["steps"] = g.time_count() - 1;
  results["max_error"] = max_err;
  results["error_away_from_interface"] = away_err;
  if (cfg.dim == 1) {
    double eps = contact_tolerance(h);
    double x_exact = -t / front.e[0];
    double x_num = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.nodes(0); ++i)
      if (m.traj.u.at(i, kf) <= eps) x_num = std::max(x_num, g.x(0, i));
    results["interface_exact"] = x_exact;
    results["interface_numeric"] = x_num;
    results["interface_error"] = std::abs(x_num - x_exact);
  }
  write_report(cfg, results);
  write_meta(cfg, g, m.wall_seconds);
}

struct BarenblattRun {
  double rel_err = 0.0;
  double support_numeric = 0.0;
  double h = 0.0;
  Marched m;
};

BarenblattRun run_barenblatt(const ExperimentConfig& cfg, int nx,
                             double t_end) {
  ExperimentConfig local = cfg;
  local.nx = nx;
  local.ic = "barenblatt";
  Prepared prep = prepare(local, 1.0, true, 0.0);
  BarenblattRun out;
  out.m = march(prep, t_end);
  const SpaceTimeGrid& g = *out.m.traj.u.grid;
  const int kf = g.time_count() - 1;
  BarenblattPressure p(cfg.dim, 1.0);
  const double t = g.time(kf);
  const double peak = p.peak(t);
  const double srad = p.support_radius(t);
  const double eps = contact_tolerance(g.h());
  out.h = g.h();
  for (int i = 0; i < g.spatial_count(); ++i) {
    Vec2 x = g.position(i);
    double r = std::sqrt(x[0] * x[0] + (cfg.dim == 2 ? x[1] * x[1] : 0.0));
    double err = std::abs(out.m.traj.u.at(i, kf) - p.value(x, t));
    if (r <= srad) out.rel_err = std::max(out.rel_err, err / peak);
    if (out.m.traj.u.at(i, kf) > eps)
      out.support_numeric = std::max(out.support_numeric, r);
  }
  return out;
}

void cmd_barenblatt_bench(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  cfg.ic = "barenblatt";
  if (cfg.lambda != 1.0 || cfg.Lambda != 1.0 || cfg.b != 1.0)
    throw std::invalid_argument(
        "barenblatt-bench requires lambda = Lambda = b = 1");
  if (cfg.nx < 33)
    throw std::invalid_argument(
        "barenblatt-bench needs nx >= 33 for the refinement pair");
  // The run starts at t = 1; a t_final at or below the start falls back to
  // the default horizon 2.
  double t_end = cfg.t_final > 1.0 ? cfg.t_final : 2.0;
  int nx_coarse = (cfg.nx - 1) / 2 + 1;
  BarenblattRun coarse = run_barenblatt(cfg, nx_coarse, t_end);
  BarenblattRun fine = run_barenblatt(cfg, cfg.nx, t_end);
  BarenblattPressure p(cfg.dim, 1.0);

  ordered_json results;
  results["h"] = fine.h;
  results["t_end"] = t_end;
  results["error_rel_sup"] = fine.rel_err;
  results["error_rel_sup_coarse"] = coarse.rel_err;
  results["rate"] = std::log2(coarse.rel_err / fine.rel_err);
  results["support_radius_numeric"] = fine.support_numeric;
  results["support_radius_exact"] = p.support_radius(t_end);
  results["peak_exact"] = p.peak(t_end);
  write_report(cfg, results);
  write_meta(cfg, *fine.m.traj.u.grid, coarse.m.wall_seconds + fine.m.wall_seconds);
}

void cmd_abp_check(const ExperimentConfig& cfg) {
  AbpParams params =
      make_params(EllipticityInterval(cfg.lambda, cfg.Lambda), cfg.dim);
  Prepared prep = prepare(cfg, 0.0, true, params.alpha_c);
  double t_end = cfg.t_final > 0.0 ? cfg.t_final : 1.0;
  Marched m = march(prep, t_end);

  LocalizationReport loc = localization_check(m.traj.u, params);
  AbpReport measure = abp_measure_estimate(m.traj.u, params);
  ContactSet contacts;
  contacts.entries = measure.contacts;
  contacts.eps_c = loc.contacts.eps_c;
  write_contact_csv(out_path(cfg, "contacts.csv"), contacts, cfg.dim);

  ordered_json results;
  results["localization"] = to_json(loc, cfg.dim);
  results["measure"] = to_json(measure, cfg.dim);
  write_report(cfg, results);
  write_meta(cfg, *m.traj.u.grid, m.wall_seconds);
}

void cmd_dyadic_select(const ExperimentConfig& cfg) {
  AbpParams params =
      make_params(EllipticityInterval(cfg.lambda, cfg.Lambda), cfg.dim);
  Prepared prep = prepare(cfg, -2.0 * params.tau, true, params.alpha_c);
  Marched m = march(prep, cfg.shift + 1.0);
  SelectionResult sel = select(m.traj.u, params, cfg.k_max, cfg.shift);
  write_report(cfg, to_json(sel, cfg.dim));
  write_meta(cfg, *m.traj.u.grid, m.wall_seconds);
}

void cmd_time_integrate(const ExperimentConfig& cfg) {
  AbpParams params =
      make_params(EllipticityInterval(cfg.lambda, cfg.Lambda), cfg.dim);
  Prepared prep = prepare(cfg, -2.0 * params.tau, true, params.alpha_c);
  Marched m = march(prep, 1.5);
  IntegrateReport rep =
      integrate_in_time(m.traj.u, params, cfg.k_max, cfg.n_shifts);
  write_report(cfg, to_json(rep));
  write_meta(cfg, *m.traj.u.grid, m.wall_seconds);
}

void cmd_hoelder_fit(const ExperimentConfig& cfg) {
  Prepared prep = prepare(cfg, cfg.t0 - 1.0, true, 0.0);
  Marched m = march(prep, cfg.t0);
  HoelderReport rep = oscillation_decay(
      m.traj.u, {cfg.center_x, cfg.center_y}, cfg.t0, 0, cfg.k_max);
  write_report(cfg, to_json(rep, cfg.dim));
  write_meta(cfg, *m.traj.u.grid, m.wall_seconds);
}

void cmd_osc_lemmas(const ExperimentConfig& cfg) {
  Prepared prep = prepare(cfg, -1.0, true, 0.0);
  Marched m = march(prep, 0.0);
  ordered_json results;
  results["from_above"] = to_json(improvement_from_above_check(m.traj.u, cfg.mu));
  results["from_below"] = to_json(improvement_from_below_check(m.traj.u, cfg.mu));
  write_report(cfg, results);
  write_meta(cfg, *m.traj.u.grid, m.wall_seconds);
}

void bind_options(CLI::App& app, ExperimentConfig& cfg,
                  std::string& config_path) {
  app.add_option("command", cfg.command, "one of: solve, front-bench, "
                 "barenblatt-bench, abp-check, dyadic-select, time-integrate, "
                 "hoelder-fit, osc-lemmas")
      ->required();
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--lambda", cfg.lambda, "lower ellipticity constant");
  app.add_option("--Lambda", cfg.Lambda, "upper ellipticity constant");
  app.add_option("--b", cfg.b, "gradient coefficient, in [lambda, Lambda]");
  app.add_option("--sign", cfg.sign, "extremal operator branch: minus | plus");
  app.add_option("--dim", cfg.dim, "spatial dimension, 1 or 2");
  app.add_option("--nx", cfg.nx, "nodes per axis (power of two plus one)");
  app.add_option("--domain", cfg.domain, "half-width of the spatial box");
  app.add_option("--cfl", cfg.cfl, "CFL safety factor in (0, 1]");
  app.add_option("--max-dt", cfg.max_dt, "hard step cap (0 = none)");
  app.add_option("--t-final", cfg.t_final, "final time for solve benches");
  app.add_option("--ic", cfg.ic,
                 "initial condition: front | barenblatt | constant:c | "
                 "file:PATH");
  app.add_option("--k-max", cfg.k_max, "deepest dyadic generation");
  app.add_option("--shift", cfg.shift, "time shift in [0, 1/2]");
  app.add_option("--n-shifts", cfg.n_shifts, "shift count for time-integrate");
  app.add_option("--mu", cfg.mu, "measure-hypothesis fraction in (0, 1)");
  app.add_option("--t0", cfg.t0, "anchor time for hoelder-fit");
  app.add_option("--center-x", cfg.center_x, "anchor x for hoelder-fit");
  app.add_option("--center-y", cfg.center_y, "anchor y for hoelder-fit");
  app.add_option("--snapshots", cfg.snapshots,
                 "comma-separated snapshot times for solve");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--seed", cfg.seed, "seed for generated test families");
}

}  // namespace

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    bool found = false;
    for (const auto& [name, setter] : key_table()) {
      if (name == key) {
        try {
          setter(cfg, value);
        } catch (const std::exception& e) {
          throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                      ": " + e.what());
        }
        found = true;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": unknown config key '" + key + "'; " +
                                  valid_keys_message());
  }
}

ExperimentConfig parse_args(const std::vector<std::string>& args) {
  ExperimentConfig cfg;
  // Apply the config file first so explicit flags override it.
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size())
        throw std::invalid_argument("--config needs a file argument");
      load_config_file(args[i + 1], cfg);
    } else if (args[i].rfind("--config=", 0) == 0) {
      load_config_file(args[i].substr(9), cfg);
    }
  }
  CLI::App app{"experiment runner for degenerate-diffusion measure estimates"};
  std::string config_path;
  bind_options(app, cfg, config_path);
  std::vector<const char*> argv;
  argv.push_back("pmelab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help() << std::flush;
    throw;
  }
  validate(cfg);
  return cfg;
}

int run(const ExperimentConfig& cfg) {
  validate(cfg);
  std::filesystem::create_directories(cfg.out);
  try {
    if (cfg.command == "solve") cmd_solve(cfg);
    else if (cfg.command == "front-bench") cmd_front_bench(cfg);
    else if (cfg.command == "barenblatt-bench") cmd_barenblatt_bench(cfg);
    else if (cfg.command == "abp-check") cmd_abp_check(cfg);
    else if (cfg.command == "dyadic-select") cmd_dyadic_select(cfg);
    else if (cfg.command == "time-integrate") cmd_time_integrate(cfg);
    else if (cfg.command == "hoelder-fit") cmd_hoelder_fit(cfg);
    else if (cfg.command == "osc-lemmas") cmd_osc_lemmas(cfg);
    else throw std::invalid_argument("unknown command " + cfg.command);
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    ExperimentConfig cfg = parse_args(args);
    return run(cfg);
  } catch (const CLI::CallForHelp&) {
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pmelab::cli
