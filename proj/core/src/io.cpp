#include "pmelab/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pmelab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::vector<double> split_row(const std::string& line) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    size_t pos = 0;
    double v = std::stod(cell, &pos);
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    if (pos != cell.size()) throw std::invalid_argument("trailing junk");
    row.push_back(v);
  }
  return row;
}

// Distinct coordinates along one axis, verified to be uniformly spaced.
std::vector<double> axis_levels(std::vector<double> vals, const char* axis) {
  std::sort(vals.begin(), vals.end());
  std::vector<double> levels;
  for (double v : vals)
    if (levels.empty() || v > levels.back() + 1e-12 * std::max(1.0, std::abs(v)))
      levels.push_back(v);
  if (levels.size() >= 3) {
    double h = levels[1] - levels[0];
    for (size_t i = 2; i < levels.size(); ++i)
      if (std::abs(levels[i] - levels[i - 1] - h) > 1e-9 * std::max(1.0, h))
        throw std::invalid_argument(std::string("read_slice_csv: ") + axis +
                                    " coordinates are not uniformly spaced");
  }
  return levels;
}

nlohmann::ordered_json vec_json(const Vec2& v, int dim) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  j.push_back(v[0]);
  if (dim == 2) j.push_back(v[1]);
  return j;
}

}  // namespace

void write_slice_csv(const std::string& path, const GridFunction& u, int k) {
  const SpaceTimeGrid& g = *u.grid;
  if (k < 0 || k >= g.time_count())
    throw std::invalid_argument("write_slice_csv: bad time index");
  std::ofstream out = open_out(path);
  out << (g.dim() == 1 ? "t,x1,u\n" : "t,x1,x2,u\n");
  const double t = g.time(k);
  for (int i = 0; i < g.spatial_count(); ++i) {
    Vec2 x = g.position(i);
    out << fmt(t) << ',' << fmt(x[0]);
    if (g.dim() == 2) out << ',' << fmt(x[1]);
    out << ',' << fmt(u.at(i, k)) << '\n';
  }
}

GridFunction read_slice_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      rows.push_back(split_row(line));
    } catch (const std::exception&) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw std::invalid_argument("read_slice_csv: malformed row: " + line);
    }
    first = false;
  }
  if (rows.empty()) throw std::invalid_argument("read_slice_csv: no data rows");
  const size_t width = rows.front().size();
  if (width != 3 && width != 4)
    throw std::invalid_argument("read_slice_csv: expected 3 or 4 columns");
  const int dim = width == 3 ? 1 : 2;
  for (const auto& r : rows)
    if (r.size() != width)
      throw std::invalid_argument("read_slice_csv: ragged rows");

  const double t = rows.front()[0];
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (std::abs(r[0] - t) > 1e-12 * std::max(1.0, std::abs(t)))
      throw std::invalid_argument("read_slice_csv: mixed time values");
    xs.push_back(r[1]);
    if (dim == 2) ys.push_back(r[2]);
  }
  std::vector<double> lx = axis_levels(xs, "x1");
  std::vector<double> ly =
      dim == 2 ? axis_levels(ys, "x2") : std::vector<double>{0.0};
  const int nx = static_cast<int>(lx.size());
  const int ny = static_cast<int>(ly.size());
  if (rows.size() != static_cast<size_t>(nx) * ny)
    throw std::invalid_argument("read_slice_csv: lattice is incomplete");
  double h = nx >= 2 ? lx[1] - lx[0] : 0.0;
  if (dim == 2 && ny >= 2) {
    double hy = ly[1] - ly[0];
    if (h == 0.0) h = hy;
    if (std::abs(h - hy) > 1e-9 * std::max(1.0, h))
      throw std::invalid_argument("read_slice_csv: anisotropic spacing");
  }
  if (!(h > 0.0)) throw std::invalid_argument("read_slice_csv: degenerate lattice");

  auto grid = std::make_shared<SpaceTimeGrid>(
      dim, Vec2{lx.front(), ly.front()}, std::array<int, 2>{nx, ny}, h, t,
      std::vector<double>{});
  GridFunction u(grid);
  std::vector<char> seen(static_cast<size_t>(nx) * ny, 0);
  auto level_index = [](const std::vector<double>& levels, double v) {
    auto it = std::lower_bound(levels.begin(), levels.end(),
                               v - 1e-9 * std::max(1.0, std::abs(v)));
    if (it == levels.end())
      throw std::invalid_argument("read_slice_csv: coordinate off-lattice");
    return static_cast<int>(it - levels.begin());
  };
  for (const auto& r : rows) {
    int i = level_index(lx, r[1]);
    int j = dim == 2 ? level_index(ly, r[2]) : 0;
    int flat = grid->flat_index(i, j);
    if (seen[flat])
      throw std::invalid_argument("read_slice_csv: duplicate lattice node");
    seen[flat] = 1;
    u.at(flat, 0) = r.back();
  }
  u.check_finite("read_slice_csv");
  return u;
}

void write_contact_csv(const std::string& path, const ContactSet& contacts,
                       int dim) {
  std::ofstream out = open_out(path);
  out << (dim == 1 ? "yx1,ys,cx1,ct,u_at_contact\n"
                   : "yx1,yx2,ys,cx1,cx2,ct,u_at_contact\n");
  for (const auto& e : contacts.entries) {
    out << fmt(e.vertex_y[0]) << ',';
    if (dim == 2) out << fmt(e.vertex_y[1]) << ',';
    out << fmt(e.vertex_s) << ',' << fmt(e.x[0]) << ',';
    if (dim == 2) out << fmt(e.x[1]) << ',';
    out << fmt(e.t) << ',' << fmt(e.u_value) << '\n';
  }
}

nlohmann::ordered_json to_json(const ContactEntry& entry, int dim) {
  nlohmann::ordered_json j;
  j["x"] = vec_json(entry.x, dim);
  j["t"] = entry.t;
  j["u"] = entry.u_value;
  j["vertex_y"] = vec_json(entry.vertex_y, dim);
  j["vertex_s"] = entry.vertex_s;
  return j;
}

nlohmann::ordered_json to_json(const AbpReport& report, int dim) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  j["alpha"] = report.alpha;
  j["m"] = report.m;
  j["M_bound"] = report.M_bound;
  j["eta_fitted"] = report.eta_fitted;
  nlohmann::ordered_json contacts = nlohmann::ordered_json::array();
  for (const auto& e : report.contacts) contacts.push_back(to_json(e, dim));
  j["contact"] = contacts;
  j["elliptic_regime"] = report.elliptic_regime;
  j["sublevel_fraction"] = report.sublevel_fraction;
  j["passed"] = report.passed;
  return j;
}

nlohmann::ordered_json to_json(const LocalizationReport& report, int dim) {
  nlohmann::ordered_json j;
  j["hypothesis_met"] = report.hypothesis_met;
  j["all_localized"] = report.all_localized;
  j["eps_c"] = report.contacts.eps_c;
  nlohmann::ordered_json contacts = nlohmann::ordered_json::array();
  for (const auto& e : report.contacts.entries)
    contacts.push_back(to_json(e, dim));
  j["contacts"] = contacts;
  return j;
}

nlohmann::ordered_json to_json(const SelectionResult& result, int dim) {
  nlohmann::ordered_json j;
  j["alternative"] = result.alternative == Alternative::UnionBig
                         ? "UNION_BIG"
                         : "ZERO_SET_BIG";
  j["union_measure"] = result.union_measure;
  j["zero_set_measure"] = result.zero_set_measure;
  nlohmann::ordered_json cubes = nlohmann::ordered_json::array();
  for (const auto& rec : result.visited) {
    nlohmann::ordered_json c;
    c["k"] = rec.cube.k;
    c["center"] = vec_json(rec.cube.center, dim);
    c["t_i"] = rec.cube.t_i;
    c["t_f"] = rec.cube.t_f;
    c["selected_reason"] = rec.status;
    c["side"] = rec.cube.side;
    c["max_contact_value"] = rec.max_contact_value;
    c["threshold"] = rec.threshold;
    cubes.push_back(c);
  }
  j["cubes"] = cubes;
  j["shift"] = result.shift;
  j["zero_slice_index"] = result.zero_slice_index;
  return j;
}

nlohmann::ordered_json to_json(const FixedTimeReport& report, int dim) {
  nlohmann::ordered_json j;
  j["alternative"] = report.alternative == FixedTimeAlternative::ZeroSet
                         ? "zero_set"
                         : "density";
  j["measure"] = report.measure;
  j["eta_theta"] = report.eta_theta;
  j["cube_fractions"] = report.cube_fractions;
  j["kept_balls"] = report.kept_balls;
  j["selection"] = to_json(report.selection, dim);
  return j;
}

nlohmann::ordered_json to_json(const IntegrateReport& report) {
  nlohmann::ordered_json j;
  j["bounded_set_measure"] = report.bounded_set_measure;
  j["region_measure"] = report.region_measure;
  j["ratio"] = report.ratio;
  j["M"] = report.M;
  j["eta_theta"] = report.eta_theta;
  j["shifts"] = report.shifts;
  j["zero_shift_weight"] = report.zero_shift_weight;
  j["zero_route"] = report.zero_route;
  return j;
}

nlohmann::ordered_json to_json(const ImprovementReport& report) {
  nlohmann::ordered_json j;
  j["hypothesis_met"] = report.hypothesis_met;
  j["fraction"] = report.fraction;
  j["theta_hat"] = report.theta_hat;
  j["mu"] = report.mu;
  return j;
}

nlohmann::ordered_json to_json(const HoelderReport& report, int dim) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json center = vec_json(report.center, dim);
  center.push_back(report.t0);  // center is the space-time anchor (x, t0)
  j["center"] = center;
  j["scales"] = report.scales;
  j["oscillations"] = report.oscillations;
  j["alpha_hat"] = report.fitted_alpha;
  j["residual"] = report.fit_residual;
  return j;
}

void write_json(const std::string& path, const nlohmann::ordered_json& doc) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
}

}  // namespace pmelab
