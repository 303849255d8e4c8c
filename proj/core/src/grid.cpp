#include "thinlim/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "thinlim/error.hpp"

namespace thinlim {

Grid::Grid(int dim, Point3 origin, Point3 spacing, Index3 counts)
    : dim_(dim), origin_(origin), spacing_(spacing), counts_(counts) {
  if (dim < 1 || dim > 3) throw ValidationError("grid dimension must be 1, 2 or 3");
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a]))
        throw ValidationError("grid spacing must be positive on every axis");
      if (counts_[a] < 2) throw ValidationError("grid needs at least 2 nodes per axis");
    } else {
      origin_[a] = 0.0;
      spacing_[a] = 1.0;
      counts_[a] = 1;
    }
  }
}

Grid Grid::cube(int dim, double lo, double hi, std::size_t n) {
  return box(dim, {lo, lo, lo}, {hi, hi, hi}, {n, n, n});
}

Grid Grid::box(int dim, Point3 lo, Point3 hi, Index3 counts) {
  Point3 h{1.0, 1.0, 1.0};
  for (int a = 0; a < dim; ++a) {
    if (counts[a] < 2) throw ValidationError("grid needs at least 2 nodes per axis");
    h[a] = (hi[a] - lo[a]) / static_cast<double>(counts[a] - 1);
  }
  return Grid(dim, lo, h, counts);
}

std::size_t Grid::size() const { return counts_[0] * counts_[1] * counts_[2]; }

double Grid::min_spacing() const {
  double h = spacing_[0];
  for (int a = 1; a < dim_; ++a) h = std::min(h, spacing_[a]);
  return h;
}

std::size_t Grid::flat(const Index3& idx) const {
  return (idx[0] * counts_[1] + idx[1]) * counts_[2] + idx[2];
}

Index3 Grid::unflat(std::size_t f) const {
  Index3 idx{};
  idx[2] = f % counts_[2];
  f /= counts_[2];
  idx[1] = f % counts_[1];
  idx[0] = f / counts_[1];
  return idx;
}

Point3 Grid::point(std::size_t f) const {
  const Index3 idx = unflat(f);
  Point3 p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = coord(a, idx[a]);
  return p;
}

Point3 Grid::upper() const {
  Point3 p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = coord(a, counts_[a] - 1);
  return p;
}

Grid Grid::drop_last_axis() const {
  if (dim_ < 2) throw ValidationError("cannot drop an axis from a 1D grid");
  Point3 o = origin_, h = spacing_;
  Index3 c = counts_;
  o[dim_ - 1] = 0.0;
  h[dim_ - 1] = 1.0;
  c[dim_ - 1] = 1;
  return Grid(dim_ - 1, o, h, c);
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ValidationError("grid function length does not match grid size");
  for (double v : values_) {
    if (std::isnan(v)) throw ValidationError("grid function values must not be NaN");
    if (v < 0.0) throw ValidationError("grid function values must be >= 0");
  }
}

GridFunction::GridFunction(Grid grid, double fill)
    : GridFunction(grid, std::vector<double>(grid.size(), fill)) {}

bool GridFunction::any_finite() const {
  return std::any_of(values_.begin(), values_.end(), [](double v) { return !is_inf(v); });
}

double GridFunction::max_finite() const {
  double m = 0.0;
  for (double v : values_)
    if (!is_inf(v)) m = std::max(m, v);
  return m;
}

double GridFunction::min_value() const {
  double m = kInf;
  for (double v : values_) m = ext_min(m, v);
  return m;
}

double GridFunction::interpolate(std::span<const double> x) const {
  const int d = grid_.dim();
  std::array<std::size_t, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  constexpr double kSlack = 1e-12;
  for (int a = 0; a < d; ++a) {
    const double t = (x[a] - grid_.origin()[a]) / grid_.spacing()[a];
    const double last = static_cast<double>(grid_.counts()[a] - 1);
    if (t < -kSlack || t > last + kSlack) return kInf;
    const double tc = std::clamp(t, 0.0, last);
    std::size_t i = static_cast<std::size_t>(std::floor(tc));
    if (i >= grid_.counts()[a] - 1) i = grid_.counts()[a] - 2;
    base[a] = i;
    frac[a] = tc - static_cast<double>(i);
  }
  double acc = 0.0;
  const int corners = 1 << d;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    Index3 idx = base;
    for (int a = 0; a < d; ++a) {
      const bool up = (c >> a) & 1;
      w *= up ? frac[a] : 1.0 - frac[a];
      idx[a] += up ? 1 : 0;
    }
    const double v = at(idx);
    if (is_inf(v)) {
      // an infinite corner with zero weight still poisons the cell unless the
      // point sits exactly on the finite face
      if (w > 0.0) return kInf;
      continue;
    }
    acc += w * v;
  }
  return acc;
}

namespace {

std::string format_value(double v) {
  if (is_inf(v)) return "inf";
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

double parse_value(const std::string& tok) {
  if (tok == "inf" || tok == "+inf") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw IoError("malformed grid value: '" + tok + "'");
  }
  if (used != tok.size()) throw IoError("malformed grid value: '" + tok + "'");
  return v;
}

}  // namespace

void write_grid_function(std::ostream& os, const GridFunction& g) {
  const Grid& gr = g.grid();
  const int d = gr.dim();
  os << d;
  for (int a = 0; a < d; ++a) os << ' ' << gr.counts()[a];
  for (int a = 0; a < d; ++a) os << ' ' << format_value(gr.origin()[a]);
  for (int a = 0; a < d; ++a) os << ' ' << format_value(gr.spacing()[a]);
  os << '\n';
  for (double v : g.values()) os << format_value(v) << '\n';
}

GridFunction read_grid_function(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw IoError("grid file: missing header");
  std::istringstream hs(header);
  std::vector<std::string> toks;
  for (std::string t; hs >> t;) toks.push_back(t);
  if (toks.empty()) throw IoError("grid file: empty header");
  int d = 0;
  try {
    d = std::stoi(toks[0]);
  } catch (const std::exception&) {
    throw IoError("grid file: bad dimension");
  }
  if (d < 1 || d > 3 || toks.size() != static_cast<std::size_t>(1 + 3 * d))
    throw IoError("grid file: header must be `dim n.. o.. h..`");
  Index3 counts{1, 1, 1};
  Point3 origin{0, 0, 0}, spacing{1, 1, 1};
  for (int a = 0; a < d; ++a) {
    const double n = parse_value(toks[1 + a]);
    if (n < 2 || n != std::floor(n)) throw IoError("grid file: bad node count");
    counts[a] = static_cast<std::size_t>(n);
    origin[a] = parse_value(toks[1 + d + a]);
    spacing[a] = parse_value(toks[1 + 2 * d + a]);
  }
  Grid grid = [&] {
    try {
      return Grid(d, origin, spacing, counts);
    } catch (const ValidationError& e) {
      throw IoError(std::string("grid file: ") + e.what());
    }
  }();
  std::vector<double> values;
  values.reserve(grid.size());
  for (std::string tok; is >> tok;) values.push_back(parse_value(tok));
  if (values.size() != grid.size()) throw IoError("grid file: value count does not match header");
  try {
    return GridFunction(grid, std::move(values));
  } catch (const ValidationError& e) {
    throw IoError(std::string("grid file: ") + e.what());
  }
}

void save_grid_function(const std::filesystem::path& path, const GridFunction& g) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_grid_function(os, g);
  if (!os) throw IoError("write failed: " + path.string());
}

GridFunction load_grid_function(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  return read_grid_function(is);
}

}  // namespace thinlim
