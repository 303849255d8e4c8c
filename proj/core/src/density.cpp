#include "thinlim/density.hpp"

#include <cmath>
#include <memory>

#include "json.hpp"
#include "thinlim/error.hpp"
#include "thinlim/expression.hpp"

namespace thinlim {

using nlohmann::json;

Density::Density(int dim, Fn fn, std::string descriptor)
    : dim_(dim), fn_(std::move(fn)), descriptor_(std::move(descriptor)) {
  if (dim < 1 || dim > 3) throw ValidationError("density dimension must be 1, 2 or 3");
}

namespace {

std::vector<double> vec_or(const json& j, const char* key, int dim, double fill) {
  std::vector<double> v(dim, fill);
  if (!j.contains(key)) return v;
  const auto& a = j.at(key);
  if (!a.is_array() || static_cast<int>(a.size()) != dim)
    throw ValidationError(std::string("density: '") + key + "' must be an array of length " + std::to_string(dim));
  for (int i = 0; i < dim; ++i) v[i] = a[i].get<double>();
  return v;
}

int dim_of(const json& j) {
  if (!j.contains("dim")) throw ValidationError("density: missing 'dim'");
  const int d = j.at("dim").get<int>();
  if (d < 1 || d > 3) throw ValidationError("density: dim must be 1, 2 or 3");
  return d;
}

double dist(std::span<const double> a, const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += (a[i] - c[i]) * (a[i] - c[i]);
  return std::sqrt(s);
}

Density build(const json& j) {
  if (!j.is_object() || !j.contains("family")) throw ValidationError("density: descriptor needs a 'family'");
  const std::string fam = j.at("family").get<std::string>();
  const std::string desc = j.dump();

  if (fam == "norm" || fam == "power_norm") {
    const int d = dim_of(j);
    const auto c = vec_or(j, "center", d, 0.0);
    const double scale = j.value("scale", 1.0);
    const double offset = j.value("offset", 0.0);
    const double p = fam == "norm" ? 1.0 : j.value("p", 2.0);
    if (scale < 0.0 || offset < 0.0 || p <= 0.0) throw ValidationError("density: norm parameters must be non-negative");
    Density out(d, [=](std::span<const double> x) {
      const double r = dist(x, c);
      return offset + scale * (p == 1.0 ? r : p == 2.0 ? r * r : std::pow(r, p));
    }, desc);
    out.argmin = c;
    return out;
  }
  if (fam == "double_well") {
    const int d = dim_of(j);
    const double r = j.value("radius", 1.0);
    const int axis = j.value("axis", -1);
    if (axis >= d) throw ValidationError("density: double_well axis out of range");
    return Density(d, [=](std::span<const double> x) {
      double s = 0.0;
      if (axis < 0)
        for (int i = 0; i < d; ++i) s += x[i] * x[i];
      else
        s = x[axis] * x[axis];
      const double w = s - r * r;
      return w * w;
    }, desc);
  }
  if (fam == "indicator_ball") {
    const int d = dim_of(j);
    const auto c = vec_or(j, "center", d, 0.0);
    const double r = j.value("radius", 1.0);
    Density out(d, [=](std::span<const double> x) { return dist(x, c) <= r * (1.0 + 1e-12) ? 0.0 : kInf; }, desc);
    out.argmin = c;
    return out;
  }
  if (fam == "indicator_box") {
    if (!j.contains("lo") || !j.contains("hi")) throw ValidationError("density: indicator_box needs lo and hi");
    const int d = static_cast<int>(j.at("lo").size());
    const auto lo = vec_or(j, "lo", d, 0.0), hi = vec_or(j, "hi", d, 0.0);
    Density out(d, [=](std::span<const double> x) {
      for (int i = 0; i < d; ++i)
        if (x[i] < lo[i] - 1e-12 || x[i] > hi[i] + 1e-12) return kInf;
      return 0.0;
    }, desc);
    std::vector<double> mid(d);
    for (int i = 0; i < d; ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
    out.argmin = mid;
    return out;
  }
  if (fam == "indicator_cylinder") {
    const double r = j.value("radius", 1.0);
    const double hh = j.value("half_height", 1.0);
    Density out(3, [=](std::span<const double> x) {
      return std::hypot(x[0], x[1]) <= r * (1.0 + 1e-12) && std::abs(x[2]) <= hh * (1.0 + 1e-12) ? 0.0 : kInf;
    }, desc);
    out.argmin = std::vector<double>{0.0, 0.0, 0.0};
    return out;
  }
  if (fam == "indicator_points") {
    const int d = dim_of(j);
    std::vector<std::vector<double>> pts;
    for (const auto& p : j.at("points")) {
      if (static_cast<int>(p.size()) != d) throw ValidationError("density: point dimension mismatch");
      pts.push_back(p.get<std::vector<double>>());
    }
    if (pts.empty()) throw ValidationError("density: indicator_points needs points");
    const double tol = j.value("tol", 1e-9);
    Density out(d, [=](std::span<const double> x) {
      for (const auto& p : pts)
        if (dist(x, p) <= tol) return 0.0;
      return kInf;
    }, desc);
    out.argmin = pts.front();
    return out;
  }
  if (fam == "sum") {
    if (!j.contains("terms") || j.at("terms").empty()) throw ValidationError("density: sum needs terms");
    std::vector<Density> terms;
    for (const auto& t : j.at("terms")) terms.push_back(build(t));
    const int d = terms.front().dim();
    for (const auto& t : terms)
      if (t.dim() != d) throw ValidationError("density: sum terms differ in dimension");
    return Density(d, [terms](std::span<const double> x) {
      double s = 0.0;
      for (const auto& t : terms) s = ext_add(s, t(x));
      return s;
    }, desc);
  }
  if (fam == "expr") {
    const int d = dim_of(j);
    auto e = std::make_shared<Expression>(j.at("expr").get<std::string>());
    if (e->max_variable() >= d) throw ValidationError("density: expression uses a variable beyond dim");
    Density out(d, [e](std::span<const double> x) { return (*e)(x); }, desc);
    if (j.contains("argmin")) out.argmin = vec_or(j, "argmin", d, 0.0);
    return out;
  }
  if (fam == "grid") {
    const auto g = load_grid_function(j.at("path").get<std::string>());
    return grid_density(g);
  }
  throw ValidationError("density: unknown family '" + fam + "'");
}

}  // namespace

Density parse_density(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("density: malformed JSON: ") + e.what());
  }
  try {
    return build(j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("density: ") + e.what());
  }
}

GridFunction sample_density(const Density& density, const Grid& grid) {
  if (density.dim() != grid.dim()) throw ValidationError("density and grid dimensions differ");
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point3 p = grid.point(i);
    const double val = density(std::span<const double>(p.data(), grid.dim()));
    if (std::isnan(val)) throw ValidationError("density evaluated to NaN");
    if (val < 0.0) throw ValidationError("density evaluated to a negative value");
    v[i] = val;
  }
  return GridFunction(grid, std::move(v));
}

Density grid_density(const GridFunction& g) {
  auto shared = std::make_shared<GridFunction>(g);
  json j{{"family", "grid"}, {"dim", g.grid().dim()}};
  return Density(g.grid().dim(), [shared](std::span<const double> x) { return shared->interpolate(x); }, j.dump());
}

}  // namespace thinlim
