#include "thinlim/maxmin.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "thinlim/error.hpp"

namespace thinlim {

void MaxMinForm::validate() const {
  if (groups.empty()) throw ValidationError("max-min form has no groups");
  for (const auto& g : groups) {
    if (g.empty()) throw ValidationError("max-min form has an empty group");
    for (std::size_t j : g)
      if (j >= affines.size()) throw ValidationError("max-min group index out of range");
  }
}

PolygonDomain PolygonDomain::from(const ConvexPolygon& omega) { return {{omega}, true}; }

PolygonDomain PolygonDomain::from_parts(std::vector<ConvexPolygon> parts) {
  if (parts.empty()) throw ValidationError("domain has no parts");
  const bool convex = parts.size() == 1;
  return {std::move(parts), convex};
}

PolygonDomain PolygonDomain::l_shape() {
  return from_parts({ConvexPolygon::box({0.0, 0.0}, {2.0, 1.0}), ConvexPolygon::box({0.0, 1.0}, {1.0, 2.0})});
}

bool PolygonDomain::contains(Vec2 p, double tol) const {
  return std::any_of(parts.begin(), parts.end(), [&](const ConvexPolygon& c) { return c.contains(p, tol); });
}

void PolygonDomain::bounding_box(Vec2& lo, Vec2& hi) const {
  parts.front().bounding_box(lo, hi);
  for (const ConvexPolygon& c : parts) {
    Vec2 a, b;
    c.bounding_box(a, b);
    lo = {std::min(lo.x, a.x), std::min(lo.y, a.y)};
    hi = {std::max(hi.x, b.x), std::max(hi.y, b.y)};
  }
}

namespace {

std::vector<std::vector<Vec2>> clipped_cells(const ConvexPolygon& cell, const PolygonDomain& omega) {
  std::vector<std::vector<Vec2>> out;
  for (const ConvexPolygon& part : omega.parts)
    if (auto c = intersect(cell, part)) out.emplace_back(c->vertices().begin(), c->vertices().end());
  return out;
}

}  // namespace

MaxMinForm maxmin_representation(const PAFunction& pa, const ConvexPolygon& omega) {
  return maxmin_representation(pa, PolygonDomain::from(omega));
}

MaxMinForm maxmin_representation(const PAFunction& pa, const PolygonDomain& omega, bool allow_nonconvex) {
  if (!omega.convex && !allow_nonconvex) throw ValidationError("max-min representation needs a convex domain");
  if (pa.continuity_defect() > 1e-9) throw ValidationError("piecewise-affine input is discontinuous");
  std::vector<AffineFunction> active;
  std::vector<std::vector<std::vector<Vec2>>> cells;
  for (const PAPiece& p : pa.pieces()) {
    auto c = clipped_cells(p.cell, omega);
    if (c.empty()) continue;
    active.push_back(p.affine);
    cells.push_back(std::move(c));
  }
  if (active.empty()) throw EmptyDomainError("no piece meets the domain");
  const auto tol = [](double a) { return 1e-10 * (1.0 + std::abs(a)); };

  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const AffineFunction& ai = active[i];
    // split P_i cap omega along every line a_j = a_i that crosses it
    std::vector<std::vector<Vec2>> parts = cells[i];
    for (std::size_t j = 0; j < active.size(); ++j) {
      if (j == i) continue;
      const HalfPlane below{active[j].gradient - ai.gradient, ai.offset - active[j].offset};
      const HalfPlane above{ai.gradient - active[j].gradient, active[j].offset - ai.offset};
      std::vector<std::vector<Vec2>> next;
      for (auto& poly : parts) {
        bool lo = false, hi = false;
        for (Vec2 v : poly) {
          const double d = active[j](v) - ai(v);
          lo |= d < -tol(ai(v));
          hi |= d > tol(ai(v));
        }
        if (!(lo && hi)) {
          next.push_back(std::move(poly));
          continue;
        }
        for (const HalfPlane& hp : {below, above}) {
          auto piece = clip_half_plane(poly, hp);
          if (piece.size() < 3) continue;
          auto hull = convex_hull(piece);
          double area = 0.0;
          for (std::size_t k = 0; k < hull.size(); ++k) area += cross(hull[k], hull[(k + 1) % hull.size()]);
          if (hull.size() >= 3 && area > 1e-14) next.push_back(std::move(hull));
        }
      }
      parts = std::move(next);
    }
    for (const auto& poly : parts) {
      std::vector<std::size_t> group;
      for (std::size_t j = 0; j < active.size(); ++j) {
        bool dominates = true;
        for (Vec2 v : poly)
          if (active[j](v) < ai(v) - tol(ai(v))) {
            dominates = false;
            break;
          }
        if (dominates) group.push_back(j);
      }
      groups.push_back(std::move(group));
    }
  }
  // a group containing another is never the larger of the two minima
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  MaxMinForm form{active, {}};
  for (auto& g : groups) {
    const bool redundant = std::any_of(form.groups.begin(), form.groups.end(), [&](const auto& kept) {
      return std::includes(g.begin(), g.end(), kept.begin(), kept.end());
    });
    if (!redundant) form.groups.push_back(std::move(g));
  }
  return form;
}

double eval_maxmin(const MaxMinForm& form, Vec2 x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g : form.groups) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j : g) m = std::min(m, form.affines[j](x));
    best = std::max(best, m);
  }
  return best;
}

MaxMinVerification verify_representation(const PAFunction& pa, const MaxMinForm& form, const ConvexPolygon& omega,
                                         std::size_t n_samples, std::uint64_t seed) {
  return verify_representation(pa, form, PolygonDomain::from(omega), n_samples, seed);
}

MaxMinVerification verify_representation(const PAFunction& pa, const MaxMinForm& form, const PolygonDomain& omega,
                                         std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ValidationError("verification needs at least one sample");
  form.validate();
  MaxMinVerification rep;
  rep.convex_domain = omega.convex;
  auto probe = [&](Vec2 x) {
    double u;
    try {
      u = eval_pa(pa, x);
    } catch (const ValidationError&) {
      return;
    }
    const double d = std::abs(u - eval_maxmin(form, x));
    ++rep.points_checked;
    if (d > rep.max_deviation || rep.points_checked == 1) {
      rep.max_deviation = std::max(rep.max_deviation, d);
      rep.witness = x;
    }
  };
  for (const PAPiece& p : pa.pieces()) {
    for (const auto& c : clipped_cells(p.cell, omega)) {
      for (std::size_t e = 0; e < c.size(); ++e) {
        probe(c[e]);
        probe(0.5 * (c[e] + c[(e + 1) % c.size()]));
      }
    }
  }
  Vec2 lo, hi;
  omega.bounding_box(lo, hi);
  const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_samples))));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t accepted = 0;
  for (std::size_t attempt = 0; accepted < n_samples && attempt < 64 * n_samples; ++attempt) {
    const std::size_t s = attempt % (k * k);
    const double fx = (static_cast<double>(s % k) + unit(rng)) / static_cast<double>(k);
    const double fy = (static_cast<double>(s / k) + unit(rng)) / static_cast<double>(k);
    const Vec2 x{lo.x + fx * (hi.x - lo.x), lo.y + fy * (hi.y - lo.y)};
    if (!omega.contains(x)) continue;
    ++accepted;
    probe(x);
  }
  rep.pass = rep.max_deviation <= 1e-12;
  if (!omega.convex)
    rep.label = "non-convex domain - representation not guaranteed";
  else
    rep.label = rep.pass ? "valid" : "invalid";
  return rep;
}

void write_maxmin(std::ostream& os, const MaxMinForm& form) {
  os << std::setprecision(17);
  for (const AffineFunction& a : form.affines) os << a.gradient.x << ' ' << a.gradient.y << ' ' << a.offset << '\n';
  os << '\n';
  for (const auto& g : form.groups) {
    for (std::size_t i = 0; i < g.size(); ++i) os << (i ? " " : "") << g[i];
    os << '\n';
  }
}

MaxMinForm read_maxmin(std::istream& is) {
  MaxMinForm form;
  std::string line;
  bool in_groups = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      if (!form.affines.empty()) in_groups = true;
      continue;
    }
    std::istringstream ls(line);
    if (!in_groups) {
      AffineFunction a;
      std::string extra;
      if (!(ls >> a.gradient.x >> a.gradient.y >> a.offset) || (ls >> extra))
        throw IoError("max-min line " + std::to_string(lineno) + ": expected `zx zy s`");
      form.affines.push_back(a);
    } else {
      std::vector<std::size_t> g;
      long long j;
      while (ls >> j) {
        if (j < 0) throw IoError("max-min line " + std::to_string(lineno) + ": negative index");
        g.push_back(static_cast<std::size_t>(j));
      }
      if (!ls.eof()) throw IoError("max-min line " + std::to_string(lineno) + ": expected indices");
      form.groups.push_back(std::move(g));
    }
  }
  try {
    form.validate();
  } catch (const ValidationError& e) {
    throw IoError(e.what());
  }
  return form;
}

void save_maxmin(const std::filesystem::path& path, const MaxMinForm& form) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_maxmin(os, form);
}

MaxMinForm load_maxmin(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  return read_maxmin(is);
}

}  // namespace thinlim
