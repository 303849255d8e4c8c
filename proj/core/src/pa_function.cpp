#include "thinlim/pa_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "thinlim/error.hpp"

namespace thinlim {

PAFunction::PAFunction(std::vector<PAPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw ValidationError("PA function needs at least one piece");
}

double PAFunction::continuity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& cell = pieces_[i].cell;
    for (std::size_t e = 0; e < cell.size(); ++e) {
      const Vec2 a = cell.vertex(e), b = cell.vertex(e + 1);
      for (const Vec2 p : {a, 0.5 * (a + b), b}) {
        const double ui = pieces_[i].affine(p);
        for (std::size_t j = 0; j < pieces_.size(); ++j) {
          if (j == i || !pieces_[j].cell.contains(p, 1e-10)) continue;
          worst = std::max(worst, std::abs(ui - pieces_[j].affine(p)));
        }
      }
    }
  }
  return worst;
}

namespace {

PAFunction envelope(const std::vector<AffineFunction>& affines, const ConvexPolygon& domain, bool upper) {
  std::vector<PAPiece> pieces;
  for (std::size_t i = 0; i < affines.size(); ++i) {
    std::vector<Vec2> cur(domain.vertices().begin(), domain.vertices().end());
    for (std::size_t j = 0; j < affines.size() && cur.size() >= 3; ++j) {
      if (j == i) continue;
      // keep a_j <= a_i (upper) or a_j >= a_i (lower)
      Vec2 n = affines[j].gradient - affines[i].gradient;
      double off = affines[i].offset - affines[j].offset;
      if (!upper) {
        n = -1.0 * n;
        off = -off;
      }
      if (norm(n) == 0.0) {
        if (off < 0.0 || (off == 0.0 && j < i)) cur.clear();
        continue;
      }
      cur = clip_half_plane(cur, {n, off});
    }
    if (cur.size() < 3) continue;
    auto hull = convex_hull(cur);
    if (hull.size() < 3) continue;
    double a2 = 0.0;
    for (std::size_t k = 0; k < hull.size(); ++k) a2 += cross(hull[k], hull[(k + 1) % hull.size()]);
    if (a2 <= 1e-14) continue;
    pieces.push_back({affines[i], ConvexPolygon(std::move(hull))});
  }
  return PAFunction(std::move(pieces));
}

}  // namespace

PAFunction PAFunction::upper_envelope(const std::vector<AffineFunction>& affines, const ConvexPolygon& domain) {
  return envelope(affines, domain, true);
}

PAFunction PAFunction::lower_envelope(const std::vector<AffineFunction>& affines, const ConvexPolygon& domain) {
  return envelope(affines, domain, false);
}

double eval_pa(const PAFunction& pa, Vec2 x) {
  for (const PAPiece& p : pa.pieces())
    if (p.cell.contains(x, 1e-12)) return p.affine(x);
  throw ValidationError("point outside domain");
}

PAFunction dilate_function(const PAFunction& u, Vec2 x0, double t) {
  if (!(t > 0.0)) throw ValidationError("dilation factor must be positive");
  std::vector<PAPiece> out;
  for (const PAPiece& p : u.pieces()) {
    AffineFunction a{p.affine.gradient / t, p.affine.offset + dot(p.affine.gradient, x0) * (1.0 - 1.0 / t)};
    std::vector<Vec2> v;
    for (Vec2 q : p.cell.vertices()) v.push_back(x0 + t * (q - x0));
    out.push_back({a, ConvexPolygon(std::move(v))});
  }
  return PAFunction(std::move(out));
}

void write_pa(std::ostream& os, const PAFunction& pa) {
  os << std::setprecision(17);
  for (const PAPiece& p : pa.pieces()) {
    os << "piece " << p.affine.gradient.x << ' ' << p.affine.gradient.y << ' ' << p.affine.offset << '\n';
    for (Vec2 v : p.cell.vertices()) os << v.x << ' ' << v.y << '\n';
    os << '\n';
  }
}

PAFunction read_pa(std::istream& is) {
  std::vector<PAPiece> pieces;
  std::optional<AffineFunction> cur;
  std::vector<Vec2> verts;
  auto flush = [&] {
    if (!cur) return;
    try {
      pieces.push_back({*cur, ConvexPolygon(verts)});
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("PA file: ") + e.what());
    }
    cur.reset();
    verts.clear();
  };
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) {
      flush();
      continue;
    }
    if (head == "piece") {
      flush();
      AffineFunction a;
      if (!(ls >> a.gradient.x >> a.gradient.y >> a.offset)) throw IoError("PA file: bad piece line");
      cur = a;
      continue;
    }
    if (!cur) throw IoError("PA file: vertex before `piece` line");
    std::istringstream vs(line);
    Vec2 v;
    if (!(vs >> v.x >> v.y)) throw IoError("PA file: bad vertex line");
    verts.push_back(v);
  }
  flush();
  return PAFunction(std::move(pieces));
}

PAFunction load_pa(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  return read_pa(is);
}

}  // namespace thinlim
