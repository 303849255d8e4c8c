#include "thinlim/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "thinlim/error.hpp"

namespace thinlim {

SimplicialMesh::SimplicialMesh(int dim, std::vector<Point3> vertices, std::vector<std::array<int, 4>> cells,
                               std::vector<VertexTag> tags)
    : dim_(dim), vertices_(std::move(vertices)), cells_(std::move(cells)), tags_(std::move(tags)) {
  if (dim_ != 2 && dim_ != 3) throw ValidationError("mesh dimension must be 2 or 3");
  if (tags_.size() != vertices_.size()) throw ValidationError("mesh needs one tag per vertex");
  volumes_.resize(cells_.size());
  basis_grad_.assign(cells_.size() * 12, 0.0);
  const int nv = static_cast<int>(vertices_.size());
  double scale = 0.0;
  for (const auto& p : vertices_)
    for (int a = 0; a < dim_; ++a) scale = std::max(scale, std::abs(p[a]));
  scale = std::max(scale, 1.0);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& cv = cells_[c];
    for (int k = 0; k <= dim_; ++k)
      if (cv[k] < 0 || cv[k] >= nv) throw ValidationError("mesh cell references a missing vertex");
    // edge matrix D (columns p_k - p_0); basis gradients are columns of D^{-T}
    double D[3][3] = {};
    for (int k = 1; k <= dim_; ++k)
      for (int a = 0; a < dim_; ++a) D[a][k - 1] = vertices_[cv[k]][a] - vertices_[cv[0]][a];
    double det = 0.0;
    double inv[3][3] = {};
    if (dim_ == 2) {
      det = D[0][0] * D[1][1] - D[0][1] * D[1][0];
      inv[0][0] = D[1][1] / det;
      inv[0][1] = -D[0][1] / det;
      inv[1][0] = -D[1][0] / det;
      inv[1][1] = D[0][0] / det;
      volumes_[c] = 0.5 * std::abs(det);
    } else {
      det = D[0][0] * (D[1][1] * D[2][2] - D[1][2] * D[2][1]) - D[0][1] * (D[1][0] * D[2][2] - D[1][2] * D[2][0]) +
            D[0][2] * (D[1][0] * D[2][1] - D[1][1] * D[2][0]);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
          inv[i][j] = (D[i1][j1] * D[i2][j2] - D[i1][j2] * D[i2][j1]) / det;
        }
      volumes_[c] = std::abs(det) / 6.0;
    }
    const double tol = 1e-14 * std::pow(scale, dim_);
    if (!(volumes_[c] > tol)) throw ValidationError("degenerate simplex (zero volume) in mesh");
    // grad phi_k (k >= 1) = row k-1 of D^{-1}
    for (int k = 1; k <= dim_; ++k)
      for (int a = 0; a < dim_; ++a) {
        basis_grad_[(c * 4 + k) * 3 + a] = inv[k - 1][a];
        basis_grad_[(c * 4 + 0) * 3 + a] -= inv[k - 1][a];
      }
  }
}

double SimplicialMesh::total_volume() const {
  double v = 0.0;
  for (double x : volumes_) v += x;
  return v;
}

NodalField::NodalField(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("nodal field values must be finite");
}

CellGradient cell_gradient(const SimplicialMesh& mesh, std::size_t c, std::span<const double> u) {
  CellGradient g{0.0, 0.0, 0.0};
  const auto cv = mesh.cell(c);
  for (int k = 0; k <= mesh.dim(); ++k) {
    const auto bg = mesh.basis_gradient(c, k);
    const double uk = u[cv[k]];
    for (int a = 0; a < mesh.dim(); ++a) g[a] += bg[a] * uk;
  }
  return g;
}

std::vector<CellGradient> gradient_field(const SimplicialMesh& mesh, std::span<const double> u) {
  if (u.size() != mesh.num_vertices()) throw ValidationError("nodal field size does not match mesh");
  std::vector<CellGradient> out(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) out[c] = cell_gradient(mesh, c, u);
  return out;
}

SimplicialMesh mesh_rectangle(Vec2 lo, Vec2 hi, std::size_t nx, std::size_t ny, DiagonalPattern pattern) {
  if (nx < 1 || ny < 1) throw ValidationError("rectangle mesh needs at least one cell per axis");
  if (!(hi.x > lo.x && hi.y > lo.y)) throw ValidationError("rectangle mesh needs hi > lo");
  const double hx = (hi.x - lo.x) / static_cast<double>(nx);
  const double hy = (hi.y - lo.y) / static_cast<double>(ny);
  std::vector<Point3> verts;
  std::vector<VertexTag> tags;
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i) {
      verts.push_back({lo.x + static_cast<double>(i) * hx, lo.y + static_cast<double>(j) * hy, 0.0});
      const bool bd = i == 0 || j == 0 || i == nx || j == ny;
      tags.push_back(bd ? VertexTag::Lateral : VertexTag::Interior);
    }
  auto id = [nx](std::size_t i, std::size_t j) { return static_cast<int>(j * (nx + 1) + i); };
  std::vector<std::array<int, 4>> cells;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      const bool left = 2 * i < nx, low = 2 * j < ny;
      if (pattern == DiagonalPattern::Uniform || left == low) {
        cells.push_back({a, b, c, -1});
        cells.push_back({a, c, d, -1});
      } else {
        cells.push_back({a, b, d, -1});
        cells.push_back({b, c, d, -1});
      }
    }
  SimplicialMesh m(2, std::move(verts), std::move(cells), std::move(tags));
  m.lattice = Lattice{lo, hx, hy, nx, ny, pattern};
  return m;
}

namespace {

bool is_axis_box(const ConvexPolygon& p, Vec2& lo, Vec2& hi) {
  if (p.size() != 4) return false;
  p.bounding_box(lo, hi);
  for (Vec2 v : p.vertices())
    if (!((v.x == lo.x || v.x == hi.x) && (v.y == lo.y || v.y == hi.y))) return false;
  return true;
}

struct Tri {
  int v[3];
  Vec2 cc;
  double r2;
};

Tri make_tri(const std::vector<Vec2>& P, int a, int b, int c) {
  if (orient(P[a], P[b], P[c]) < 0.0) std::swap(b, c);
  const Vec2 A = P[a], B = P[b], C = P[c];
  const double d = 2.0 * (A.x * (B.y - C.y) + B.x * (C.y - A.y) + C.x * (A.y - B.y));
  const double a2 = dot(A, A), b2 = dot(B, B), c2 = dot(C, C);
  Vec2 cc{(a2 * (B.y - C.y) + b2 * (C.y - A.y) + c2 * (A.y - B.y)) / d,
          (a2 * (C.x - B.x) + b2 * (A.x - C.x) + c2 * (B.x - A.x)) / d};
  const Vec2 r = A - cc;
  return {{a, b, c}, cc, dot(r, r)};
}

}  // namespace

SimplicialMesh mesh_polygon(const ConvexPolygon& omega, std::size_t n) {
  if (n < 2) throw ValidationError("polygon mesh resolution must be >= 2");
  Vec2 lo, hi;
  if (is_axis_box(omega, lo, hi)) return mesh_rectangle(lo, hi, n, n);
  omega.bounding_box(lo, hi);
  const double h = std::max(hi.x - lo.x, hi.y - lo.y) / static_cast<double>(n);
  std::vector<Vec2> P;
  std::vector<VertexTag> tags;
  for (std::size_t e = 0; e < omega.size(); ++e) {
    const Vec2 a = omega.vertex(e), b = omega.vertex(e + 1);
    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(norm(b - a) / h)));
    for (std::size_t s = 0; s < k; ++s) {
      P.push_back(a + (static_cast<double>(s) / static_cast<double>(k)) * (b - a));
      tags.push_back(VertexTag::Lateral);
    }
  }
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t i = 0; i <= n; ++i) {
      const Vec2 p{lo.x + static_cast<double>(i) * h, lo.y + static_cast<double>(j) * h};
      if (omega.distance_to_boundary(p) > 0.5 * h) {
        P.push_back(p);
        tags.push_back(VertexTag::Interior);
      }
    }
  const int np = static_cast<int>(P.size());
  // Bowyer-Watson with a large enclosing triangle
  const Vec2 mid = 0.5 * (lo + hi);
  const double big = 1e3 * std::max(hi.x - lo.x, hi.y - lo.y);
  P.push_back({mid.x - 2.0 * big, mid.y - big});
  P.push_back({mid.x + 2.0 * big, mid.y - big});
  P.push_back({mid.x, mid.y + 2.0 * big});
  std::vector<Tri> tris{make_tri(P, np, np + 1, np + 2)};
  for (int p = 0; p < np; ++p) {
    std::vector<Tri> keep;
    std::map<std::pair<int, int>, int> edges;
    for (const Tri& t : tris) {
      const Vec2 d = P[p] - t.cc;
      if (dot(d, d) < t.r2 * (1.0 - 1e-12)) {
        for (int k = 0; k < 3; ++k) {
          int a = t.v[k], b = t.v[(k + 1) % 3];
          ++edges[{std::min(a, b), std::max(a, b)}];
        }
      } else {
        keep.push_back(t);
      }
    }
    for (const auto& [e, count] : edges)
      if (count == 1) keep.push_back(make_tri(P, e.first, e.second, p));
    tris = std::move(keep);
  }
  std::vector<std::array<int, 4>> cells;
  double area = 0.0;
  for (const Tri& t : tris) {
    if (t.v[0] >= np || t.v[1] >= np || t.v[2] >= np) continue;
    const double a = 0.5 * orient(P[t.v[0]], P[t.v[1]], P[t.v[2]]);
    if (a <= 1e-12 * h * h) continue;
    area += a;
    cells.push_back({t.v[0], t.v[1], t.v[2], -1});
  }
  if (std::abs(area - omega.area()) > 1e-9 * omega.area()) throw SolverError("polygon triangulation does not cover the domain");
  std::sort(cells.begin(), cells.end());
  std::vector<Point3> verts;
  for (int i = 0; i < np; ++i) verts.push_back({P[i].x, P[i].y, 0.0});
  return SimplicialMesh(2, std::move(verts), std::move(cells), std::move(tags));
}

SimplicialMesh extrude(const SimplicialMesh& base, std::size_t layers) {
  if (base.dim() != 2) throw ValidationError("only 2D meshes can be extruded");
  if (layers < 1) throw ValidationError("extrusion needs at least one layer");
  const std::size_t nb = base.num_vertices();
  std::vector<Point3> verts;
  std::vector<VertexTag> tags;
  for (std::size_t k = 0; k <= layers; ++k) {
    const double x3 = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(layers);
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& p = base.vertices()[b];
      verts.push_back({p[0], p[1], x3});
      VertexTag t = base.tags()[b] == VertexTag::Lateral ? VertexTag::Lateral
                    : (k == 0 || k == layers)            ? VertexTag::TopBottom
                                                         : VertexTag::Interior;
      tags.push_back(t);
    }
  }
  std::vector<std::array<int, 4>> cells;
  for (std::size_t k = 0; k < layers; ++k)
    for (std::size_t c = 0; c < base.num_cells(); ++c) {
      auto tri = base.cell(c);
      std::array<int, 3> s{tri[0], tri[1], tri[2]};
      std::sort(s.begin(), s.end());
      const int off = static_cast<int>(k * nb), up = static_cast<int>((k + 1) * nb);
      const int a = s[0] + off, b = s[1] + off, cc = s[2] + off;
      const int A = s[0] + up, B = s[1] + up, C = s[2] + up;
      cells.push_back({a, b, cc, C});
      cells.push_back({a, b, B, C});
      cells.push_back({a, A, B, C});
    }
  SimplicialMesh m(3, std::move(verts), std::move(cells), std::move(tags));
  m.layers = layers;
  m.base_vertices = nb;
  return m;
}

SimplicialMesh dilate_mesh(const SimplicialMesh& mesh, Vec2 x0, double t) {
  if (mesh.dim() != 2) throw ValidationError("dilation is defined for 2D meshes");
  if (!(t > 0.0)) throw ValidationError("dilation factor must be positive");
  std::vector<Point3> verts;
  for (const auto& p : mesh.vertices()) verts.push_back({x0.x + t * (p[0] - x0.x), x0.y + t * (p[1] - x0.y), 0.0});
  SimplicialMesh out(2, std::move(verts), mesh.cells(), mesh.tags());
  if (mesh.lattice) {
    Lattice l = *mesh.lattice;
    l.origin = x0 + t * (l.origin - x0);
    l.hx *= t;
    l.hy *= t;
    out.lattice = l;
  }
  return out;
}

NodalField affine_trace(const SimplicialMesh& mesh, std::span<const double> z, double s) {
  std::vector<double> v(mesh.num_vertices());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double acc = s;
    for (int a = 0; a < mesh.dim() && a < static_cast<int>(z.size()); ++a) acc += z[a] * mesh.vertices()[i][a];
    v[i] = acc;
  }
  return NodalField(std::move(v));
}

namespace {

const char* tag_name(VertexTag t) {
  switch (t) {
    case VertexTag::Interior: return "interior";
    case VertexTag::Lateral: return "lateral";
    case VertexTag::TopBottom: return "topbottom";
  }
  return "interior";
}

}  // namespace

void write_mesh(std::ostream& os, const SimplicialMesh& mesh) {
  os << std::setprecision(17);
  for (const auto& p : mesh.vertices()) {
    os << "v " << p[0] << ' ' << p[1];
    if (mesh.dim() == 3) os << ' ' << p[2];
    os << '\n';
  }
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    os << 'c';
    for (int v : mesh.cell(c)) os << ' ' << v;
    os << '\n';
  }
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.tags()[i] != VertexTag::Interior) os << "t " << i << ' ' << tag_name(mesh.tags()[i]) << '\n';
}

SimplicialMesh read_mesh(std::istream& is) {
  std::vector<Point3> verts;
  std::vector<std::array<int, 4>> cells;
  std::vector<std::pair<std::size_t, VertexTag>> tag_lines;
  int dim = 0;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "v") {
      std::vector<double> xs;
      for (double x; ls >> x;) xs.push_back(x);
      if (xs.size() != 2 && xs.size() != 3) throw IoError("mesh file: vertex needs 2 or 3 coordinates");
      if (dim == 0) dim = static_cast<int>(xs.size());
      if (dim != static_cast<int>(xs.size())) throw IoError("mesh file: mixed vertex dimensions");
      verts.push_back({xs[0], xs[1], xs.size() == 3 ? xs[2] : 0.0});
    } else if (kind == "c") {
      std::array<int, 4> c{-1, -1, -1, -1};
      int k = 0;
      for (int v; ls >> v && k < 4;) c[k++] = v;
      if (k != dim + 1) throw IoError("mesh file: cell arity does not match dimension");
      cells.push_back(c);
    } else if (kind == "t") {
      std::size_t idx = 0;
      std::string name;
      if (!(ls >> idx >> name)) throw IoError("mesh file: bad tag line");
      VertexTag t = name == "lateral" ? VertexTag::Lateral : name == "topbottom" ? VertexTag::TopBottom : VertexTag::Interior;
      tag_lines.emplace_back(idx, t);
    } else {
      throw IoError("mesh file: unknown line kind '" + kind + "'");
    }
  }
  if (verts.empty()) throw IoError("mesh file: no vertices");
  std::vector<VertexTag> tags(verts.size(), VertexTag::Interior);
  for (auto [i, t] : tag_lines) {
    if (i >= tags.size()) throw IoError("mesh file: tag for missing vertex");
    tags[i] = t;
  }
  try {
    return SimplicialMesh(dim, std::move(verts), std::move(cells), std::move(tags));
  } catch (const ValidationError& e) {
    throw IoError(std::string("mesh file: ") + e.what());
  }
}

void save_mesh(const std::filesystem::path& path, const SimplicialMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_mesh(os, mesh);
}

SimplicialMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  return read_mesh(is);
}

void save_nodal_field(const std::filesystem::path& path, const NodalField& u) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << std::setprecision(17);
  for (double v : u.values()) os << v << '\n';
}

NodalField load_nodal_field(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  std::vector<double> v;
  for (double x; is >> x;) v.push_back(x);
  if (!is.eof()) throw IoError("nodal field file: malformed value");
  return NodalField(std::move(v));
}

}  // namespace thinlim
