#include "field_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "thinlim/error.hpp"
#include "thinlim/extended_real.hpp"

namespace thinlim::detail {

namespace {

// Symmetric 3x3 pseudo-inverse by cyclic Jacobi rotations.
std::array<Vec3, 3> pseudo_inverse(std::array<Vec3, 3> m, int d) {
  std::array<Vec3, 3> v{};
  for (int i = 0; i < 3; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) off += m[p][q] * m[p][q];
    if (off < 1e-300) break;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) {
        if (m[p][q] == 0.0) continue;
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < d; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < d; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
        for (int k = 0; k < d; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
  double lmax = 0.0;
  for (int i = 0; i < d; ++i) lmax = std::max(lmax, std::abs(m[i][i]));
  std::array<Vec3, 3> out{};
  for (int k = 0; k < d; ++k) {
    const double lam = m[k][k];
    if (std::abs(lam) <= 1e-10 * lmax || lam == 0.0) continue;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out[i][j] += v[i][k] * v[j][k] / lam;
  }
  return out;
}

}  // namespace

FieldModel::FieldModel(const SimplicialMesh& mesh, const BoundaryData& bc, double epsilon) : dim_(mesh.dim()) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  const std::size_t nv = mesh.num_vertices();
  dof_.assign(nv, -1);
  base_.assign(nv, 0.0);
  const auto& tags = mesh.tags();
  const auto& verts = mesh.vertices();
  if (dim_ == 3) {
    std::map<double, int> levels;
    for (std::size_t v = 0; v < nv; ++v)
      if (tags[v] == VertexTag::Lateral) levels.emplace(verts[v][2], 0);
    double best = kInf;
    double mid = 0.0;
    for (const auto& [x3, unused] : levels)
      if (std::abs(x3) < best) {
        best = std::abs(x3);
        mid = x3;
      }
    for (auto& [x3, id] : levels) {
      if (x3 == mid) {
        id = -1;
      } else {
        id = static_cast<int>(ndofs_++);
        vertex_dof_.push_back(0);
      }
    }
    for (std::size_t v = 0; v < nv; ++v) {
      if (tags[v] == VertexTag::Lateral) {
        base_[v] = bc.affine(Vec2{verts[v][0], verts[v][1]});
        dof_[v] = levels.at(verts[v][2]);
      }
    }
  } else {
    for (std::size_t v = 0; v < nv; ++v)
      if (tags[v] == VertexTag::Lateral) base_[v] = bc.affine(Vec2{verts[v][0], verts[v][1]});
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (tags[v] == VertexTag::Lateral) continue;
    dof_[v] = static_cast<int>(ndofs_++);
    vertex_dof_.push_back(1);
  }

  cells_.resize(mesh.num_cells());
  dof_cells_.resize(ndofs_);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    Cell& cell = cells_[c];
    cell.volume = mesh.volume(c);
    const auto vs = mesh.cell(c);
    for (int k = 0; k <= dim_; ++k) {
      const auto gk = mesh.basis_gradient(c, k);
      Vec3 g{};
      for (int a = 0; a < dim_; ++a) g[a] = gk[a];
      if (dim_ == 3) g[2] /= epsilon;
      const int v = vs[k];
      for (int a = 0; a < 3; ++a) cell.fixed[a] += base_[v] * g[a];
      const int j = dof_[v];
      if (j < 0) continue;
      int slot = -1;
      for (int s = 0; s < cell.q; ++s)
        if (cell.dof[s] == j) slot = s;
      if (slot < 0) {
        slot = cell.q++;
        cell.dof[slot] = j;
      }
      for (int a = 0; a < 3; ++a) cell.col[slot][a] += g[a];
    }
    std::array<Vec3, 3> m{};
    for (int s = 0; s < cell.q; ++s)
      for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b) m[a][b] += cell.col[s][a] * cell.col[s][b];
    for (int s = 0; s < cell.q; ++s) dof_cells_[cell.dof[s]].push_back(c);
    const auto mi = pseudo_inverse(m, dim_);
    for (int s = 0; s < cell.q; ++s)
      for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b) cell.pinv[s][a] += mi[a][b] * cell.col[s][b];
  }
}

std::vector<double> FieldModel::to_dofs(const NodalField& u) const {
  if (u.size() != dof_.size()) throw ValidationError("nodal field size does not match the mesh");
  std::vector<double> p(ndofs_, 0.0);
  std::vector<std::uint8_t> set(ndofs_, 0);
  for (std::size_t v = 0; v < dof_.size(); ++v) {
    const int j = dof_[v];
    if (j < 0 || set[j]) continue;
    p[j] = u[v] - base_[v];
    set[j] = 1;
  }
  return p;
}

NodalField FieldModel::to_field(const std::vector<double>& p) const {
  std::vector<double> u(dof_.size());
  for (std::size_t v = 0; v < dof_.size(); ++v) u[v] = base_[v] + (dof_[v] >= 0 ? p[dof_[v]] : 0.0);
  return NodalField(std::move(u));
}

Vec3 FieldModel::gradient(std::size_t c, const std::vector<double>& p) const {
  const Cell& cell = cells_[c];
  Vec3 g = cell.fixed;
  for (int s = 0; s < cell.q; ++s) {
    const double pv = p[cell.dof[s]];
    for (int a = 0; a < 3; ++a) g[a] += pv * cell.col[s][a];
  }
  return g;
}

void FieldModel::apply(std::size_t c, const Vec3& dxi, std::vector<double>& p) const {
  const Cell& cell = cells_[c];
  for (int s = 0; s < cell.q; ++s) {
    double dp = 0.0;
    for (int a = 0; a < dim_; ++a) dp += cell.pinv[s][a] * dxi[a];
    p[cell.dof[s]] += dp;
  }
}

void FieldModel::adjoint(std::size_t c, const Vec3& gxi, double w, std::vector<double>& grad) const {
  const Cell& cell = cells_[c];
  for (int s = 0; s < cell.q; ++s) {
    double v = 0.0;
    for (int a = 0; a < dim_; ++a) v += cell.col[s][a] * gxi[a];
    grad[cell.dof[s]] += w * v;
  }
}

double FieldModel::stiffness_scale() const {
  std::vector<double> diag(ndofs_, 0.0);
  for (const Cell& cell : cells_)
    for (int s = 0; s < cell.q; ++s) {
      double n2 = 0.0;
      for (int a = 0; a < dim_; ++a) n2 += cell.col[s][a] * cell.col[s][a];
      diag[cell.dof[s]] += cell.volume * n2;
    }
  double m = 0.0;
  for (double v : diag) m = std::max(m, v);
  return m;
}

Vec3 numeric_gradient(const Density& W, const Vec3& xi, int d, double fx) {
  Vec3 g{};
  for (int a = 0; a < d; ++a) {
    const double h = 1e-6 * std::max(1.0, std::abs(xi[a]));
    Vec3 p = xi, m = xi;
    p[a] += h;
    m[a] -= h;
    const double fp = eval_density(W, p, d), fm = eval_density(W, m, d);
    if (!is_inf(fp) && !is_inf(fm))
      g[a] = (fp - fm) / (2.0 * h);
    else if (!is_inf(fp) && !is_inf(fx))
      g[a] = (fp - fx) / h;
    else if (!is_inf(fm) && !is_inf(fx))
      g[a] = (fx - fm) / h;
  }
  return g;
}

std::vector<Vec3> density_anchors(const Density& W, int d, double radius) {
  if (W.argmin && static_cast<int>(W.argmin->size()) == d) {
    Vec3 a{};
    for (int i = 0; i < d; ++i) a[i] = (*W.argmin)[i];
    return {a};
  }
  const std::size_t n = d == 1 ? 401 : d == 2 ? 81 : 31;
  const double h = 2.0 * radius / static_cast<double>(n - 1);
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= n;
  std::vector<double> vals(total);
  double best = kInf;
  auto point = [&](std::size_t f) {
    Vec3 x{};
    for (int i = d - 1; i >= 0; --i) {
      x[i] = -radius + static_cast<double>(f % n) * h;
      f /= n;
    }
    return x;
  };
  for (std::size_t f = 0; f < total; ++f) {
    vals[f] = eval_density(W, point(f), d);
    best = std::min(best, vals[f]);
  }
  if (is_inf(best)) throw ValidationError("density is +inf on the whole scan box");
  std::vector<Vec3> out;
  for (std::size_t f = 0; f < total && out.size() < 64; ++f) {
    if (vals[f] > best + 1e-12 * (1.0 + best)) continue;
    Vec3 x = point(f);
    double fx = vals[f];
    for (double step = h; step > 1e-10 * std::max(1.0, radius);) {
      bool moved = false;
      for (int a = 0; a < d && !moved; ++a)
        for (double sgn : {1.0, -1.0}) {
          Vec3 y = x;
          y[a] += sgn * step;
          const double fy = eval_density(W, y, d);
          if (fy < fx) {
            x = y;
            fx = fy;
            moved = true;
            break;
          }
        }
      if (!moved) step *= 0.5;
    }
    bool dup = false;
    for (const Vec3& o : out) {
      double dist = 0.0;
      for (int a = 0; a < d; ++a) dist = std::max(dist, std::abs(o[a] - x[a]));
      dup = dup || dist < 1e-6;
    }
    if (!dup) out.push_back(x);
  }
  return out;
}

Vec3 star_projection(const Density& W, const Vec3& xi, int d, double t, const std::vector<Vec3>& anchors) {
  const Vec3* best = nullptr;
  double bd = kInf;
  for (const Vec3& a : anchors) {
    double dist = 0.0;
    for (int i = 0; i < d; ++i) dist += (a[i] - xi[i]) * (a[i] - xi[i]);
    if (dist < bd - 1e-12 || (std::abs(dist - bd) <= 1e-12 && best && a[d - 1] > (*best)[d - 1])) {
      bd = std::min(bd, dist);
      best = &a;
    }
  }
  if (!best) return xi;
  const Vec3& a = *best;
  if (eval_density(W, a, d) > t) return a;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    Vec3 y{};
    for (int i = 0; i < d; ++i) y[i] = a[i] + mid * (xi[i] - a[i]);
    if (eval_density(W, y, d) <= t)
      lo = mid;
    else
      hi = mid;
  }
  Vec3 y{};
  for (int i = 0; i < d; ++i) y[i] = a[i] + lo * (xi[i] - a[i]);
  return y;
}

}  // namespace thinlim::detail
