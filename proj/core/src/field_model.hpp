#pragma once

#include <array>
#include <span>
#include <vector>

#include "thinlim/density.hpp"
#include "thinlim/mesh.hpp"
#include "thinlim/solver.hpp"

namespace thinlim::detail {

using Vec3 = std::array<double, 3>;

/// Nodal field parametrised by its free degrees of freedom. Vertex value is
/// base[v] + p[dof[v]] (dof -1: fixed at base[v]).
class FieldModel {
 public:
  FieldModel(const SimplicialMesh& mesh, const BoundaryData& bc, double epsilon);

  int dim() const { return dim_; }
  std::size_t num_dofs() const { return ndofs_; }
  std::size_t num_cells() const { return cells_.size(); }
  double volume(std::size_t c) const { return cells_[c].volume; }

  std::vector<double> to_dofs(const NodalField& u) const;
  NodalField to_field(const std::vector<double>& p) const;

  /// (grad_alpha u, grad_3 u / eps) on cell c.
  Vec3 gradient(std::size_t c, const std::vector<double>& p) const;
  /// Least-norm dof change realising the gradient change dxi on cell c.
  void apply(std::size_t c, const Vec3& dxi, std::vector<double>& p) const;
  /// grad += w * A_c^T gxi
  void adjoint(std::size_t c, const Vec3& gxi, double w, std::vector<double>& grad) const;
  /// Free dofs that belong to a single vertex (not shared layer offsets).
  const std::vector<std::uint8_t>& vertex_dof() const { return vertex_dof_; }
  /// Largest diagonal of sum_c vol_c A_c^T A_c (step-size scale).
  double stiffness_scale() const;
  /// Cells touching each dof.
  const std::vector<std::vector<std::size_t>>& dof_cells() const { return dof_cells_; }

 private:
  struct Cell {
    int q = 0;                    // distinct free dofs
    std::array<int, 4> dof{};     // per distinct dof
    std::array<Vec3, 4> col{};    // A_c column per distinct dof
    std::array<Vec3, 4> pinv{};   // rows of the least-norm inverse
    Vec3 fixed{};                 // gradient contribution of fixed values
    double volume = 0.0;
  };

  int dim_;
  std::size_t ndofs_ = 0;
  std::vector<int> dof_;
  std::vector<double> base_;
  std::vector<Cell> cells_;
  std::vector<std::uint8_t> vertex_dof_;
  std::vector<std::vector<std::size_t>> dof_cells_;
};

inline double eval_density(const Density& W, const Vec3& xi, int d) { return W(std::span<const double>(xi.data(), d)); }

/// Central differences, one-sided next to dom boundaries, 0 when both sides are +inf.
Vec3 numeric_gradient(const Density& W, const Vec3& xi, int d, double fx);

/// Minimisers of a density on [-radius, radius]^d (or its declared argmin).
std::vector<Vec3> density_anchors(const Density& W, int d, double radius);

/// Point where the segment from the nearest anchor toward xi leaves {W <= t}.
/// Ties between anchors go to the larger last coordinate.
Vec3 star_projection(const Density& W, const Vec3& xi, int d, double t, const std::vector<Vec3>& anchors);

}  // namespace thinlim::detail
