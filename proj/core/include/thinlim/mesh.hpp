#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "thinlim/geometry.hpp"
#include "thinlim/grid.hpp"

namespace thinlim {

enum class VertexTag : std::uint8_t { Interior, Lateral, TopBottom };

/// UnionJack: diagonal direction alternates by quadrant, so both box
/// diagonals are mesh lines. Uniform: every square split along the same
/// diagonal, so the mesh is invariant under lattice translations.
enum class DiagonalPattern : std::uint8_t { UnionJack, Uniform };

/// Structured lattice metadata for rectangle meshes: vertex (i, j) has index
/// j * (nx + 1) + i and sits at origin + (i*hx, j*hy).
struct Lattice {
  Vec2 origin;
  double hx = 0.0;
  double hy = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  DiagonalPattern pattern = DiagonalPattern::UnionJack;
};

/// Triangles in 2D, tetrahedra in 3D. Unused trailing cell slots are -1.
class SimplicialMesh {
 public:
  SimplicialMesh(int dim, std::vector<Point3> vertices, std::vector<std::array<int, 4>> cells, std::vector<VertexTag> tags);

  int dim() const { return dim_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  const std::vector<Point3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 4>>& cells() const { return cells_; }
  const std::vector<VertexTag>& tags() const { return tags_; }
  std::span<const int> cell(std::size_t c) const { return {cells_[c].data(), static_cast<std::size_t>(dim_ + 1)}; }
  double volume(std::size_t c) const { return volumes_[c]; }
  double total_volume() const;

  /// Gradient of the barycentric basis function of local vertex k on cell c.
  std::span<const double> basis_gradient(std::size_t c, int k) const {
    return {basis_grad_.data() + (c * 4 + k) * 3, static_cast<std::size_t>(dim_)};
  }

  std::optional<Lattice> lattice;        ///< set for structured rectangle meshes (2D)
  std::optional<std::size_t> layers;     ///< set for extruded meshes: vertex = layer * base + b
  std::size_t base_vertices = 0;         ///< vertices per layer for extruded meshes

 private:
  int dim_;
  std::vector<Point3> vertices_;
  std::vector<std::array<int, 4>> cells_;
  std::vector<VertexTag> tags_;
  std::vector<double> volumes_;
  std::vector<double> basis_grad_;
};

/// One finite value per mesh vertex.
class NodalField {
 public:
  NodalField() = default;
  explicit NodalField(std::vector<double> values);
  NodalField(std::size_t n, double fill) : NodalField(std::vector<double>(n, fill)) {}

  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

using CellGradient = std::array<double, 3>;

/// Constant gradient of the P1 interpolant on every cell. For 3D meshes the
/// components are (grad_alpha u, grad_3 u).
std::vector<CellGradient> gradient_field(const SimplicialMesh& mesh, std::span<const double> u);
CellGradient cell_gradient(const SimplicialMesh& mesh, std::size_t c, std::span<const double> u);

/// Structured rectangle mesh, nx * ny squares, each split into two triangles.
SimplicialMesh mesh_rectangle(Vec2 lo, Vec2 hi, std::size_t nx, std::size_t ny,
                              DiagonalPattern pattern = DiagonalPattern::UnionJack);

/// Triangulation of a convex polygon: boundary points at spacing ~h plus the
/// interior lattice of spacing h, Delaunay-triangulated. Rectangles are
/// routed to mesh_rectangle.
SimplicialMesh mesh_polygon(const ConvexPolygon& omega, std::size_t n);

/// Extrude a 2D mesh over x3 in (-1, 1) with `layers` prism layers, each
/// prism split into 3 tetrahedra by the sorted-vertex-index rule.
SimplicialMesh extrude(const SimplicialMesh& base, std::size_t layers);

/// Dilate a 2D nodal field about x0: vertices map to x0 + t(x - x0), values kept.
SimplicialMesh dilate_mesh(const SimplicialMesh& mesh, Vec2 x0, double t);

/// Nodal trace of an affine function z.x + s (z has mesh.dim() components).
NodalField affine_trace(const SimplicialMesh& mesh, std::span<const double> gradient, double offset);

/// Mesh file: `v x y [z]`, `c i j k [l]`, `t index tag` lines
/// (tag in interior|lateral|topbottom).
void write_mesh(std::ostream& os, const SimplicialMesh& mesh);
SimplicialMesh read_mesh(std::istream& is);
void save_mesh(const std::filesystem::path& path, const SimplicialMesh& mesh);
SimplicialMesh load_mesh(const std::filesystem::path& path);

/// NodalField file: one value per line.
void save_nodal_field(const std::filesystem::path& path, const NodalField& u);
NodalField load_nodal_field(const std::filesystem::path& path);

}  // namespace thinlim
