#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "thinlim/grid.hpp"

namespace thinlim {

/// Incremental convex hull of grid nodes, tracked in integer index space.
///
/// Nodes are inserted one at a time; after each insertion every grid node
/// inside the closed hull is marked covered. Predicates are exact (int64), so
/// coplanar and collinear configurations need no tolerance. Axis scaling does
/// not change convexity, so covering in index space equals covering in
/// physical space.
class LatticeHull {
 public:
  explicit LatticeHull(const Grid& grid);

  /// Insert a node (flat index). Returns the nodes that became covered.
  std::vector<std::size_t> insert(std::size_t node);

  bool covered(std::size_t node) const { return covered_[node] != 0; }
  const std::vector<std::uint8_t>& covered_mask() const { return covered_; }
  /// Affine dimension of the current hull (-1 when empty).
  int affine_dim() const { return phase_; }
  /// Hull vertex nodes (flat indices); for dim 3 this is every vertex used by a live face.
  std::vector<std::size_t> vertex_nodes() const;

  using P = std::array<std::int64_t, 3>;

 private:
  struct Face {
    int a, b, c;
    bool alive;
  };

  std::size_t flat(const P& p) const;
  P point_of(std::size_t node) const;
  void cover(const P& p, std::vector<std::size_t>& out);
  void cover_segment(const P& a, const P& b, std::vector<std::size_t>& out);
  void cover_triangle(const P& a, const P& b, const P& c, std::vector<std::size_t>& out);
  void cover_tetra(const P& a, const P& b, const P& c, const P& d, std::vector<std::size_t>& out);
  void insert_collinear(const P& q, std::vector<std::size_t>& out);
  void insert_planar(const P& q, std::vector<std::size_t>& out);
  void lift_to_3d(const P& q, std::vector<std::size_t>& out);
  void insert_3d(const P& q, std::vector<std::size_t>& out);
  void add_face(int a, int b, int c);
  static std::uint64_t edge_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }

  Grid grid_;
  std::array<std::int64_t, 3> counts_;
  std::vector<std::uint8_t> covered_;
  int phase_ = -1;
  std::vector<P> pts_;          // phase 0/1: extremes; phase 2: CCW polygon; phase 3: point pool
  P normal_{0, 0, 0};           // phase 2 plane normal
  int drop_axis_ = 2;           // phase 2 projection axis
  std::vector<Face> faces_;     // phase 3
  std::vector<int> live_;
  std::unordered_map<std::uint64_t, int> edge_owner_;
};

}  // namespace thinlim
