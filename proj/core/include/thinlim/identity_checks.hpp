#pragma once

#include <cstdint>
#include <vector>

#include "thinlim/grid.hpp"

namespace thinlim {

/// Compares two node sets on the same grid.
struct SetComparison {
  std::size_t lhs_count = 0;
  std::size_t rhs_count = 0;
  std::size_t symmetric_difference = 0;
  /// Largest Chebyshev index distance from a node of the symmetric
  /// difference to the other set (0 when the sets agree).
  std::size_t max_layer = 0;
};

SetComparison compare_node_sets(const Grid& grid, const std::vector<std::uint8_t>& lhs,
                                const std::vector<std::uint8_t>& rhs);

struct IndicatorIdentityReport {
  double coercivity = 0.0;
  /// C0 = {(W0)^lc <= M}
  GridFunction lhs;
  /// ((I_C)_0)**
  GridFunction rhs;
  SetComparison sets;
  bool pass = false;
};

/// Zero set of ((I_C)_0)** against {(W0)^lc <= M} for C = {W <= M} on a 3D
/// grid. Passes when the symmetric difference is at most one cell layer.
/// Throws ValidationError when W is not coercive on the grid.
IndicatorIdentityReport check_indicator_identity(const GridFunction& W, double M);

struct CommutationReport {
  GridFunction lhs;  // (W0)^lc
  GridFunction rhs;  // (W^lc)0
  double max_deviation = 0.0;
  /// Same, restricted to nodes outside the truncation guard band.
  double interior_deviation = 0.0;
  double h = 0.0;
};

CommutationReport check_commutation(const GridFunction& W);

struct EqualityRegionReport {
  /// Nodes at least one cell inside hull(dom g).
  double interior_deviation = 0.0;
  /// Nodes outside hull(dom g).
  double exterior_deviation = 0.0;
  /// Remaining nodes (boundary cell layer); informational.
  double boundary_deviation = 0.0;
  std::size_t interior_nodes = 0;
  std::size_t exterior_nodes = 0;
};

/// co g against g** away from the relative boundary of hull(dom g).
EqualityRegionReport check_envelope_equality_region(const GridFunction& g);

struct DomainIdentityReport {
  /// dom(project_inf f) equals the projection of dom f as node sets.
  bool projection_exact = false;
  /// Projected hull nodes missing from dom((f0)**).
  std::size_t missing_from_biconjugate = 0;
  /// dom((f0)**) nodes farther than one cell from the projected hull.
  std::size_t beyond_one_layer = 0;
};

DomainIdentityReport check_domain_identities(const GridFunction& f);

}  // namespace thinlim
