#pragma once

#include <cstdint>
#include <vector>

#include "thinlim/density.hpp"
#include "thinlim/geometry.hpp"
#include "thinlim/mesh.hpp"

namespace thinlim {

/// Two-phase laminate: gradient z1 (vertical slope zeta1) on a lambda
/// fraction of n stripes orthogonal to z1 - z2, z2 (zeta2) on the rest.
struct LaminateSpec {
  Vec2 z;
  Vec2 z1;
  Vec2 z2;
  double lambda = 0.5;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  std::size_t layers = 1;

  /// lambda in [0,1], layers >= 1, lambda z1 + (1 - lambda) z2 = z to 1e-12.
  void validate() const;
};

/// u = z.x_alpha + eps * zeta * x3 at the nodes of a 3D mesh.
NodalField vertical_recovery(const SimplicialMesh& mesh, Vec2 z, double zeta, double epsilon);

struct LaminateField {
  NodalField u;
  /// Per cell: 1 or 2 for pure phases, 0 for transition cells.
  std::vector<std::uint8_t> phase;
  /// Cells whose centroid lies in phase 1.
  double phase1_fraction = 0.0;
};

/// Laminate recovery field on a 2D or 3D mesh (the vertical term is dropped in 2D).
/// Throws ValidationError when a stripe is narrower than two cells.
LaminateField laminate_recovery(const LaminateSpec& spec, double epsilon, const SimplicialMesh& mesh);

/// max over the pure-phase cells of W(grad_alpha u, grad_3 u / eps).
double phase_energy(const Density& W, const SimplicialMesh& mesh, const LaminateField& lam, double epsilon);

/// Largest nodal |u - u_z|.
double max_deviation(const SimplicialMesh& mesh, const NodalField& u, Vec2 z);

struct MollifiedField {
  NodalField u;
  ConvexPolygon domain;                   ///< erode_domain(omega, eta)
  std::vector<std::uint8_t> active_vertex; ///< vertex lies in the eroded domain
  std::vector<std::uint8_t> active_cell;   ///< all vertices active
  std::vector<double> weights;            ///< normalised stencil weights
};

/// Discrete convolution with the bump (1 - r^2/eta^2)^2, r < eta, on a
/// structured Uniform-pattern rectangle mesh. Inactive vertices keep u.
/// Throws ValidationError for unstructured meshes or eta below two cells,
/// EmptyDomainError when the eroded domain is empty.
MollifiedField mollify(const SimplicialMesh& mesh, const NodalField& u, double eta);

struct MollifyEnergyReport {
  double energy_mollified = 0.0;   ///< int over omega_eta of g(grad u_eta)
  double energy_original = 0.0;    ///< int over omega of g(grad u)
  double energy_on_eroded = 0.0;   ///< int over omega_eta of g(grad u)
  double relative_gap = 0.0;       ///< (mollified - original) / max(original, tiny)
  bool pass = false;
};

/// Convexity screen by midpoint tests on a sample grid of [-radius, radius]^dim.
bool density_is_convex(const Density& g, double radius = 3.0);

/// Throws ValidationError when g fails the convexity screen.
MollifyEnergyReport mollify_energy_check(const Density& g, const SimplicialMesh& mesh, const NodalField& u, double eta,
                                         double tol = 1e-9);

}  // namespace thinlim
