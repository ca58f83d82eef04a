#pragma once

#include "wavebt/linalg.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace wavebt {

class HamiltonianOperator;
struct BoundaryConditionSpec;

enum class BoundaryLabel { gamma0, gamma1, gamma2 };

const char* to_string(BoundaryLabel label);
BoundaryLabel boundary_label_from_string(const std::string& s);

/// One boundary face of the staggered mesh. Faces labeled gamma0 carry the
/// built-in zero-velocity condition and do not appear in the boundary space;
/// gamma1/gamma2 faces each own one retained boundary dof.
struct BoundaryFace {
  int face_index = -1;      // global face numbering
  int cell_index = -1;      // adjacent cell
  BoundaryLabel label = BoundaryLabel::gamma0;
  double normal_sign = 0.0; // outward normal component along the face axis
  double weight = 0.0;      // surface quadrature weight
  int dof = -1;             // retained boundary dof index, -1 on gamma0
};

struct DiscreteGeometry {
  int dim = 1;
  std::array<double, 2> extents{1.0, 1.0};
  std::array<int, 2> cells{1, 1};
  std::array<double, 2> spacing{1.0, 1.0};
  std::vector<BoundaryFace> boundary_faces;  // all of them, gamma0 included
};

/// Mimetic (div, grad) pair with diagonal volume/face/boundary weights and
/// one-sided trace maps, built so that the summation-by-parts identity
///   (Div f)^T M_cell g + f^T M_face (Grad g) = (Tperp f)^T M_bdry (T0 g)
/// holds for all vectors f, g, and as a matrix identity
///   M_cell Div + Grad^T M_face = T0^T M_bdry Tperp
/// holds entrywise in floating point.
struct DiscreteTriplet {
  DiscreteGeometry geometry;

  Matrix div;    // cells x faces
  Matrix grad;   // faces x cells
  Vector cell_weights;      // M_cell diagonal
  Vector face_weights;      // M_face diagonal
  Matrix trace_dirichlet;   // T0: boundary dofs x cells (adjacent-cell values)
  Matrix trace_normal;      // Tperp: boundary dofs x faces (nu-weighted)
  Vector boundary_weights;  // M_bdry diagonal, retained dofs only

  std::vector<int> gamma1_dofs;  // retained dof indices on gamma1
  std::vector<int> gamma2_dofs;  // retained dof indices on gamma2

  int num_cells() const { return static_cast<int>(div.rows()); }
  int num_faces() const { return static_cast<int>(div.cols()); }
  int state_dim() const { return num_cells() + num_faces(); }
  int boundary_dim() const { return static_cast<int>(trace_normal.rows()); }
};

/// 1-D interval [0, length] with cells velocity dofs and cells+1 strain dofs.
/// ends = {left label, right label}.
DiscreteTriplet build_staggered_1d(int cells, double length,
                                   std::array<BoundaryLabel, 2> ends);

/// 2-D rectangle [0,lx] x [0,ly], MAC layout: scalar dofs at cell centers,
/// vector dofs on faces. edges = {left, right, bottom, top} labels.
DiscreteTriplet build_staggered_2d(int nx, int ny, double lx, double ly,
                                   std::array<BoundaryLabel, 4> edges);

/// Max over random trials of |lhs - rhs| / (1 + ||f|| ||g||) for the Green
/// identity; deterministic for a given seed.
double verify_green_identity(const DiscreteTriplet& triplet, int trials,
                             std::uint64_t seed);

/// Representation of S*H on an H-orthonormal basis of the boundary-condition
/// nullspace {x : W1 B0(Hx) + W2 Bperp(Hx) = 0}. Returns a 0 x 0 matrix when
/// the constraints wipe out the whole state space.
Matrix restrict_generator(const DiscreteTriplet& triplet,
                          const HamiltonianOperator& h,
                          const BoundaryConditionSpec& spec);

}  // namespace wavebt
