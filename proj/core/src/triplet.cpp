#include "wavebt/triplet.hpp"

#include "wavebt/certifier.hpp"
#include "wavebt/material.hpp"

#include <random>
#include <string>

namespace wavebt {

const char* to_string(BoundaryLabel label) {
  switch (label) {
    case BoundaryLabel::gamma0: return "gamma0";
    case BoundaryLabel::gamma1: return "gamma1";
    case BoundaryLabel::gamma2: return "gamma2";
  }
  return "unknown";
}

BoundaryLabel boundary_label_from_string(const std::string& s) {
  if (s == "gamma0") return BoundaryLabel::gamma0;
  if (s == "gamma1") return BoundaryLabel::gamma1;
  if (s == "gamma2") return BoundaryLabel::gamma2;
  throw ValidationError("unknown boundary label: " + s);
}

namespace {

// Assigns trace rows and records the face once the matrices exist. The
// boundary quadrature weight is written as the exact product cell_weight *
// |div entry| so that M_cell Div + Grad^T M_face = T0^T M_bdry Tperp is an
// entrywise floating-point identity.
struct BoundaryAssembler {
  DiscreteTriplet& t;
  std::vector<BoundaryFace> faces;
  int next_dof = 0;

  void add(int face, int cell, BoundaryLabel label, double sign, double weight) {
    BoundaryFace bf;
    bf.face_index = face;
    bf.cell_index = cell;
    bf.label = label;
    bf.normal_sign = sign;
    bf.weight = weight;
    if (label != BoundaryLabel::gamma0) {
      bf.dof = next_dof++;
      if (label == BoundaryLabel::gamma1) t.gamma1_dofs.push_back(bf.dof);
      if (label == BoundaryLabel::gamma2) t.gamma2_dofs.push_back(bf.dof);
    }
    faces.push_back(bf);
  }

  void finalize() {
    const int n_cells = t.num_cells();
    const int n_faces = t.num_faces();
    t.trace_dirichlet = Matrix::Zero(next_dof, n_cells);
    t.trace_normal = Matrix::Zero(next_dof, n_faces);
    t.boundary_weights = Vector::Zero(next_dof);
    for (const BoundaryFace& bf : faces) {
      if (bf.dof < 0) continue;
      t.trace_dirichlet(bf.dof, bf.cell_index) = 1.0;
      t.trace_normal(bf.dof, bf.face_index) = bf.normal_sign;
      t.boundary_weights(bf.dof) = bf.weight;
    }
    t.geometry.boundary_faces = std::move(faces);
  }
};

}  // namespace

DiscreteTriplet build_staggered_1d(int cells, double length,
                                   std::array<BoundaryLabel, 2> ends) {
  if (cells < 1) throw ValidationError("build_staggered_1d: need at least one cell");
  if (!(length > 0.0)) throw ValidationError("build_staggered_1d: length must be positive");

  const int n = cells;
  const double h = length / n;
  const double inv_h = 1.0 / h;

  DiscreteTriplet t;
  t.geometry.dim = 1;
  t.geometry.extents = {length, 0.0};
  t.geometry.cells = {n, 1};
  t.geometry.spacing = {h, 0.0};

  t.div = Matrix::Zero(n, n + 1);
  t.grad = Matrix::Zero(n + 1, n);
  t.cell_weights = Vector::Constant(n, h);
  t.face_weights = Vector::Constant(n + 1, h);

  for (int i = 0; i < n; ++i) {
    t.div(i, i) = -inv_h;
    t.div(i, i + 1) = inv_h;
  }
  for (int j = 1; j < n; ++j) {
    t.grad(j, j) = inv_h;
    t.grad(j, j - 1) = -inv_h;
  }
  // Boundary faces carry half dual volume; gamma0 rows hold the one-sided
  // difference against the built-in zero velocity.
  t.face_weights(0) = h / 2.0;
  t.face_weights(n) = h / 2.0;
  if (ends[0] == BoundaryLabel::gamma0) t.grad(0, 0) = 2.0 * inv_h;
  if (ends[1] == BoundaryLabel::gamma0) t.grad(n, n - 1) = -2.0 * inv_h;

  BoundaryAssembler bdry{t};
  const double w = h * inv_h;  // the exact product the duality identity needs
  bdry.add(0, 0, ends[0], -1.0, w);
  bdry.add(n, n - 1, ends[1], +1.0, w);
  bdry.finalize();
  return t;
}

DiscreteTriplet build_staggered_2d(int nx, int ny, double lx, double ly,
                                   std::array<BoundaryLabel, 4> edges) {
  if (nx < 1 || ny < 1) throw ValidationError("build_staggered_2d: need at least one cell per axis");
  if (!(lx > 0.0) || !(ly > 0.0)) throw ValidationError("build_staggered_2d: extents must be positive");

  const double hx = lx / nx;
  const double hy = ly / ny;
  const double inv_hx = 1.0 / hx;
  const double inv_hy = 1.0 / hy;
  const double vol = hx * hy;

  const int n_cells = nx * ny;
  const int n_xfaces = (nx + 1) * ny;
  const int n_yfaces = nx * (ny + 1);
  const int n_faces = n_xfaces + n_yfaces;

  const auto cell = [&](int i, int j) { return j * nx + i; };
  const auto xface = [&](int i, int j) { return j * (nx + 1) + i; };
  const auto yface = [&](int i, int j) { return n_xfaces + j * nx + i; };

  DiscreteTriplet t;
  t.geometry.dim = 2;
  t.geometry.extents = {lx, ly};
  t.geometry.cells = {nx, ny};
  t.geometry.spacing = {hx, hy};

  t.div = Matrix::Zero(n_cells, n_faces);
  t.grad = Matrix::Zero(n_faces, n_cells);
  t.cell_weights = Vector::Constant(n_cells, vol);
  t.face_weights = Vector::Constant(n_faces, vol);

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c = cell(i, j);
      t.div(c, xface(i, j)) = -inv_hx;
      t.div(c, xface(i + 1, j)) = inv_hx;
      t.div(c, yface(i, j)) = -inv_hy;
      t.div(c, yface(i, j + 1)) = inv_hy;
    }
  }
  // Interior gradients: plain two-point differences.
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const int f = xface(i, j);
      t.grad(f, cell(i, j)) = inv_hx;
      t.grad(f, cell(i - 1, j)) = -inv_hx;
    }
  }
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int f = yface(i, j);
      t.grad(f, cell(i, j)) = inv_hy;
      t.grad(f, cell(i, j - 1)) = -inv_hy;
    }
  }

  const auto [left, right, bottom, top] = edges;

  for (int j = 0; j < ny; ++j) {
    t.face_weights(xface(0, j)) = vol / 2.0;
    t.face_weights(xface(nx, j)) = vol / 2.0;
    if (left == BoundaryLabel::gamma0) t.grad(xface(0, j), cell(0, j)) = 2.0 * inv_hx;
    if (right == BoundaryLabel::gamma0) t.grad(xface(nx, j), cell(nx - 1, j)) = -2.0 * inv_hx;
  }
  for (int i = 0; i < nx; ++i) {
    t.face_weights(yface(i, 0)) = vol / 2.0;
    t.face_weights(yface(i, ny)) = vol / 2.0;
    if (bottom == BoundaryLabel::gamma0) t.grad(yface(i, 0), cell(i, 0)) = 2.0 * inv_hy;
    if (top == BoundaryLabel::gamma0) t.grad(yface(i, ny), cell(i, ny - 1)) = -2.0 * inv_hy;
  }

  BoundaryAssembler bdry{t};
  const double wx = vol * inv_hx;  // = hy up to rounding; exact for the identity
  const double wy = vol * inv_hy;
  for (int j = 0; j < ny; ++j) bdry.add(xface(0, j), cell(0, j), left, -1.0, wx);
  for (int j = 0; j < ny; ++j) bdry.add(xface(nx, j), cell(nx - 1, j), right, +1.0, wx);
  for (int i = 0; i < nx; ++i) bdry.add(yface(i, 0), cell(i, 0), bottom, -1.0, wy);
  for (int i = 0; i < nx; ++i) bdry.add(yface(i, ny), cell(i, ny - 1), top, +1.0, wy);
  bdry.finalize();
  return t;
}

double verify_green_identity(const DiscreteTriplet& t, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    Vector f(t.num_faces());
    Vector g(t.num_cells());
    for (auto& x : f.reshaped()) x = gauss(rng);
    for (auto& x : g.reshaped()) x = gauss(rng);
    const double lhs = (t.div * f).dot(t.cell_weights.cwiseProduct(g)) +
                       f.dot(t.face_weights.cwiseProduct(t.grad * g));
    const double rhs = (t.trace_normal * f)
                           .dot(t.boundary_weights.cwiseProduct(t.trace_dirichlet * g));
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + f.norm() * g.norm()));
  }
  return worst;
}

Matrix restrict_generator(const DiscreteTriplet& t, const HamiltonianOperator& h,
                          const BoundaryConditionSpec& spec) {
  spec.validate();
  if (spec.boundary_dim() != t.boundary_dim()) {
    throw ValidationError("restrict_generator: boundary dimension mismatch");
  }
  const int nc = t.num_cells();
  const int nf = t.num_faces();
  const int n = nc + nf;

  const Vector inv_rho = h.h_diag().head(nc);
  const Vector tc = h.h_diag().tail(nf);

  // Constraint rows: W1 * T0 * diag(1/rho) on g, plus W2 * Tperp * diag(T) on f.
  Matrix constraint(spec.target_dim(), n);
  constraint.leftCols(nc) = spec.w1 * t.trace_dirichlet * inv_rho.asDiagonal();
  constraint.rightCols(nf) = spec.w2 * t.trace_normal * tc.asDiagonal();

  const Matrix basis = nullspace(constraint);
  if (basis.cols() == 0) return Matrix(0, 0);

  // H-orthonormalize via the Cholesky factor of the weighted Gram matrix.
  const Vector weight = h.weight_diag();
  const Matrix gram = basis.transpose() * weight.asDiagonal() * basis;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("restrict_generator: weighted Gram matrix not positive definite");
  }
  const Matrix zt = llt.matrixL().solve(Matrix(basis.transpose()));  // Z^T

  Matrix a_full = Matrix::Zero(n, n);
  a_full.topRightCorner(nc, nf) = t.div * tc.asDiagonal();
  a_full.bottomLeftCorner(nf, nc) = t.grad * inv_rho.asDiagonal();

  return zt * weight.asDiagonal() * a_full * zt.transpose();
}

}  // namespace wavebt
