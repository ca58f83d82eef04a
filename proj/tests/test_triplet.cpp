#include "wavebt/triplet.hpp"

#include "wavebt/certifier.hpp"
#include "wavebt/material.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace wavebt;

namespace {

constexpr auto g0 = BoundaryLabel::gamma0;
constexpr auto g1 = BoundaryLabel::gamma1;
constexpr auto g2 = BoundaryLabel::gamma2;

// Entrywise check of M_cell Div + Grad^T M_face = T0^T M_bdry Tperp.
double duality_defect(const DiscreteTriplet& t) {
  const Matrix lhs = t.cell_weights.asDiagonal() * t.div +
                     t.grad.transpose() * t.face_weights.asDiagonal();
  const Matrix rhs = t.trace_dirichlet.transpose() *
                     t.boundary_weights.asDiagonal() * t.trace_normal;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("1-D builders") {
  SUBCASE("single cell, unit length: exact telescoping") {
    const auto t = build_staggered_1d(1, 1.0, {g2, g2});
    CHECK(t.num_cells() == 1);
    CHECK(t.num_faces() == 2);
    CHECK(t.boundary_dim() == 2);
    CHECK(verify_green_identity(t, 50, 1) == 0.0);
    CHECK(duality_defect(t) == 0.0);
  }
  SUBCASE("constants annihilate both volume terms and the boundary pairing") {
    const auto t = build_staggered_1d(4, 1.0, {g2, g2});
    const Vector f = Vector::Constant(t.num_faces(), 3.25);
    const Vector g = Vector::Constant(t.num_cells(), -1.5);
    CHECK((t.div * f).norm() == 0.0);
    const double pairing = (t.trace_normal * f)
                               .dot(t.boundary_weights.cwiseProduct(t.trace_dirichlet * g));
    CHECK(pairing == 0.0);
  }
  SUBCASE("random fields on N = 32") {
    const auto t = build_staggered_1d(32, 2.0, {g0, g2});
    CHECK(verify_green_identity(t, 100, 7) <= 1e-13);
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(build_staggered_1d(0, 1.0, {g0, g0}), ValidationError);
    CHECK_THROWS_AS(build_staggered_1d(4, -1.0, {g0, g0}), ValidationError);
  }
}

TEST_CASE("2-D builders") {
  SUBCASE("unit cell: four boundary dofs, surjective normal trace") {
    const auto t = build_staggered_2d(1, 1, 1.0, 1.0, {g2, g2, g2, g2});
    CHECK(t.boundary_dim() == 4);
    CHECK(numeric_rank(t.trace_normal) == 4);
    CHECK(verify_green_identity(t, 50, 3) <= 1e-15);
  }
  SUBCASE("constants on 8x8") {
    const auto t = build_staggered_2d(8, 8, 1.0, 1.0, {g2, g2, g2, g2});
    Vector f = Vector::Constant(t.num_faces(), 0.75);
    Vector g = Vector::Constant(t.num_cells(), 2.0);
    const double lhs = (t.div * f).dot(t.cell_weights.cwiseProduct(g)) +
                       f.dot(t.face_weights.cwiseProduct(t.grad * g));
    const double rhs = (t.trace_normal * f)
                           .dot(t.boundary_weights.cwiseProduct(t.trace_dirichlet * g));
    CHECK(lhs == 0.0);
    CHECK(rhs == 0.0);
  }
  SUBCASE("random fields on 16x12 with mixed partition") {
    const auto t = build_staggered_2d(16, 12, 1.0, 0.75, {g0, g1, g0, g2});
    CHECK(verify_green_identity(t, 100, 11) <= 1e-13);
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(build_staggered_2d(0, 4, 1.0, 1.0, {g0, g0, g0, g0}), ValidationError);
    CHECK_THROWS_AS(build_staggered_2d(4, 4, 1.0, 0.0, {g0, g0, g0, g0}), ValidationError);
  }
}

TEST_CASE("discrete duality holds entrywise exactly") {
  CHECK(duality_defect(build_staggered_1d(4, 1.0, {g0, g2})) == 0.0);
  CHECK(duality_defect(build_staggered_1d(64, 1.0, {g1, g2})) == 0.0);
  CHECK(duality_defect(build_staggered_1d(7, 0.3, {g0, g1})) == 0.0);
  CHECK(duality_defect(build_staggered_2d(8, 8, 1.0, 1.0, {g0, g1, g2, g0})) == 0.0);
  CHECK(duality_defect(build_staggered_2d(16, 12, 1.0, 0.75, {g2, g2, g0, g1})) == 0.0);
  CHECK(duality_defect(build_staggered_2d(5, 3, 0.7, 1.1, {g1, g2, g1, g2})) == 0.0);
}

TEST_CASE("boundary bookkeeping") {
  const auto t = build_staggered_2d(3, 2, 1.0, 1.0, {g0, g1, g2, g2});
  // left edge eliminated; right edge 2 dofs on gamma1; bottom 3 + top 3 on gamma2.
  CHECK(t.boundary_dim() == 8);
  CHECK(t.gamma1_dofs.size() == 2);
  CHECK(t.gamma2_dofs.size() == 6);
  int labeled = 0;
  double measure = 0.0;
  for (const auto& bf : t.geometry.boundary_faces) {
    ++labeled;
    measure += bf.weight;
  }
  CHECK(labeled == 2 * 2 + 2 * 3);  // every boundary face labeled exactly once
  CHECK(measure == doctest::Approx(2.0 * 1.0 + 2.0 * 1.0).epsilon(1e-12));
}

TEST_CASE("green identity respects the zero-Dirichlet subspace") {
  const auto t = build_staggered_1d(16, 1.0, {g0, g2});
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const Vector f = testutil::random_vector(rng, t.num_faces());
    Vector g = testutil::random_vector(rng, t.num_cells());
    // Zero the Dirichlet values seen by the retained trace.
    for (int d = 0; d < t.boundary_dim(); ++d) {
      for (int c = 0; c < t.num_cells(); ++c) {
        if (t.trace_dirichlet(d, c) != 0.0) g(c) = 0.0;
      }
    }
    const double lhs = (t.div * f).dot(t.cell_weights.cwiseProduct(g)) +
                       f.dot(t.face_weights.cwiseProduct(t.grad * g));
    CHECK(std::abs(lhs) <= 1e-13 * (1.0 + f.norm() * g.norm()));
  }
}

TEST_CASE("restricted generator") {
  SUBCASE("zero normal trace: spectrum on the imaginary axis") {
    const auto t = build_staggered_1d(4, 1.0, {g2, g2});
    const auto mat = MaterialField::constant(t, 1.0, 1.0);
    const auto ham = HamiltonianOperator::make(t, mat);
    const int m = t.boundary_dim();
    const Matrix a = restrict_generator(t, ham, {Matrix::Zero(m, m), Matrix::Identity(m, m)});
    Eigen::EigenSolver<Matrix> es(a);
    CHECK(es.eigenvalues().real().cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("matched damping: spectrum in the closed left half-plane") {
    const auto t = build_staggered_1d(8, 1.0, {g2, g2});
    std::mt19937_64 rng(13);
    Vector rho(t.num_cells()), tc(t.num_faces());
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    for (auto& r : rho.reshaped()) r = unif(rng);
    for (auto& c : tc.reshaped()) c = unif(rng);
    const MaterialField mat{rho, tc, 1e-8};
    const auto ham = HamiltonianOperator::make(t, mat);
    const int m = t.boundary_dim();
    const Matrix a = restrict_generator(t, ham, {Matrix::Identity(m, m), Matrix::Identity(m, m)});
    Eigen::EigenSolver<Matrix> es(a);
    CHECK(es.eigenvalues().real().maxCoeff() <= 1e-10);
  }
  SUBCASE("single cell with zero normal trace reduces to one frozen mode") {
    const auto t = build_staggered_1d(1, 1.0, {g2, g2});
    const auto mat = MaterialField::constant(t, 1.0, 1.0);
    const auto ham = HamiltonianOperator::make(t, mat);
    const Matrix a = restrict_generator(t, ham, {Matrix::Zero(2, 2), Matrix::Identity(2, 2)});
    REQUIRE(a.rows() == 1);
    CHECK(a.cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("both traces zeroed recovers the skew minimal operator") {
    const auto t = build_staggered_1d(8, 1.0, {g0, g2});
    std::mt19937_64 rng(29);
    Vector rho(t.num_cells()), tc(t.num_faces());
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    for (auto& r : rho.reshaped()) r = unif(rng);
    for (auto& c : tc.reshaped()) c = unif(rng);
    const MaterialField mat{rho, tc, 1e-8};
    const auto ham = HamiltonianOperator::make(t, mat);
    const int m = t.boundary_dim();
    Matrix w1(2 * m, m), w2(2 * m, m);
    w1 << Matrix::Identity(m, m), Matrix::Zero(m, m);
    w2 << Matrix::Zero(m, m), Matrix::Identity(m, m);
    const Matrix a = restrict_generator(t, ham, {w1, w2});
    CHECK(a.rows() == t.state_dim() - 2 * m);
    CHECK((a + a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + a.norm()));
  }
  SUBCASE("over-constrained state space collapses to 0x0") {
    const auto t = build_staggered_1d(1, 1.0, {g2, g2});
    const auto mat = MaterialField::constant(t, 1.0, 1.0);
    const auto ham = HamiltonianOperator::make(t, mat);
    // Zero both traces on a single-cell mesh: T0 v = 0 already kills the one
    // velocity dof, Tperp sigma = 0 kills both strain dofs.
    Matrix w1(4, 2), w2(4, 2);
    w1 << Matrix::Identity(2, 2), Matrix::Zero(2, 2);
    w2 << Matrix::Zero(2, 2), Matrix::Identity(2, 2);
    const Matrix a = restrict_generator(t, ham, {w1, w2});
    CHECK(a.rows() == 0);
    CHECK(a.cols() == 0);
  }
  SUBCASE("dimension mismatch") {
    const auto t = build_staggered_1d(4, 1.0, {g0, g2});
    const auto mat = MaterialField::constant(t, 1.0, 1.0);
    const auto ham = HamiltonianOperator::make(t, mat);
    CHECK_THROWS_AS(
        restrict_generator(t, ham, {Matrix::Zero(2, 2), Matrix::Identity(2, 2)}),
        ValidationError);
  }
}
