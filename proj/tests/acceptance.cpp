// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include "wavebt/certifier.hpp"
#include "wavebt/config.hpp"
#include "wavebt/io.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

using namespace wavebt;

namespace {

constexpr auto g0 = BoundaryLabel::gamma0;
constexpr auto g1 = BoundaryLabel::gamma1;
constexpr auto g2 = BoundaryLabel::gamma2;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Matrix random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = gauss(rng);
  return m;
}

Matrix random_orthogonal(std::mt19937_64& rng, int m) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, m, m));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

std::vector<DiscreteTriplet> acceptance_triplets() {
  std::vector<DiscreteTriplet> triplets;
  triplets.push_back(build_staggered_1d(1, 1.0, {g2, g2}));
  triplets.push_back(build_staggered_1d(4, 1.0, {g0, g1}));
  triplets.push_back(build_staggered_1d(64, 1.0, {g0, g2}));
  triplets.push_back(build_staggered_2d(1, 1, 1.0, 1.0, {g2, g2, g2, g2}));
  triplets.push_back(build_staggered_2d(8, 8, 1.0, 1.0, {g0, g1, g2, g0}));
  triplets.push_back(build_staggered_2d(16, 12, 1.0, 0.75, {g2, g2, g0, g1}));
  triplets.push_back(build_staggered_2d(16, 16, 1.0, 1.0, {g0, g0, g0, g0}));
  triplets.push_back(build_staggered_2d(32, 32, 2.0, 1.0, {g0, g1, g0, g2}));
  return triplets;
}

// 1. Green-identity exactness across meshes and partitions.
Outcome criterion_green_identity() {
  Outcome out;
  double worst = 0.0;
  for (const auto& t : acceptance_triplets()) {
    worst = std::max(worst, verify_green_identity(t, 100, 12345));
  }
  out.pass = worst <= 1e-13;
  std::ostringstream os;
  os << "max normalized residual " << worst << " (limit 1e-13)";
  out.detail = os.str();
  return out;
}

// 2. Symmetrized-product PSD iff V contractive, and kernel equality.
Outcome criterion_lemma_equivalence() {
  Outcome out;
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> dims(1, 6);
  int disagreements = 0;
  double worst_gap = 0.0;
  int tested = 0;
  while (tested < 1000) {
    const int m = dims(rng);
    BoundaryConditionSpec spec{random_matrix(rng, m, m), random_matrix(rng, m, m)};
    Eigen::BDCSVD<Matrix> svd(spec.w1 + spec.w2);
    if (svd.singularValues()(m - 1) < 1e-6 * svd.singularValues()(0)) continue;
    ++tested;
    const ContractionSolve solve = build_contraction_V(spec);
    const bool psd = is_psd(symmetrized_product(spec));
    const bool contractive = operator_norm(solve.v) <= 1.0 + 1e-8;
    if (psd != contractive) ++disagreements;
    const BoundaryRelation lhs = kernel_relation(spec);
    const BoundaryRelation rhs = contraction_to_relation(solve.v, 1e9);
    worst_gap = std::max(worst_gap, subspace_gap(lhs.basis(), rhs.basis()));
  }
  out.pass = disagreements == 0 && worst_gap <= 1e-8;
  std::ostringstream os;
  os << disagreements << " disagreements over 1000 specs, max kernel gap " << worst_gap;
  out.detail = os.str();
  return out;
}

// 3. Cayley correspondence is a bijection numerically.
Outcome criterion_cayley_round_trip() {
  Outcome out;
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> dims(1, 6);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_v = 0.0, worst_rel = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int m = dims(rng);
    Matrix v = random_matrix(rng, m, m);
    const double n = operator_norm(v);
    if (n > 0) v *= unif(rng) / n;
    const BoundaryRelation c = contraction_to_relation(v);
    const Matrix v_back = relation_to_contraction(c);
    worst_v = std::max(worst_v, (v_back - v).cwiseAbs().maxCoeff());
    const BoundaryRelation c_back = contraction_to_relation(v_back);
    worst_rel = std::max(worst_rel, subspace_gap(c.basis(), c_back.basis()));
  }
  out.pass = worst_v <= 1e-8 && worst_rel <= 1e-8;
  std::ostringstream os;
  os << "max |V - V'| " << worst_v << ", max relation gap " << worst_rel;
  out.detail = os.str();
  return out;
}

// 4. Algebraic verdicts match the weighted exponential oracle.
Outcome criterion_verdict_oracle() {
  Outcome out;
  const auto triplet = build_staggered_1d(16, 1.0, {g2, g2});
  const int m = triplet.boundary_dim();
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> coeff(0.5, 2.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  int disagreements = 0, unitary_seen = 0, growing_seen = 0;
  double worst_unitary_dev = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    Vector rho(triplet.num_cells()), tc(triplet.num_faces());
    for (int i = 0; i < rho.size(); ++i) rho(i) = coeff(rng);
    for (int i = 0; i < tc.size(); ++i) tc(i) = coeff(rng);
    const MaterialField material{rho, tc, 1e-8};
    const auto ham = HamiltonianOperator::make(triplet, material);

    BoundaryConditionSpec spec{Matrix(), Matrix()};
    const double mode = unif(rng);
    if (mode < 0.15) {
      const Matrix u = random_orthogonal(rng, m);
      spec = {Matrix::Identity(m, m) + u, Matrix::Identity(m, m) - u};
    } else if (mode < 0.30) {
      Matrix v = random_matrix(rng, m, m);
      const double n = operator_norm(v);
      if (n > 0) v *= 0.9 * unif(rng) / n;
      spec = {Matrix::Identity(m, m) + v, Matrix::Identity(m, m) - v};
    } else {
      Matrix w1 = random_matrix(rng, m, m), w2 = random_matrix(rng, m, m);
      Eigen::BDCSVD<Matrix> svd(w1 + w2);
      if (svd.singularValues()(m - 1) < 1e-6 * svd.singularValues()(0)) {
        --trial;
        continue;
      }
      spec = {w1, w2};
    }

    const OracleReport report = certify_against_oracle(spec, triplet, ham);
    if (!report.verdict_agrees) ++disagreements;
    if (report.verdict.classification == Generation::unitary_group) {
      ++unitary_seen;
      worst_unitary_dev = std::max(worst_unitary_dev, report.unitary_deviation);
    }
    if (!report.expected_contractive) ++growing_seen;
  }
  out.pass = disagreements == 0 && unitary_seen > 0 && growing_seen > 0 &&
             worst_unitary_dev <= 1e-8;
  std::ostringstream os;
  os << disagreements << " disagreements over 200 specs (" << unitary_seen
     << " unitary, " << growing_seen << " non-contractive), max unitary deviation "
     << worst_unitary_dev;
  out.detail = os.str();
  return out;
}

// 5. Conservation and exact time reversal for the all-gamma0 wave.
Outcome criterion_conservation() {
  Outcome out;
  std::ostringstream os;
  const auto run = [&](const DiscreteTriplet& t, const char* name) {
    const auto material = MaterialField::constant(t, 1.0, 1.0);
    const auto sys = assemble_impedance_system(t, material, {});
    SimulationConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;  // 1000 midpoint steps
    cfg.initial.kind = InitialState::Kind::random;
    cfg.initial.seed = 5;
    cfg.initial.energy = 1.0;
    const auto trace = simulate(sys, cfg);
    const double e0 = trace.energy.front();
    double drift = 0.0;
    for (double e : trace.energy) drift = std::max(drift, std::abs(e - e0));

    MidpointStepper reverse(sys, -cfg.dt, cfg.solver_tol);
    Vector x = trace.final_state;
    for (int i = 0; i < trace.steps(); ++i) x = reverse.step(x, Vector(0));
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector x0(sys.state_dim);
    for (int i = 0; i < sys.state_dim; ++i) x0(i) = gauss(rng);
    x0 *= std::sqrt(1.0 / sys.energy(x0));
    const double reversal = (x - x0).norm() / x0.norm();

    os << name << ": drift " << drift / e0 << ", reversal " << reversal << "; ";
    if (drift > 1e-10 * e0 || reversal > 1e-9) out.pass = false;
  };
  run(build_staggered_1d(64, 1.0, {g0, g0}), "1-D N=64");
  run(build_staggered_2d(16, 16, 1.0, 1.0, {g0, g0, g0, g0}), "2-D 16x16");
  out.detail = os.str() + "(limits 1e-10, 1e-9)";
  return out;
}

// 6. Per-step impedance power balance across the damping zoo.
Outcome criterion_impedance_balance() {
  Outcome out;
  std::ostringstream os;
  double worst = 0.0;
  int violations = 0;

  const auto check = [&](const DiscreteTriplet& t, DampingSpec damping, bool driven) {
    const auto material = MaterialField::constant(t, 1.0, 1.0);
    const auto sys = assemble_impedance_system(t, material, damping);
    SimulationConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 1.0;
    cfg.initial.kind = InitialState::Kind::random;
    cfg.initial.seed = 66;
    cfg.initial.energy = 1.0;
    if (driven) {
      cfg.input.per_dof.assign(static_cast<size_t>(sys.gamma2_dim()), {});
      cfg.input.per_dof[0] = {SignalComponent{SignalComponent::Kind::sinusoid, 1.0, 2.0, 0.3, 0, 1}};
    }
    const auto trace = simulate(sys, cfg);
    const auto audit = audit_energy_balance(trace, sys);
    worst = std::max(worst, audit.per_step_max_residual / audit.scale);
    violations += audit.passivity_violations;
  };

  // gamma0 | gamma1 with Qb = 0 and Qb = 1.
  check(build_staggered_1d(32, 1.0, {g0, g1}), {}, false);
  {
    DampingSpec d;
    d.qb = Matrix::Identity(1, 1);
    check(build_staggered_1d(32, 1.0, {g0, g1}), d, false);
  }
  // gamma2 sinusoid drive against a damped gamma1 end.
  {
    DampingSpec d;
    d.qb = Matrix::Identity(1, 1);
    check(build_staggered_1d(32, 1.0, {g2, g1}), d, true);
  }
  // Two-dof gamma1 variant with a skew 2x2 block.
  {
    DampingSpec d;
    Matrix qb(2, 2);
    qb << 0, 1.5, -1.5, 0;
    d.qb = qb;
    check(build_staggered_1d(32, 1.0, {g1, g1}), d, false);
  }
  out.pass = worst <= 1e-10 && violations == 0;
  os << "max relative per-step residual " << worst << ", passivity violations "
     << violations;
  out.detail = os.str();
  return out;
}

// 7. Scattering balance: equality iff Qb is skew-adjoint (Qi = 0).
Outcome criterion_conservativity_dichotomy() {
  Outcome out;
  std::ostringstream os;
  const auto t = build_staggered_2d(8, 8, 1.0, 1.0, {g2, g1, g0, g0});
  const auto material = MaterialField::constant(t, 1.0, 1.0);

  SimulationConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 1.0;
  cfg.input.per_dof.assign(8, {});
  for (int d = 0; d < 8; ++d) {
    cfg.input.per_dof[static_cast<size_t>(d)] = {
        SignalComponent{SignalComponent::Kind::gaussian_pulse, 1.0, 0, 0, 0.25, 0.06}};
  }

  DampingSpec skew_damping;
  Matrix qb = Matrix::Zero(8, 8);
  for (int i = 0; i + 1 < 8; i += 2) {
    qb(i, i + 1) = 1.0;
    qb(i + 1, i) = -1.0;
  }
  skew_damping.qb = qb;
  const auto skew_sys =
      assemble_scattering_system(assemble_impedance_system(t, material, skew_damping));
  const auto skew_trace = simulate(skew_sys, cfg);
  const auto skew_audit = audit_energy_balance(skew_trace, skew_sys);
  const bool skew_ok = skew_sys.qb_skew_adjoint &&
                       skew_audit.cumulative_residual <= 1e-9 * std::max(skew_audit.e_max, 1.0) &&
                       skew_audit.total_dissipation == 0.0;

  DampingSpec identity_damping;
  identity_damping.qb = Matrix::Identity(8, 8);
  const auto diss_sys = assemble_scattering_system(
      assemble_impedance_system(t, material, identity_damping));
  const auto diss_trace = simulate(diss_sys, cfg);
  const auto diss_audit = audit_energy_balance(diss_trace, diss_sys);
  double v1_peak = 0.0;
  for (const auto& v1 : diss_trace.v1_mid) v1_peak = std::max(v1_peak, v1.cwiseAbs().maxCoeff());
  const double gap = (diss_audit.e_initial + diss_audit.total_supply) - diss_audit.e_final;
  const bool diss_ok = v1_peak > 1e-6 && diss_audit.total_dissipation > 1e-9 &&
                       std::abs(gap - diss_audit.total_dissipation) <=
                           1e-9 * std::max(diss_audit.e_max, 1.0);

  out.pass = skew_ok && diss_ok;
  os << "skew: cumulative residual " << skew_audit.cumulative_residual
     << "; Qb=I: dissipation " << diss_audit.total_dissipation << " matches gap to "
     << std::abs(gap - diss_audit.total_dissipation) << ", peak |v1| " << v1_peak;
  out.detail = os.str();
  return out;
}

// 8. Transformed impedance signals reproduce the scattering run exactly.
Outcome criterion_representation_consistency() {
  Outcome out;
  const auto t = build_staggered_1d(32, 1.0, {g0, g2});
  const auto material = MaterialField::constant(t, 1.0, 1.0);
  const auto imp = assemble_impedance_system(t, material, {});
  const auto scat = assemble_scattering_system(imp);

  SimulationConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.input.per_dof = {{SignalComponent{SignalComponent::Kind::sinusoid, 1.0, 1.5, 0, 0, 1}}};
  const auto trace_imp = simulate(imp, cfg);

  std::vector<Vector> us(static_cast<size_t>(trace_imp.steps()));
  for (int n = 0; n < trace_imp.steps(); ++n) {
    us[static_cast<size_t>(n)] =
        external_cayley_signals(trace_imp.u_mid[n], trace_imp.y_mid[n]).first;
  }
  const auto trace_scat = simulate(scat, cfg, us);

  double signal_err = 0.0;
  for (int n = 0; n < trace_imp.steps(); ++n) {
    const auto [eu, ey] = external_cayley_signals(trace_imp.u_mid[n], trace_imp.y_mid[n]);
    signal_err = std::max(signal_err, (trace_scat.y_mid[n] - ey).cwiseAbs().maxCoeff());
    const auto [bu, by] = external_cayley_signals(trace_scat.u_mid[n], trace_scat.y_mid[n]);
    signal_err = std::max(signal_err, (bu - trace_imp.u_mid[n]).cwiseAbs().maxCoeff());
    signal_err = std::max(signal_err, (by - trace_imp.y_mid[n]).cwiseAbs().maxCoeff());
  }
  const double state_err = (trace_scat.final_state - trace_imp.final_state).norm() /
                           (1.0 + trace_imp.final_state.norm());
  out.pass = signal_err <= 1e-10 && state_err <= 1e-10;
  std::ostringstream os;
  os << "signal error " << signal_err << ", state error " << state_err << " (limit 1e-10)";
  out.detail = os.str();
  return out;
}

// 9. Strain consistency of the reconstructed displacement is O(dt^2).
Outcome criterion_displacement_reconstruction() {
  Outcome out;
  const int n = 32;
  const auto t = build_staggered_1d(n, 1.0, {g0, g0});
  const auto material = MaterialField::constant(t, 1.0, 1.0);
  const auto sys = assemble_impedance_system(t, material, {});

  Vector z0(n);
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) z0(i) = std::sin(std::numbers::pi * (i + 0.5) * h);

  const auto residual_at = [&](double dt) {
    SimulationConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.512;
    cfg.snapshot_every = 1;
    cfg.initial.kind = InitialState::Kind::explicit_state;
    cfg.initial.g0 = Vector::Zero(n);          // standing start: w0 = 0
    cfg.initial.f0 = t.grad * z0;              // strain consistent with z0
    const auto trace = simulate(sys, cfg);
    const auto series = reconstruct_displacement(trace, z0, material);
    double worst = 0.0;
    for (size_t k = 0; k < series.z.size(); ++k) {
      const Vector f_sim = trace.snapshots_f[2 * k];
      worst = std::max(worst, (t.grad * series.z[k] - f_sim).norm());
    }
    return worst;
  };

  const double r1 = residual_at(4e-3);
  const double r2 = residual_at(2e-3);
  const double r3 = residual_at(1e-3);
  const double ratio12 = r1 / r2;
  const double ratio23 = r2 / r3;
  out.pass = std::abs(ratio12 - 4.0) <= 0.3 && std::abs(ratio23 - 4.0) <= 0.3;
  std::ostringstream os;
  os << "residuals " << r1 << " / " << r2 << " / " << r3 << ", ratios " << ratio12
     << ", " << ratio23 << " (target 4.0 +/- 0.3)";
  out.detail = os.str();
  return out;
}

// 10. Discrete duality: exact zero off the boundary trace coupling.
Outcome criterion_discrete_duality() {
  Outcome out;
  double worst_full = 0.0, worst_kernel = 0.0;
  for (const auto& t : acceptance_triplets()) {
    const Matrix defect = t.cell_weights.asDiagonal() * t.div +
                          t.grad.transpose() * t.face_weights.asDiagonal() -
                          t.trace_dirichlet.transpose() *
                              t.boundary_weights.asDiagonal() * t.trace_normal;
    worst_full = std::max(worst_full, defect.cwiseAbs().maxCoeff());

    // Restricted to the zero-normal-trace subspace the sum itself vanishes.
    const Matrix sum = t.cell_weights.asDiagonal() * t.div +
                       t.grad.transpose() * t.face_weights.asDiagonal();
    std::vector<bool> retained(static_cast<size_t>(t.num_faces()), false);
    for (const auto& bf : t.geometry.boundary_faces) {
      if (bf.dof >= 0) retained[static_cast<size_t>(bf.face_index)] = true;
    }
    for (int j = 0; j < t.num_faces(); ++j) {
      if (retained[static_cast<size_t>(j)]) continue;
      worst_kernel = std::max(worst_kernel, sum.col(j).cwiseAbs().maxCoeff());
    }
  }
  out.pass = worst_full == 0.0 && worst_kernel == 0.0;
  std::ostringstream os;
  os << "max defect vs trace coupling " << worst_full
     << ", max entry on zero-trace subspace " << worst_kernel << " (must be exactly 0)";
  out.detail = os.str();
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"green identity exactness", criterion_green_identity},
      {"sum/difference equivalence fuzz", criterion_lemma_equivalence},
      {"Cayley round trip", criterion_cayley_round_trip},
      {"verdict vs exponential oracle", criterion_verdict_oracle},
      {"conservation and time reversal", criterion_conservation},
      {"impedance power balance", criterion_impedance_balance},
      {"conservativity dichotomy", criterion_conservativity_dichotomy},
      {"impedance/scattering consistency", criterion_representation_consistency},
      {"displacement reconstruction order", criterion_displacement_reconstruction},
      {"discrete duality", criterion_discrete_duality},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %zu: %s — %s (%.2fs)\n", outcome.pass ? "PASS" : "FAIL",
                i + 1, criteria[i].name, outcome.detail.c_str(), seconds);
    if (!outcome.pass) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures;
}
