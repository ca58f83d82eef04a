#include "wavebt/simulate.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace wavebt {

double SignalComponent::eval(double t) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::sinusoid:
      return amplitude * std::sin(2.0 * std::numbers::pi * frequency * t + phase);
    case Kind::gaussian_pulse: {
      const double s = (t - center) / width;
      return amplitude * std::exp(-0.5 * s * s);
    }
  }
  return 0.0;
}

double InputSignal::eval(int dof, double t) const {
  if (dof < 0 || static_cast<size_t>(dof) >= per_dof.size()) return 0.0;
  double value = 0.0;
  for (const auto& c : per_dof[dof]) value += c.eval(t);
  return value;
}

Vector InputSignal::eval_all(int dofs, double t) const {
  Vector u(dofs);
  for (int i = 0; i < dofs; ++i) u(i) = eval(i, t);
  return u;
}

void SimulationConfig::validate() const {
  if (!(dt > 0.0)) throw ValidationError("SimulationConfig: dt must be positive");
  if (!(t_end >= dt)) throw ValidationError("SimulationConfig: t_end must be at least dt");
  if (!(solver_tol > 0.0)) throw ValidationError("SimulationConfig: solver_tol must be positive");
  if (snapshot_every < 0) throw ValidationError("SimulationConfig: snapshot_every must be nonnegative");
}

int SimulationConfig::steps() const {
  return static_cast<int>(std::llround(t_end / dt));
}

MidpointStepper::MidpointStepper(const WaveBoundarySystem& system, double dt, double tol)
    : system_(&system), dt_(dt), tol_(tol) {
  if (dt == 0.0 || !std::isfinite(dt)) {
    throw ValidationError("MidpointStepper: dt must be nonzero and finite");
  }
  const int n = system.state_dim;
  const Matrix half = (dt / 2.0) * system.m_sys;
  lhs_ = Matrix::Identity(n, n) - half;
  rhs_ = Matrix::Identity(n, n) + half;
  lu_.compute(lhs_);
  if (lu_.rcond() < 1e-14) {
    throw NumericalError(
        "MidpointStepper: implicit matrix is numerically singular for this dt");
  }
}

Vector MidpointStepper::step(const Vector& x, const Vector& u_mid) const {
  Vector rhs = rhs_ * x;
  if (u_mid.size() > 0) rhs += dt_ * (system_->b2 * u_mid);
  Vector next = lu_.solve(rhs);
  const double residual = (lhs_ * next - rhs).norm();
  if (residual > tol_ * (1.0 + rhs.norm())) {
    throw NumericalError("MidpointStepper: linear solve residual exceeds tolerance");
  }
  return next;
}

namespace {

Vector initial_state_vector(const WaveBoundarySystem& system, const InitialState& init) {
  const int n = system.state_dim;
  switch (init.kind) {
    case InitialState::Kind::zero:
      return Vector::Zero(n);
    case InitialState::Kind::random: {
      std::mt19937_64 rng(init.seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      Vector x(n);
      for (int i = 0; i < n; ++i) x(i) = gauss(rng);
      const double e = system.energy(x);
      if (init.energy == 0.0 || e == 0.0) return Vector::Zero(n);
      return x * std::sqrt(init.energy / e);
    }
    case InitialState::Kind::explicit_state: {
      if (init.g0.size() != system.num_cells || init.f0.size() != system.num_faces) {
        throw ValidationError("simulate: explicit initial state has wrong block sizes");
      }
      Vector x(n);
      x.head(system.num_cells) = init.g0;
      x.tail(system.num_faces) = init.f0;
      return x;
    }
  }
  throw ValidationError("simulate: unknown initial state kind");
}

SimulationTrace run(const WaveBoundarySystem& system, const SimulationConfig& config,
                    const std::vector<Vector>* u_override) {
  config.validate();
  const int n_steps = config.steps();
  const int k2 = system.gamma2_dim();
  const bool scattering = system.representation == Representation::scattering;

  if (u_override && static_cast<int>(u_override->size()) < n_steps) {
    throw ValidationError("simulate: midpoint input sequence shorter than the run");
  }

  Vector x = initial_state_vector(system, config.initial);

  // Compatibility of explicit initial data with the input at t = 0; the
  // solution theory requires u(0) = G x0, and we refuse rather than project.
  if (config.initial.kind == InitialState::Kind::explicit_state && k2 > 0 &&
      !u_override) {
    const Vector u0 = config.input.eval_all(k2, 0.0);
    // Impedance input is the co-normal stress; the scattering input is
    // (stress + velocity trace) / sqrt(2).
    Vector expected = system.stress_trace_g2 * x;
    if (scattering) expected = (expected + system.c2 * x) / std::sqrt(2.0);
    if ((u0 - expected).norm() > config.compat_tol * (1.0 + u0.norm() + expected.norm())) {
      throw ValidationError("simulate: initial input is incompatible with the initial state");
    }
  }

  const MidpointStepper stepper(system, config.dt, config.solver_tol);

  SimulationTrace trace;
  trace.representation = system.representation;
  trace.dt = config.dt;
  trace.times.reserve(n_steps + 1);
  trace.energy.reserve(n_steps + 1);
  trace.times.push_back(0.0);
  trace.energy.push_back(system.energy(x));

  const bool want_snapshots = config.snapshot_every > 0;
  auto snapshot = [&](double t, const Vector& state) {
    trace.snapshot_times.push_back(t);
    trace.snapshots_g.push_back(state.head(system.num_cells));
    trace.snapshots_f.push_back(state.tail(system.num_faces));
  };
  if (want_snapshots) snapshot(0.0, x);
  if (!scattering) trace.y_node.push_back(system.c2 * x);

  const double sqrt2 = std::sqrt(2.0);
  for (int step = 0; step < n_steps; ++step) {
    const double t_mid = (step + 0.5) * config.dt;
    const Vector u_mid = u_override ? (*u_override)[step]
                                    : config.input.eval_all(k2, t_mid);
    if (u_mid.size() != k2) {
      throw ValidationError("simulate: midpoint input has wrong dimension");
    }
    const Vector x_next = stepper.step(x, u_mid);
    const Vector x_mid = 0.5 * (x + x_next);

    trace.u_mid.push_back(u_mid);
    if (scattering) {
      trace.y_mid.push_back(u_mid - sqrt2 * (system.c2 * x_mid));
    } else {
      trace.y_mid.push_back(system.c2 * x_mid);
    }
    trace.v1_mid.push_back(system.v1_map * x_mid);
    trace.qi_power_mid.push_back(system.interior_damping_power(
        system.inv_rho.cwiseProduct(x_mid.head(system.num_cells))));

    x = x_next;
    trace.times.push_back((step + 1) * config.dt);
    trace.energy.push_back(system.energy(x));
    if (!scattering) trace.y_node.push_back(system.c2 * x);
    if (want_snapshots && (step + 1) % config.snapshot_every == 0) {
      snapshot((step + 1) * config.dt, x);
    }
  }
  trace.final_state = x;
  return trace;
}

}  // namespace

SimulationTrace simulate(const WaveBoundarySystem& system, const SimulationConfig& config) {
  return run(system, config, nullptr);
}

SimulationTrace simulate(const WaveBoundarySystem& system, const SimulationConfig& config,
                         const std::vector<Vector>& u_mid_sequence) {
  return run(system, config, &u_mid_sequence);
}

AuditReport audit_energy_balance(const SimulationTrace& trace,
                                 const WaveBoundarySystem& system, double tol) {
  if (trace.representation != system.representation) {
    throw ValidationError("audit_energy_balance: trace and system representations differ");
  }
  const int n_steps = trace.steps();
  if (static_cast<int>(trace.energy.size()) != n_steps + 1) {
    throw ValidationError("audit_energy_balance: inconsistent trace lengths");
  }
  AuditReport report;
  report.e_initial = trace.energy.front();
  report.e_final = trace.energy.back();

  double max_u_sq = 0.0;
  for (const auto& u : trace.u_mid) {
    if (u.size() > 0) max_u_sq = std::max(max_u_sq, system.gamma2_inner(u, u));
  }
  for (double e : trace.energy) report.e_max = std::max(report.e_max, e);
  report.scale = report.e_initial + max_u_sq;
  const double bound = tol * std::max(report.scale, 1e-30);

  double signed_total = 0.0;
  for (int i = 0; i < n_steps; ++i) {
    const double de = trace.energy[i + 1] - trace.energy[i];
    const double dt = trace.dt;
    double supply = 0.0;
    if (trace.u_mid[i].size() > 0) {
      if (trace.representation == Representation::scattering) {
        supply = dt * (system.gamma2_inner(trace.u_mid[i], trace.u_mid[i]) -
                       system.gamma2_inner(trace.y_mid[i], trace.y_mid[i]));
      } else {
        supply = 2.0 * dt * system.gamma2_inner(trace.u_mid[i], trace.y_mid[i]);
      }
    } else if (trace.representation == Representation::scattering) {
      supply = 0.0;
    }
    const double damping = 2.0 * dt * system.gamma1_damping_power(trace.v1_mid[i]) +
                           2.0 * dt * trace.qi_power_mid[i];
    const double residual = de - supply + damping;
    report.per_step_max_residual = std::max(report.per_step_max_residual, std::abs(residual));
    if (de - supply > bound) ++report.passivity_violations;
    report.total_supply += supply;
    report.total_dissipation += damping;
    signed_total += residual;
  }
  report.cumulative_residual = std::abs(signed_total);
  return report;
}

}  // namespace wavebt
