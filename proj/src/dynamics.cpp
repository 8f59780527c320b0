#include "statnet/dynamics.hpp"

#include "statnet/meanfield.hpp"

namespace statnet {

NeuronState NeuronState::from_internal(Vector u, const ActivationFunction& g) {
  NeuronState s;
  s.v = g.apply(u);
  s.u = std::move(u);
  return s;
}

NeuronState NeuronState::from_output(const Vector& v, const ActivationFunction& g) {
  Vector u(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) u(i) = g.g_inverse(g.clamp(v(i)));
  return from_internal(std::move(u), g);
}

IntegratorConfig IntegratorConfig::uniform(std::size_t n, double dt, double tau, std::size_t steps,
                                           std::size_t record_every) {
  IntegratorConfig c;
  c.dt = dt;
  c.tau = Vector::Constant(static_cast<Eigen::Index>(n), tau);
  c.steps = steps;
  c.record_every = record_every;
  return c;
}

void IntegratorConfig::validate(std::size_t n) const {
  if (!(dt > 0.0)) throw std::invalid_argument("IntegratorConfig: dt must be positive");
  if (static_cast<std::size_t>(tau.size()) != n) {
    throw std::invalid_argument("IntegratorConfig: tau has length " + std::to_string(tau.size()) +
                                ", expected " + std::to_string(n));
  }
  for (Eigen::Index i = 0; i < tau.size(); ++i) {
    if (!(tau(i) > 0.0)) throw std::invalid_argument("IntegratorConfig: tau must be positive");
    if (dt / tau(i) > 1.0) {
      throw std::invalid_argument("IntegratorConfig: dt/tau exceeds 1 for unit " + std::to_string(i));
    }
  }
  if (steps < 1) throw std::invalid_argument("IntegratorConfig: steps must be >= 1");
  if (record_every < 1) throw std::invalid_argument("IntegratorConfig: record_every must be >= 1");
}

NeuronState euler_step(const NeuronState& state, const ConnectionMatrix& t, const FieldVector& h,
                       const ActivationFunction& g, const IntegratorConfig& cfg) {
  const std::size_t n = t.size();
  check_field(h, n);
  cfg.validate(n);
  if (static_cast<std::size_t>(state.u.size()) != n || state.v.size() != state.u.size()) {
    throw std::invalid_argument("euler_step: state size does not match the network");
  }
  const Vector drive = t.matrix() * state.v + h;
  Vector u(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double r = cfg.dt / cfg.tau(i);
    u(i) = (1.0 - r) * state.u(i) + r * drive(i);
  }
  return NeuronState::from_internal(std::move(u), g);
}

double lyapunov_energy(const ConnectionMatrix& t, const FieldVector& h,
                       const ActivationFunction& g, const Vector& v) {
  return network_energy(t, h, g, v);
}

Trajectory integrate(const NeuronState& state0, const ConnectionMatrix& t, const FieldVector& h,
                     const ActivationFunction& g, const IntegratorConfig& cfg) {
  cfg.validate(t.size());
  Trajectory traj;
  auto record = [&](double time, const NeuronState& s) {
    traj.times.push_back(time);
    traj.states.push_back(s);
    traj.energies.push_back(lyapunov_energy(t, h, g, s.v));
  };
  if (!state0.u.allFinite() || !state0.v.allFinite()) {
    throw NumericalError("integrate: non-finite initial state", 0);
  }
  record(0.0, state0);

  NeuronState s = state0;
  for (std::size_t k = 1; k <= cfg.steps; ++k) {
    s = euler_step(s, t, h, g, cfg);
    if (!s.u.allFinite() || !s.v.allFinite()) {
      throw NumericalError("integrate: state became non-finite", k);
    }
    if (k % cfg.record_every == 0 || k == cfg.steps) {
      record(static_cast<double>(k) * cfg.dt, s);
    }
  }
  return traj;
}

}  // namespace statnet
