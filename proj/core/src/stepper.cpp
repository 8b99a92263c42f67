#include "imexstab/stepper.hpp"

#include "imexstab/errors.hpp"

#include <cmath>
#include <string>

namespace imexstab {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kImexStable:
      return "imex";
    case Variant::kExplicitAdvection:
      return "explicit-advection";
  }
  return "unknown";
}

SchemeConfig SchemeConfig::make(double k, std::size_t steps, Variant variant) {
  if (!(k > 0) || !std::isfinite(k)) {
    throw ConfigError("timestep must be positive and finite, got " + std::to_string(k));
  }
  return SchemeConfig{k, steps, variant};
}

bool is_blown_up(const Vector& u) {
  for (Index i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u(i)) || std::abs(u(i)) > kBlowUpThreshold) {
      return true;
    }
  }
  return false;
}

namespace {

void check_step_args(const OdeSystem& system, double k, const Vector& u_n, const Vector& f_next) {
  if (!(k > 0) || !std::isfinite(k)) {
    throw ConfigError("timestep must be positive and finite");
  }
  if (u_n.size() != system.dim() || f_next.size() != system.dim()) {
    throw StructuralError("step: state/forcing size does not match system dimension " +
                          std::to_string(system.dim()));
  }
}

Vector imex_rhs(const OdeSystem& system, double k, const Vector& u_n, const Vector& f_next) {
  return u_n + k * system.c().apply(u_n) + k * f_next;
}

Vector explicit_rhs(const OdeSystem& system, double k, const Vector& u_n, const Vector& f_next) {
  const LinearOperator b = system.b().at(u_n);
  return u_n - k * b.apply(u_n) + k * system.c().apply(u_n) + k * f_next;
}

}  // namespace

Vector imex_step(const OdeSystem& system, double k, const Vector& u_n, const Vector& f_next,
                 const SolverOptions& options) {
  check_step_args(system, k, u_n, f_next);
  const StepMatrix m = StepMatrix::assemble(system.a(), system.b().at(u_n), k);
  return solve_step_matrix(m, imex_rhs(system, k, u_n, f_next), options);
}

Vector explicit_advection_step(const OdeSystem& system, double k, const Vector& u_n,
                               const Vector& f_next, const SolverOptions& options) {
  check_step_args(system, k, u_n, f_next);
  const StepMatrix m = StepMatrix::assemble(system.a(), k);
  return solve_step_matrix(m, explicit_rhs(system, k, u_n, f_next), options);
}

Stepper::Stepper(OdeSystem system, double k, Variant variant, SolverOptions options)
    : system_(std::move(system)), k_(k), variant_(variant), options_(options) {
  if (!(k_ > 0) || !std::isfinite(k_)) {
    throw ConfigError("timestep must be positive and finite");
  }
  if (variant_ == Variant::kExplicitAdvection) {
    cached_.emplace(StepMatrix::assemble(system_.a(), k_), options_);
  } else if (system_.b().is_constant()) {
    cached_.emplace(StepMatrix::assemble(system_.a(), system_.b().at(system_.initial_state()), k_),
                    options_);
  }
}

Vector Stepper::step(const Vector& u_n, const Vector& f_next) const {
  check_step_args(system_, k_, u_n, f_next);
  if (variant_ == Variant::kExplicitAdvection) {
    return cached_->solve(explicit_rhs(system_, k_, u_n, f_next));
  }
  const Vector rhs = imex_rhs(system_, k_, u_n, f_next);
  if (cached_) {
    return cached_->solve(rhs);
  }
  const StepMatrix m = StepMatrix::assemble(system_.a(), system_.b().at(u_n), k_);
  return solve_step_matrix(m, rhs, options_);
}

TrajectoryRecord integrate(const OdeSystem& system, const SchemeConfig& config,
                           const EnergyMetric& monitor, const SolverOptions& options) {
  if (monitor.dim() != system.dim()) {
    throw StructuralError("integrate: energy metric dimension does not match the system");
  }
  TrajectoryRecord rec;
  rec.scheme = SchemeConfig::make(config.k, config.steps, config.variant);
  rec.states.reserve(config.steps + 1);

  auto record_state = [&](Vector u) {
    rec.energy_norms.push_back(energy_norm(monitor, u));
    rec.two_norms.push_back(u.norm());
    rec.states.push_back(std::move(u));
  };
  record_state(system.initial_state());
  if (config.steps == 0) {
    return rec;
  }

  const Stepper stepper(system, config.k, config.variant, options);
  for (std::size_t n = 0; n < config.steps; ++n) {
    const Vector f_next = system.forcing(static_cast<double>(n + 1) * config.k);
    rec.forcing_energy_norms.push_back(energy_norm(monitor, f_next));
    Vector next = stepper.step(rec.states.back(), f_next);
    const bool blown = is_blown_up(next);
    record_state(std::move(next));
    if (blown) {
      rec.blow_up_step = n + 1;
      break;
    }
  }
  return rec;
}

}  // namespace imexstab
