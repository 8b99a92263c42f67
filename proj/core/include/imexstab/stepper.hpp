#pragma once

#include "imexstab/energy.hpp"
#include "imexstab/linsolve.hpp"
#include "imexstab/system.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace imexstab {

enum class Variant {
  /// (u_{n+1} - u_n)/k + A u_{n+1} + B(u_n) u_{n+1} - C u_n = f_{n+1}
  kImexStable,
  /// (u_{n+1} - u_n)/k + A u_{n+1} + B(u_n) u_n - C u_n = f_{n+1}
  kExplicitAdvection,
};

std::string_view to_string(Variant v);

/// Timestep k and step count N; the horizon T = kN is derived, never stored.
struct SchemeConfig {
  double k = 0.0;
  std::size_t steps = 0;
  Variant variant = Variant::kImexStable;

  /// Throws ConfigError unless k is positive and finite.
  static SchemeConfig make(double k, std::size_t steps, Variant variant = Variant::kImexStable);
  double horizon() const noexcept { return k * static_cast<double>(steps); }
};

/// Any component with |u_i| > 1e150, or non-finite, trips the detector.
inline constexpr double kBlowUpThreshold = 1e150;
bool is_blown_up(const Vector& u);

struct TrajectoryRecord {
  SchemeConfig scheme;
  /// u_0 .. u_N (fewer on blow-up; the offending state is the last one).
  std::vector<Vector> states;
  std::vector<double> energy_norms;
  std::vector<double> two_norms;
  /// ||f_{n+1}||_E for n = 0 .. N-1.
  std::vector<double> forcing_energy_norms;
  std::optional<std::size_t> blow_up_step;

  bool blew_up() const noexcept { return blow_up_step.has_value(); }
  double time(std::size_t n) const noexcept { return scheme.k * static_cast<double>(n); }
};

/// Solves (I + kA + kB(u_n)) u_{n+1} = (I + kC) u_n + k f_next.
Vector imex_step(const OdeSystem& system, double k, const Vector& u_n, const Vector& f_next,
                 const SolverOptions& options = {});

/// Solves (I + kA) u_{n+1} = u_n - k B(u_n) u_n + k C u_n + k f_next.
Vector explicit_advection_step(const OdeSystem& system, double k, const Vector& u_n,
                               const Vector& f_next, const SolverOptions& options = {});

/// Repeated steps of one variant with a fixed timestep. The step matrix is
/// factored once when it does not depend on the state (constant B, or the
/// explicit-advection variant); otherwise it is re-assembled every step.
class Stepper {
 public:
  Stepper(OdeSystem system, double k, Variant variant, SolverOptions options = {});

  Vector step(const Vector& u_n, const Vector& f_next) const;

  const OdeSystem& system() const noexcept { return system_; }
  double k() const noexcept { return k_; }
  Variant variant() const noexcept { return variant_; }

 private:
  OdeSystem system_;
  double k_;
  Variant variant_;
  SolverOptions options_;
  std::optional<StepSolver> cached_;
};

/// Runs config.steps steps from system.initial_state(), sampling the forcing
/// pointwise at t = (n+1)k, and records norms in `monitor`. Stops early on
/// blow-up and returns the partial record.
TrajectoryRecord integrate(const OdeSystem& system, const SchemeConfig& config,
                           const EnergyMetric& monitor, const SolverOptions& options = {});

}  // namespace imexstab
