#pragma once

#include "imexstab/linear_operator.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace imexstab {

/// Time-dependent right-hand side f(t).
using Forcing = std::function<Vector(double)>;

Forcing zero_forcing(Index n);
Forcing constant_forcing(Vector value);

/// The skew-symmetric coefficient u -> B(u). Either a single constant
/// operator or a state-dependent map; the constant case lets steppers reuse
/// one factorization for the whole trajectory.
class SkewField {
 public:
  static SkewField constant(LinearOperator b);
  static SkewField state_dependent(Index n, std::function<LinearOperator(const Vector&)> map);

  bool is_constant() const noexcept { return !map_; }
  Index dim() const noexcept { return n_; }
  LinearOperator at(const Vector& u) const;

 private:
  SkewField() = default;
  Index n_ = 0;
  LinearOperator constant_;
  std::function<LinearOperator(const Vector&)> map_;
};

/// u' + A u + B(u) u - C u = f(t),  u(0) = u0.
///
/// Only dimensions are checked on construction; the definiteness and
/// symmetry conditions are the business of validate_structure().
class OdeSystem {
 public:
  OdeSystem(LinearOperator a, SkewField b, LinearOperator c, Forcing f, Vector u0,
            bool forcing_is_constant = false);

  Index dim() const noexcept { return n_; }
  const LinearOperator& a() const noexcept { return a_; }
  const SkewField& b() const noexcept { return b_; }
  const LinearOperator& c() const noexcept { return c_; }
  const Vector& initial_state() const noexcept { return u0_; }
  bool forcing_is_constant() const noexcept { return forcing_is_constant_; }

  /// f(t); throws StructuralError if the callback returns the wrong size.
  Vector forcing(double t) const;

  OdeSystem with_forcing(Forcing f, bool is_constant = false) const;
  OdeSystem with_initial_state(Vector u0) const;

 private:
  Index n_;
  LinearOperator a_;
  SkewField b_;
  LinearOperator c_;
  Forcing f_;
  Vector u0_;
  bool forcing_is_constant_;
};

inline constexpr double kDefaultStructureTol = 1e-10;

struct StructureReport {
  bool a_symmetric = false;
  double a_symmetry_residual = 0.0;
  double a_pd_margin = 0.0;
  bool c_symmetric = false;
  double c_symmetry_residual = 0.0;
  double c_psd_margin = 0.0;
  double a_minus_c_psd_margin = 0.0;
  double b_skew_residual = 0.0;
  /// Absolute threshold actually used: tol * ||A||_2 (or tol if A = 0).
  double threshold = 0.0;
  bool valid = false;
};

/// u0 followed by `count` random unit vectors drawn from a seeded generator.
std::vector<Vector> default_probe_states(const OdeSystem& system, std::uint64_t seed = 0,
                                         int count = 8);

/// Checks A = A^T, A PD, C = C^T PSD, A - C PSD (eigenvalues of the
/// symmetrized dense matrices) and skew-symmetry of B at every probe state.
/// `tol` is relative to ||A||_2.
StructureReport validate_structure(const OdeSystem& system, double tol,
                                   const std::vector<Vector>& probe_states);
StructureReport validate_structure(const OdeSystem& system, double tol = kDefaultStructureTol);

/// f(t) - A u - B(u) u + C u.
Vector rhs_eval(const OdeSystem& system, double t, const Vector& u);

}  // namespace imexstab
