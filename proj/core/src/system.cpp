#include "imexstab/system.hpp"

#include "imexstab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace imexstab {

Forcing zero_forcing(Index n) {
  return [n](double) { return Vector::Zero(n).eval(); };
}

Forcing constant_forcing(Vector value) {
  return [v = std::move(value)](double) { return v; };
}

SkewField SkewField::constant(LinearOperator b) {
  if (!b.is_square()) {
    throw StructuralError("SkewField: B must be square");
  }
  SkewField f;
  f.n_ = b.rows();
  f.constant_ = std::move(b);
  return f;
}

SkewField SkewField::state_dependent(Index n, std::function<LinearOperator(const Vector&)> map) {
  if (!map) {
    throw StructuralError("SkewField: empty state map");
  }
  SkewField f;
  f.n_ = n;
  f.map_ = std::move(map);
  return f;
}

LinearOperator SkewField::at(const Vector& u) const {
  if (u.size() != n_) {
    throw StructuralError("SkewField::at: state of size " + std::to_string(u.size()) +
                          ", expected " + std::to_string(n_));
  }
  if (!map_) {
    return constant_;
  }
  LinearOperator b = map_(u);
  if (b.rows() != n_ || b.cols() != n_) {
    throw StructuralError("SkewField::at: map returned a " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()) + " operator");
  }
  return b;
}

OdeSystem::OdeSystem(LinearOperator a, SkewField b, LinearOperator c, Forcing f, Vector u0,
                     bool forcing_is_constant)
    : n_(u0.size()),
      a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      f_(std::move(f)),
      u0_(std::move(u0)),
      forcing_is_constant_(forcing_is_constant) {
  auto check = [this](const LinearOperator& m, const char* name) {
    if (m.rows() != n_ || m.cols() != n_) {
      throw StructuralError(std::string("OdeSystem: ") + name + " is " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()) + ", state dimension is " +
                            std::to_string(n_));
    }
  };
  if (n_ <= 0) {
    throw StructuralError("OdeSystem: state dimension must be positive");
  }
  check(a_, "A");
  check(c_, "C");
  if (b_.dim() != n_) {
    throw StructuralError("OdeSystem: B has dimension " + std::to_string(b_.dim()));
  }
  if (!f_) {
    throw StructuralError("OdeSystem: empty forcing");
  }
}

Vector OdeSystem::forcing(double t) const {
  Vector f = f_(t);
  if (f.size() != n_) {
    throw StructuralError("OdeSystem: forcing returned size " + std::to_string(f.size()));
  }
  return f;
}

OdeSystem OdeSystem::with_forcing(Forcing f, bool is_constant) const {
  return OdeSystem(a_, b_, c_, std::move(f), u0_, is_constant);
}

OdeSystem OdeSystem::with_initial_state(Vector u0) const {
  return OdeSystem(a_, b_, c_, f_, std::move(u0), forcing_is_constant_);
}

std::vector<Vector> default_probe_states(const OdeSystem& system, std::uint64_t seed, int count) {
  std::vector<Vector> probes{system.initial_state()};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int i = 0; i < count; ++i) {
    Vector v(system.dim());
    for (Index j = 0; j < v.size(); ++j) {
      v(j) = normal(rng);
    }
    const double nrm = v.norm();
    probes.push_back(nrm > 0 ? (v / nrm).eval() : v);
  }
  return probes;
}

namespace {

// ||S||_2 of the symmetric part defect S = M + M^T.
double skew_residual(const LinearOperator& b) {
  if (b.kind() == LinearOperator::Kind::kSparse && max_skew_defect(b.sparse_matrix()) == 0.0) {
    return 0.0;
  }
  const DenseMatrix m = b.to_dense();
  const DenseMatrix s = m + m.transpose();
  if (s.cwiseAbs().maxCoeff() == 0.0) {
    return 0.0;
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

StructureReport validate_structure(const OdeSystem& system, double tol,
                                   const std::vector<Vector>& probe_states) {
  if (!(tol > 0)) {
    throw StructuralError("validate_structure: tol must be positive");
  }
  if (probe_states.empty()) {
    throw StructuralError("validate_structure: no probe states");
  }
  const DenseMatrix a = system.a().to_dense();
  const DenseMatrix c = system.c().to_dense();

  StructureReport r;
  const EigenRange a_range = symmetric_eigen_range(a);
  const double a_norm = std::max(std::abs(a_range.min), std::abs(a_range.max));
  r.threshold = tol * (a_norm > 0 ? a_norm : 1.0);

  r.a_symmetry_residual = max_asymmetry(a);
  r.a_symmetric = r.a_symmetry_residual <= r.threshold;
  r.a_pd_margin = a_range.min;

  r.c_symmetry_residual = max_asymmetry(c);
  r.c_symmetric = r.c_symmetry_residual <= r.threshold;
  r.c_psd_margin = symmetric_eigen_range(c).min;
  r.a_minus_c_psd_margin = symmetric_eigen_range(a - c).min;

  if (system.b().is_constant()) {
    r.b_skew_residual = skew_residual(system.b().at(probe_states.front()));
  } else {
    for (const Vector& u : probe_states) {
      r.b_skew_residual = std::max(r.b_skew_residual, skew_residual(system.b().at(u)));
    }
  }

  r.valid = r.a_symmetric && r.c_symmetric && r.b_skew_residual <= r.threshold &&
            r.a_pd_margin >= -r.threshold && r.c_psd_margin >= -r.threshold &&
            r.a_minus_c_psd_margin >= -r.threshold;
  return r;
}

StructureReport validate_structure(const OdeSystem& system, double tol) {
  return validate_structure(system, tol, default_probe_states(system));
}

Vector rhs_eval(const OdeSystem& system, double t, const Vector& u) {
  if (u.size() != system.dim()) {
    throw StructuralError("rhs_eval: state of size " + std::to_string(u.size()) + ", expected " +
                          std::to_string(system.dim()));
  }
  const LinearOperator b = system.b().at(u);
  return system.forcing(t) - system.a().apply(u) - b.apply(u) + system.c().apply(u);
}

}  // namespace imexstab
