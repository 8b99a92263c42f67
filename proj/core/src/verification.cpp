#include "imexstab/verification.hpp"

#include "imexstab/parallel.hpp"
#include "imexstab/random_systems.hpp"

#include <array>
#include <cmath>
#include <string>

namespace imexstab {

namespace {

constexpr std::uint64_t kSuiteStride = 1000003;

std::string case_label(int index) { return "case=" + std::to_string(index); }

std::string case_label(int index, double k) {
  return case_label(index) + ";k=" + format_shortest(k);
}

OdeSystem suite_system(std::uint64_t seed, int index, bool forcing) {
  RandomSystemOptions opt;
  opt.state_dependent_b = index % 2 == 1;
  opt.smooth_forcing = forcing;
  return random_validated_system(seed + static_cast<std::uint64_t>(index), opt);
}

}  // namespace

std::vector<AuditRow> contraction_suite(std::uint64_t seed, int cases) {
  std::vector<AuditRow> rows(static_cast<std::size_t>(cases));
  parallel_for(rows.size(), [&](std::size_t i) {
    const ContractionTriple t = random_contraction_triple(seed + i);
    const ContractionWitness w = check_contraction(t.d1, t.d2, t.d3);
    rows[i] = {"contraction", case_label(static_cast<int>(i)), w.spectral_norm_f,
               1.0 + kContractionSlack, w.within_bound};
  });
  return rows;
}

std::vector<AuditRow> step_contraction_suite(std::uint64_t seed, int systems,
                                             const std::vector<double>& ks) {
  std::vector<AuditRow> rows(static_cast<std::size_t>(systems) * ks.size());
  parallel_for(static_cast<std::size_t>(systems), [&](std::size_t i) {
    const OdeSystem sys = suite_system(seed, static_cast<int>(i), false);
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const double v = check_step_contraction(sys, ks[j]);
      rows[i * ks.size() + j] = {"step_contraction", case_label(static_cast<int>(i), ks[j]), v,
                                 1.0 + kContractionSlack, v <= 1.0 + kContractionSlack};
    }
  });
  return rows;
}

std::vector<AuditRow> monotone_decay_suite(std::uint64_t seed, int systems,
                                           const std::vector<double>& ks, std::size_t steps) {
  std::vector<AuditRow> rows(static_cast<std::size_t>(systems) * ks.size());
  parallel_for(static_cast<std::size_t>(systems), [&](std::size_t i) {
    const OdeSystem sys = suite_system(seed, static_cast<int>(i), false);
    const EnergyMetric base(sys.c(), ks.front());
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const EnergyMetric metric = base.with_timestep(ks[j]);
      const TrajectoryRecord traj = integrate(sys, SchemeConfig::make(ks[j], steps), metric);
      const AuditOutcome a = monotone_decay_audit(traj, metric, 1e-12);
      rows[i * ks.size() + j] = {"monotone_decay", case_label(static_cast<int>(i), ks[j]),
                                 a.worst_value, a.worst_bound, a.passed};
    }
  });
  return rows;
}

std::vector<AuditRow> inhomogeneous_bound_suite(std::uint64_t seed, int systems,
                                                std::size_t steps) {
  constexpr std::array<double, 4> kSteps{1e-2, 1e-1, 1.0, 10.0};
  std::vector<AuditRow> rows(static_cast<std::size_t>(systems));
  parallel_for(rows.size(), [&](std::size_t i) {
    const OdeSystem sys = suite_system(seed, static_cast<int>(i), true);
    const double k = kSteps[i % kSteps.size()];
    const EnergyMetric metric(sys.c(), k);
    const TrajectoryRecord traj = integrate(sys, SchemeConfig::make(k, steps), metric);
    const AuditOutcome a = stability_bound_audit(traj, metric);
    rows[i] = {"inhomogeneous_bound", case_label(static_cast<int>(i), k), a.worst_value,
               a.worst_bound, a.passed};
  });
  return rows;
}

Benchmark scalar_decay_benchmark() {
  OdeSystem sys(LinearOperator::dense(DenseMatrix::Identity(1, 1)),
                SkewField::constant(LinearOperator::zero(1)),
                LinearOperator::zero(1), zero_forcing(1), Vector::Ones(1), true);
  return {"scalar_decay", std::move(sys), [](double t) { return Vector::Constant(1, std::exp(-t)).eval(); }};
}

Benchmark rotation_benchmark() {
  constexpr double eps = 1e-12;
  DenseMatrix b(2, 2);
  b << 0.0, 1.0, -1.0, 0.0;
  OdeSystem sys(LinearOperator::dense(eps * DenseMatrix::Identity(2, 2)),
                SkewField::constant(LinearOperator::dense(b)), LinearOperator::zero(2),
                zero_forcing(2), Vector::Unit(2, 0), true);
  return {"rotation", std::move(sys), [](double t) {
            Vector u(2);
            u << std::cos(t), std::sin(t);
            return (std::exp(-eps * t) * u).eval();
          }};
}

std::vector<AuditRow> convergence_suite() {
  const std::vector<double> ks{0.1, 0.05, 0.025, 0.0125};
  constexpr double horizon = 1.0;
  std::vector<AuditRow> rows;
  for (const Benchmark& bench : {scalar_decay_benchmark(), rotation_benchmark()}) {
    const auto study = convergence_study(bench.system, horizon, ks, bench.exact(horizon));
    const EnergyMetric base(bench.system.c(), ks.front());
    for (std::size_t i = 0; i < study.size(); ++i) {
      const ConvergenceRow& r = study[i];
      const std::string id = bench.name + ";k=" + format_shortest(r.k);
      if (i > 0) {
        const double dev = std::abs(r.observed_order - 1.0);
        rows.push_back({"convergence_order_deviation", id, dev, 0.1, dev <= 0.1});
      }
      const ConvergenceBound cb =
          measure_convergence_bound(bench.system, base.with_timestep(r.k), horizon);
      rows.push_back({"convergence_bound", id, r.error_e, cb.predicted_error,
                      r.error_e <= cb.predicted_error});
    }
  }
  return rows;
}

std::vector<AuditRow> run_all_suites(std::uint64_t seed) {
  std::vector<AuditRow> all;
  auto append = [&all](std::vector<AuditRow> rows) {
    all.insert(all.end(), std::make_move_iterator(rows.begin()),
               std::make_move_iterator(rows.end()));
  };
  append(contraction_suite(seed));
  append(step_contraction_suite(seed + kSuiteStride));
  append(monotone_decay_suite(seed + kSuiteStride));
  append(inhomogeneous_bound_suite(seed + 2 * kSuiteStride));
  append(convergence_suite());
  return all;
}

void write_audit_csv(const std::filesystem::path& path, const ParamList& params,
                     const std::vector<AuditRow>& rows) {
  CsvWriter w(path, params, {"check_name", "case_id", "value", "bound", "pass"});
  for (const AuditRow& r : rows) {
    w.field(r.check_name).field(r.case_id).field(r.value).field(r.bound).field(r.pass);
    w.end_row();
  }
}

}  // namespace imexstab
