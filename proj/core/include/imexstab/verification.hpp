#pragma once

#include "imexstab/analysis.hpp"
#include "imexstab/csv.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace imexstab {

/// One line of an audit report: `check_name,case_id,value,bound,pass`.
struct AuditRow {
  std::string check_name;
  std::string case_id;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Random triple i uses seed + i. Value is ||D4 (D1 + D3)^{-1} D4||_2,
/// bound 1 + 1e-10.
std::vector<AuditRow> contraction_suite(std::uint64_t seed, int cases = 500);

/// System i (seed + i, state-dependent B for odd i) at every k; value is
/// the step contraction norm at u0.
std::vector<AuditRow> step_contraction_suite(std::uint64_t seed, int systems = 200,
                                             const std::vector<double>& ks = {1e-3, 1.0, 1e3});

/// f = 0 trajectories of `steps` steps; value/bound are the energy and
/// ||u_n||_E + 1e-12 ||u_0||_E at the worst step. Uses the same systems as
/// step_contraction_suite for equal seeds.
std::vector<AuditRow> monotone_decay_suite(std::uint64_t seed, int systems = 100,
                                           const std::vector<double>& ks = {1e-3, 1e-1, 1.0, 10.0,
                                                                            100.0, 1e3},
                                           std::size_t steps = 200);

/// Smooth nonzero forcing, k cycling over {1e-2, 1e-1, 1, 10}, `steps`
/// steps; value/bound from stability_bound_audit at the worst step.
std::vector<AuditRow> inhomogeneous_bound_suite(std::uint64_t seed, int systems = 50,
                                                std::size_t steps = 100);

struct Benchmark {
  std::string name;
  OdeSystem system;
  ExactSolution exact;
};

/// u' + u = 0, u(0) = 1: u = e^{-t}.
Benchmark scalar_decay_benchmark();
/// u' + eps u + B u = 0 with B = [[0,1],[-1,0]], eps = 1e-12, u(0) = (1,0):
/// u = e^{-eps t} (cos t, sin t).
Benchmark rotation_benchmark();

/// Scalar decay and 2x2 rotation benchmarks at T = 1 with
/// k in {0.1, 0.05, 0.025, 0.0125}: |observed order - 1| <= 0.1 for each
/// consecutive pair, and the error against the constant-B bound.
std::vector<AuditRow> convergence_suite();

/// All of the above; suite s uses seed + s * 1000003 except the decay suite,
/// which shares the step-contraction seed.
std::vector<AuditRow> run_all_suites(std::uint64_t seed);

void write_audit_csv(const std::filesystem::path& path, const ParamList& params,
                     const std::vector<AuditRow>& rows);

}  // namespace imexstab
