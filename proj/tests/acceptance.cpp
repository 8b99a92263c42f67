// Acceptance runner: one PASS/FAIL line per criterion.

#include "test_helpers.hpp"

#include "experiments.hpp"

#include <imexstab/analysis.hpp>
#include <imexstab/random_systems.hpp>
#include <imexstab/verification.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

using namespace imexstab;
namespace ex = imexstab::experiments;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool report(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool pass = o.pass && in_time;
  std::printf("criterion %d %s: %s (%s; %.2f s, limit %.0f s)\n", id, title, pass ? "PASS" : "FAIL",
              o.detail.c_str(), secs, limit_s);
  std::fflush(stdout);
  return pass;
}

Outcome all_rows_pass(const std::vector<AuditRow>& rows, std::size_t expected) {
  std::size_t failed = 0;
  double worst = -INFINITY;
  std::string first;
  for (const auto& r : rows) {
    worst = std::max(worst, r.value - r.bound);
    if (!r.pass) {
      if (failed++ == 0) first = r.check_name + " " + r.case_id;
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu rows, %zu failed, worst value-bound %.3g%s%s", rows.size(),
                failed, worst, first.empty() ? "" : ", first ", first.c_str());
  return {failed == 0 && rows.size() == expected, buf};
}

ex::ExperimentSpec default_spec(ex::ExperimentName name, const fs::path& out) {
  ex::ExperimentSpec spec;
  spec.name = name;
  spec.seed = kSeed;
  spec.out_dir = out;
  return spec;
}

std::vector<ex::ExperimentName> grid_experiments() {
  return {ex::ExperimentName::kSurfaces, ex::ExperimentName::kEnergyCompare,
          ex::ExperimentName::kShiftedDecay, ex::ExperimentName::kExplicitBlowup};
}

Outcome reproduce(const fs::path& out) {
  std::string detail;
  bool ok = true;
  auto note = [&](bool cond, const std::string& what) {
    ok = ok && cond;
    detail += (detail.empty() ? "" : "; ") + what + (cond ? " ok" : " FAILED");
  };

  const auto surf = ex::run_experiment(default_spec(ex::ExperimentName::kSurfaces, out));
  bool a = surf.runs.size() == 4;
  for (const auto& r : surf.runs) {
    a = a && !r.blew_up && r.completed_steps == 1000 && std::isfinite(r.max_energy);
  }
  note(a, "(a) 4 eps0 sweeps bounded");

  const auto cmp = ex::run_experiment(default_spec(ex::ExperimentName::kEnergyCompare, out));
  bool b = cmp.runs.size() == 2;
  for (const auto& r : cmp.runs) b = b && !r.blew_up && r.completed_steps == r.steps;
  note(b, "(b) k=1 and k=0.1 bounded");

  const auto dec = ex::run_experiment(default_spec(ex::ExperimentName::kShiftedDecay, out));
  bool c = dec.runs.size() == 2;
  for (const auto& r : dec.runs) c = c && r.audit_passed.value_or(false);
  note(c, "(c) shifted norms nonincreasing");

  const auto blow = ex::run_experiment(default_spec(ex::ExperimentName::kExplicitBlowup, out));
  bool d = blow.runs.size() == 2;
  std::string where = "none";
  if (d) {
    const auto& imex = blow.runs[0];
    const auto& expl = blow.runs[1];
    d = !imex.blew_up && imex.audit_passed.value_or(false) && expl.growth_step.has_value() &&
        *expl.growth_step < 1000;
    if (expl.growth_step) where = std::to_string(*expl.growth_step);
  }
  note(d, "(d) explicit growth at step " + where + ", imex bounded");
  return {ok, detail};
}

}  // namespace

int main() {
  bool all = true;

  all &= report(1, "unconditional stability", 30, [] {
    return all_rows_pass(monotone_decay_suite(kSeed, 100, {1e-3, 1e-1, 1.0, 10.0, 100.0, 1e3}, 200),
                         600);
  });

  all &= report(2, "contraction bound", 60, [] {
    auto rows = contraction_suite(kSeed, 500);
    const auto step = step_contraction_suite(kSeed + 1, 200, {1e-3, 1.0, 1e3});
    rows.insert(rows.end(), step.begin(), step.end());
    return all_rows_pass(rows, 1100);
  });

  all &= report(3, "inhomogeneous bound", 30,
                [] { return all_rows_pass(inhomogeneous_bound_suite(kSeed + 2, 50, 100), 50); });

  all &= report(4, "convergence order", 10, [] { return all_rows_pass(convergence_suite(), 14); });

  const fs::path run1 = testing_helpers::scratch_dir("acceptance_run1");
  all &= report(5, "grid experiments", 300, [&] { return reproduce(run1); });

  all &= report(6, "truncation probe", 1, [] {
    const OdeSystem base = random_validated_system(kSeed);
    const Vector u = Vector::LinSpaced(base.dim(), -1.0, 1.0);
    const Vector f = base.a().apply(u) + base.b().at(u).apply(u) - base.c().apply(u);
    const OdeSystem sys(base.a(), base.b(), base.c(), constant_forcing(f), u);
    double worst_const = 0.0;
    for (double k : {1e-3, 1e-2, 0.1, 1.0, 10.0}) {
      worst_const = std::max(
          worst_const, truncation_error(sys, [&](double) { return u; }, 0.0, k).cwiseAbs().maxCoeff());
    }
    const Benchmark b = scalar_decay_benchmark();
    const double tau = truncation_error(b.system, b.exact, 0.0, 0.1)(0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "constant max |tau| %.3g, scalar tau %.8f", worst_const, tau);
    return Outcome{worst_const <= 1e-12 && std::abs(tau - -0.04679) <= 1e-5, buf};
  });

  all &= report(7, "determinism", 300, [&] {
    const fs::path run2 = testing_helpers::scratch_dir("acceptance_run2");
    for (auto name : grid_experiments()) {
      ex::ExperimentSpec spec = default_spec(name, run2);
      spec.threads = 3;
      ex::run_experiment(spec);
    }
    std::size_t files = 0, differ = 0;
    for (const auto& entry : fs::directory_iterator(run1)) {
      ++files;
      const fs::path other = run2 / entry.path().filename();
      if (!fs::exists(other) ||
          testing_helpers::slurp(entry.path()) != testing_helpers::slurp(other)) {
        ++differ;
      }
    }
    return Outcome{files > 0 && differ == 0,
                   std::to_string(files) + " CSVs compared, " + std::to_string(differ) + " differ (second run on 3 threads)"};
  });

  std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
