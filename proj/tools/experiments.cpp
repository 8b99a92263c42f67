#include "experiments.hpp"

#include <imexstab/analysis.hpp>
#include <imexstab/csv.hpp>
#include <imexstab/errors.hpp>
#include <imexstab/parallel.hpp>
#include <imexstab/stepper.hpp>
#include <imexstab/verification.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace imexstab::experiments {

namespace {

constexpr std::array<std::pair<ExperimentName, std::string_view>, 6> kNames{{
    {ExperimentName::kSurfaces, "surfaces"},
    {ExperimentName::kEnergyCompare, "energy-compare"},
    {ExperimentName::kShiftedDecay, "shifted-decay"},
    {ExperimentName::kExplicitBlowup, "explicit-blowup"},
    {ExperimentName::kVerifyLemmas, "verify-lemmas"},
    {ExperimentName::kConvergence, "convergence"},
}};

constexpr double kGrowthFactor = 1e6;
constexpr double kShiftedDecayTol = 1e-12;

std::string mode_string(const ExperimentSpec& spec) {
  return spec.mode == AntidiffusionMode::kAveraging ? "avg:" + std::to_string(spec.q) : "proj";
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += (i ? ";" : "") + format_shortest(v[i]);
  }
  return s;
}

PdeParams pde_params(const ExperimentSpec& spec, double eps0) {
  PdeParams p;
  p.theta = spec.theta_deg * std::numbers::pi / 180.0;
  p.epsilon = spec.epsilon;
  p.epsilon0 = eps0;
  p.mode = spec.mode;
  p.q = spec.q;
  return p;
}

ParamList base_params(const ExperimentSpec& spec) {
  return {{"experiment", std::string(to_string(spec.name))},
          {"m", std::to_string(spec.m)},
          {"theta_deg", format_shortest(spec.theta_deg)},
          {"epsilon", format_shortest(spec.epsilon)},
          {"mode", mode_string(spec)},
          {"seed", std::to_string(spec.seed)}};
}

ParamList with(ParamList p, std::initializer_list<std::pair<std::string, std::string>> extra) {
  p.insert(p.end(), extra.begin(), extra.end());
  return p;
}

std::string run_label(const RunPlan& r) {
  return "k=" + format_shortest(r.k) + ";N=" + std::to_string(r.steps);
}

RunSummary summarize(const TrajectoryRecord& traj, std::string label, double eps0) {
  RunSummary s;
  s.label = std::move(label);
  s.epsilon0 = eps0;
  s.k = traj.scheme.k;
  s.steps = traj.scheme.steps;
  s.completed_steps = traj.states.size() - 1;
  s.blew_up = traj.blew_up();
  for (double e : traj.energy_norms) {
    if (std::isfinite(e)) {
      s.max_energy = std::max(s.max_energy, e);
    } else {
      s.max_energy = e;
      break;
    }
  }
  s.final_energy = traj.energy_norms.back();
  for (std::size_t n = 0; n < traj.energy_norms.size(); ++n) {
    const double e = traj.energy_norms[n];
    if (s.first_nonzero_energy == 0.0) {
      if (e > 0.0) {
        s.first_nonzero_energy = e;
      }
      continue;
    }
    if (!(e <= kGrowthFactor * s.first_nonzero_energy)) {
      s.growth_step = n;
      break;
    }
  }
  return s;
}

struct Assembled {
  Grid2D grid;
  DiscreteSystem discrete;
  EnergyMetric metric;
};

Assembled assemble(const ExperimentSpec& spec, double eps0, double k) {
  Grid2D grid(spec.m);
  DiscreteSystem d = assemble_system(grid, pde_params(spec, eps0));
  EnergyMetric metric(d.system.c(), k);
  return {grid, std::move(d), std::move(metric)};
}

std::string structure_flag(const Assembled& a) {
  return a.discrete.report && a.discrete.report->valid ? "true" : "false";
}

void write_energy_rows(CsvWriter& w, const TrajectoryRecord& traj, std::string_view run_id) {
  for (std::size_t n = 0; n < traj.energy_norms.size(); ++n) {
    w.field(traj.time(n)).field(traj.energy_norms[n]).field(run_id);
    w.end_row();
  }
  if (traj.blew_up()) {
    w.comment("blow_up," + std::string(run_id) + ",step=" + std::to_string(*traj.blow_up_step));
  }
}

void ensure_out_dir(const ExperimentSpec& spec) {
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + spec.out_dir.string() + ": " +
                      ec.message());
  }
}

RunPlan single_run(const ExperimentSpec& spec) {
  const auto runs = resolve_runs(spec);
  if (runs.size() != 1) {
    throw ConfigError(std::string(to_string(spec.name)) + " takes a single (k, steps) pair");
  }
  return runs.front();
}

double single_epsilon0(const ExperimentSpec& spec) {
  const auto eps = resolve_epsilon0(spec);
  if (eps.size() != 1) {
    throw ConfigError(std::string(to_string(spec.name)) + " takes a single eps0 value");
  }
  return eps.front();
}

}  // namespace

std::string_view to_string(ExperimentName name) {
  for (const auto& [n, s] : kNames) {
    if (n == name) {
      return s;
    }
  }
  return "unknown";
}

ExperimentName parse_experiment(std::string_view name) {
  for (const auto& [n, s] : kNames) {
    if (s == name) {
      return n;
    }
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

std::vector<RunPlan> resolve_runs(const ExperimentSpec& spec) {
  std::vector<double> ks = spec.k;
  std::vector<std::size_t> steps = spec.steps;
  std::vector<double> default_k;
  std::vector<std::size_t> default_steps;
  switch (spec.name) {
    case ExperimentName::kSurfaces:
      default_k = {10.0};
      default_steps = {1000};
      break;
    case ExperimentName::kEnergyCompare:
    case ExperimentName::kShiftedDecay:
      default_k = {1.0, 0.1};
      default_steps = {100, 1000};
      break;
    case ExperimentName::kExplicitBlowup:
      default_k = {1.0};
      default_steps = {1000};
      break;
    case ExperimentName::kVerifyLemmas:
    case ExperimentName::kConvergence:
      return {};
  }
  if (ks.empty() && steps.empty()) {
    ks = default_k;
    steps = default_steps;
  } else if (ks.empty()) {
    ks = steps.size() == default_k.size() ? default_k : std::vector<double>{default_k.front()};
  } else if (steps.empty()) {
    steps = ks.size() == default_steps.size() ? default_steps
                                              : std::vector<std::size_t>{default_steps.front()};
  }
  if (ks.size() == 1 && steps.size() > 1) {
    ks.assign(steps.size(), ks.front());
  }
  if (steps.size() == 1 && ks.size() > 1) {
    steps.assign(ks.size(), steps.front());
  }
  if (ks.size() != steps.size()) {
    throw ConfigError("--k and --steps lists have different lengths");
  }
  std::vector<RunPlan> runs;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ks[i] > 0) || !std::isfinite(ks[i])) {
      throw ConfigError("timestep k must be positive and finite");
    }
    runs.push_back({ks[i], steps[i]});
  }
  return runs;
}

std::vector<double> resolve_epsilon0(const ExperimentSpec& spec) {
  if (!spec.epsilon0.empty()) {
    return spec.epsilon0;
  }
  if (spec.name == ExperimentName::kSurfaces) {
    return {1e-1, 5e-3, 1e-3, 1e-4};
  }
  return {1e-4};
}

void validate(const ExperimentSpec& spec) {
  if (spec.m < 1) {
    throw ConfigError("grid size m must be at least 1");
  }
  if (spec.mode == AntidiffusionMode::kProjection && (spec.m < 3 || (spec.m + 1) % 2 != 0)) {
    throw ConfigError("projection mode needs odd m >= 3");
  }
  if (!std::isfinite(spec.theta_deg)) {
    throw ConfigError("theta must be finite");
  }
  for (double e : resolve_epsilon0(spec)) {
    pde_params(spec, e).validate();
  }
  if (spec.threads < 0) {
    throw ConfigError("thread count must be nonnegative");
  }
  resolve_runs(spec);
}

ExperimentReport run_surfaces(const ExperimentSpec& spec) {
  ensure_out_dir(spec);
  const RunPlan run = single_run(spec);
  const std::vector<double> eps0 = resolve_epsilon0(spec);
  ExperimentReport report;
  report.runs.resize(eps0.size());
  report.files.resize(eps0.size());
  parallel_for(eps0.size(), [&](std::size_t i) {
    const Assembled a = assemble(spec, eps0[i], run.k);
    const TrajectoryRecord traj =
        integrate(a.discrete.system, SchemeConfig::make(run.k, run.steps), a.metric);
    RunSummary s = summarize(traj, "eps0=" + format_shortest(eps0[i]), eps0[i]);

    const auto path = spec.out_dir / ("surface_eps0_" + format_shortest(eps0[i]) + ".csv");
    const Vector& shown = traj.blew_up() ? traj.states[traj.states.size() - 2] : traj.states.back();
    const ParamList params =
        with(base_params(spec), {{"eps0", format_shortest(eps0[i])},
                                 {"k", format_shortest(run.k)},
                                 {"steps", std::to_string(run.steps)},
                                 {"steps_completed", std::to_string(s.completed_steps)},
                                 {"structure_valid", structure_flag(a)}});
    write_grid_csv(path, a.grid, shown, params);
    if (traj.blew_up()) {
      std::ofstream(path, std::ios::app | std::ios::binary)
          << "# blow_up,step=" << *traj.blow_up_step << '\n';
      s.note = "blow-up";
    }
    report.files[i] = path;
    report.runs[i] = std::move(s);
  }, spec.threads);
  for (const RunSummary& s : report.runs) {
    if (s.blew_up) {
      report.exit_code = kExitBlowUp;
      report.messages.push_back("blow-up in run " + s.label);
    }
  }
  return report;
}

ExperimentReport run_energy_compare(const ExperimentSpec& spec) {
  ensure_out_dir(spec);
  const std::vector<RunPlan> runs = resolve_runs(spec);
  const double eps0 = single_epsilon0(spec);
  const Assembled a = assemble(spec, eps0, runs.front().k);

  ExperimentReport report;
  std::vector<TrajectoryRecord> trajs(runs.size());
  parallel_for(runs.size(), [&](std::size_t i) {
    trajs[i] = integrate(a.discrete.system, SchemeConfig::make(runs[i].k, runs[i].steps),
                         a.metric.with_timestep(runs[i].k));
  }, spec.threads);

  std::vector<double> ks;
  for (const RunPlan& r : runs) {
    ks.push_back(r.k);
  }
  const auto path = spec.out_dir / "energy_compare.csv";
  CsvWriter w(path,
              with(base_params(spec), {{"eps0", format_shortest(eps0)},
                                       {"k", join(ks)},
                                       {"structure_valid", structure_flag(a)}}),
              {"t", "energy_norm", "run_id"});
  for (std::size_t i = 0; i < runs.size(); ++i) {
    write_energy_rows(w, trajs[i], run_label(runs[i]));
    RunSummary s = summarize(trajs[i], run_label(runs[i]), eps0);
    if (s.blew_up) {
      report.exit_code = kExitBlowUp;
      report.messages.push_back("blow-up in run " + s.label);
    }
    report.runs.push_back(std::move(s));
  }
  report.files.push_back(path);
  return report;
}

ExperimentReport run_shifted_decay(const ExperimentSpec& spec) {
  ensure_out_dir(spec);
  const std::vector<RunPlan> runs = resolve_runs(spec);
  const double eps0 = single_epsilon0(spec);
  const Assembled a = assemble(spec, eps0, runs.front().k);

  std::vector<TrajectoryRecord> trajs(runs.size());
  parallel_for(runs.size(), [&](std::size_t i) {
    trajs[i] = integrate(a.discrete.system, SchemeConfig::make(runs[i].k, runs[i].steps),
                         a.metric.with_timestep(runs[i].k));
  }, spec.threads);

  ExperimentReport report;
  Vector u_star;
  std::string reference = "fixed_point";
  try {
    u_star = fixed_point(a.discrete.system);
  } catch (const SolverFailure& e) {
    const auto finest = std::min_element(runs.begin(), runs.end(),
                                         [](const RunPlan& x, const RunPlan& y) { return x.k < y.k; });
    const TrajectoryRecord& ref = trajs[static_cast<std::size_t>(finest - runs.begin())];
    u_star = ref.states.back();
    reference = "fallback_final_state_" + run_label(*finest);
    report.messages.push_back(std::string("fixed point unavailable (") + e.what() +
                              "); using the final state of the finest run");
  }

  std::vector<double> ks;
  for (const RunPlan& r : runs) {
    ks.push_back(r.k);
  }
  const auto path = spec.out_dir / "shifted_decay.csv";
  CsvWriter w(path,
              with(base_params(spec), {{"eps0", format_shortest(eps0)},
                                       {"k", join(ks)},
                                       {"reference", reference},
                                       {"structure_valid", structure_flag(a)}}),
              {"t", "shifted_energy_norm", "energy_norm", "run_id"});
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string id = run_label(runs[i]);
    const std::vector<double> shifted =
        shifted_energy_norms(trajs[i], a.metric.with_timestep(runs[i].k), u_star);
    for (std::size_t n = 0; n < shifted.size(); ++n) {
      w.field(trajs[i].time(n)).field(shifted[n]).field(trajs[i].energy_norms[n]).field(id);
      w.end_row();
    }
    RunSummary s = summarize(trajs[i], id, eps0);
    const auto bad = first_increase(shifted, kShiftedDecayTol);
    s.audit_passed = !bad.has_value() && !s.blew_up;
    if (bad) {
      s.note = "shifted norm increased at step " + std::to_string(*bad + 1);
      report.messages.push_back(id + ": " + s.note);
      report.exit_code = std::max(report.exit_code, kExitAuditFailure);
    }
    if (s.blew_up) {
      w.comment("blow_up," + id + ",step=" + std::to_string(*trajs[i].blow_up_step));
      report.exit_code = kExitBlowUp;
    }
    report.runs.push_back(std::move(s));
  }
  report.files.push_back(path);
  return report;
}

ExperimentReport run_explicit_blowup(const ExperimentSpec& spec) {
  ensure_out_dir(spec);
  const RunPlan run = single_run(spec);
  const double eps0 = single_epsilon0(spec);
  const Assembled a = assemble(spec, eps0, run.k);

  const std::array<Variant, 2> variants{Variant::kImexStable, Variant::kExplicitAdvection};
  std::array<TrajectoryRecord, 2> trajs;
  parallel_for(2, [&](std::size_t i) {
    trajs[i] = integrate(a.discrete.system, SchemeConfig::make(run.k, run.steps, variants[i]),
                         a.metric);
  }, spec.threads);

  ExperimentReport report;
  const auto path = spec.out_dir / "explicit_blowup.csv";
  CsvWriter w(path,
              with(base_params(spec), {{"eps0", format_shortest(eps0)},
                                       {"k", format_shortest(run.k)},
                                       {"steps", std::to_string(run.steps)},
                                       {"growth_factor", format_shortest(kGrowthFactor)},
                                       {"structure_valid", structure_flag(a)}}),
              {"t", "energy_norm", "variant"});
  for (std::size_t i = 0; i < 2; ++i) {
    write_energy_rows(w, trajs[i], to_string(variants[i]));
    RunSummary s = summarize(trajs[i], std::string(to_string(variants[i])), eps0);
    if (variants[i] == Variant::kImexStable) {
      const AuditOutcome audit = stability_bound_audit(trajs[i], a.metric);
      s.audit_passed = audit.passed;
      s.note = audit.note;
      if (s.blew_up) {
        report.exit_code = kExitBlowUp;
        report.messages.push_back("imex run blew up");
      } else if (!audit.passed) {
        report.exit_code = std::max(report.exit_code, kExitAuditFailure);
        report.messages.push_back("imex run violates the stability bound: " + audit.note);
      }
    } else {
      s.audit_passed = s.growth_step.has_value();
      if (s.growth_step) {
        w.comment("growth_detected,variant=explicit-advection,step=" +
                  std::to_string(*s.growth_step));
      } else {
        report.exit_code = std::max(report.exit_code, kExitAuditFailure);
        report.messages.push_back("explicit-advection run did not grow by the detection factor");
      }
    }
    report.runs.push_back(std::move(s));
  }
  report.files.push_back(path);
  return report;
}

ExperimentReport run_verifications(const ExperimentSpec& spec) {
  ensure_out_dir(spec);
  const std::vector<AuditRow> rows = run_all_suites(spec.seed);
  ExperimentReport report;
  const auto path = spec.out_dir / "verification.csv";
  write_audit_csv(path, with(base_params(spec), {{"cases", std::to_string(rows.size())}}), rows);
  report.files.push_back(path);
  for (const AuditRow& r : rows) {
    if (!r.pass) {
      report.exit_code = kExitAuditFailure;
      report.messages.push_back("FAIL " + r.check_name + " " + r.case_id + " value=" +
                                format_double(r.value) + " bound=" + format_double(r.bound));
    }
  }
  return report;
}

ExperimentReport run_convergence(const ExperimentSpec& spec) {
  ensure_out_dir(spec);
  const std::vector<double> ks = spec.k.empty() ? std::vector<double>{0.1, 0.05, 0.025, 0.0125}
                                                : spec.k;
  constexpr double horizon = 1.0;
  ExperimentReport report;
  const auto path = spec.out_dir / "convergence.csv";
  CsvWriter w(path, with(base_params(spec), {{"k", join(ks)}, {"T", format_shortest(horizon)}}),
              {"benchmark", "k", "steps", "error_e", "observed_order", "predicted_bound"});
  for (const Benchmark& bench : {scalar_decay_benchmark(), rotation_benchmark()}) {
    const auto study = convergence_study(bench.system, horizon, ks, bench.exact(horizon));
    const EnergyMetric base(bench.system.c(), ks.front());
    for (const ConvergenceRow& r : study) {
      const ConvergenceBound cb =
          measure_convergence_bound(bench.system, base.with_timestep(r.k), horizon);
      w.field(bench.name).field(r.k).field(r.steps).field(r.error_e).field(r.observed_order)
          .field(cb.predicted_error);
      w.end_row();
      const bool order_ok = std::isnan(r.observed_order) || std::abs(r.observed_order - 1.0) <= 0.1;
      if (!order_ok || r.error_e > cb.predicted_error) {
        report.exit_code = kExitAuditFailure;
        report.messages.push_back("FAIL " + bench.name + " k=" + format_shortest(r.k));
      }
    }
  }
  report.files.push_back(path);
  return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  try {
    validate(spec);
    switch (spec.name) {
      case ExperimentName::kSurfaces:
        return run_surfaces(spec);
      case ExperimentName::kEnergyCompare:
        return run_energy_compare(spec);
      case ExperimentName::kShiftedDecay:
        return run_shifted_decay(spec);
      case ExperimentName::kExplicitBlowup:
        return run_explicit_blowup(spec);
      case ExperimentName::kVerifyLemmas:
        return run_verifications(spec);
      case ExperimentName::kConvergence:
        return run_convergence(spec);
    }
  } catch (const ConfigError& e) {
    ExperimentReport r;
    r.exit_code = kExitConfigError;
    r.messages.push_back(e.what());
    return r;
  }
  return {};
}

}  // namespace imexstab::experiments
