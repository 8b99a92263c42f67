#pragma once

#include <imexstab/discretize2d.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imexstab::experiments {

enum class ExperimentName {
  kSurfaces,
  kEnergyCompare,
  kShiftedDecay,
  kExplicitBlowup,
  kVerifyLemmas,
  kConvergence,
};

std::string_view to_string(ExperimentName name);
/// Throws ConfigError for unknown names.
ExperimentName parse_experiment(std::string_view name);

/// Exit codes shared by the runners and the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAuditFailure = 2;
inline constexpr int kExitBlowUp = 3;
inline constexpr int kExitConfigError = 4;

struct ExperimentSpec {
  ExperimentName name = ExperimentName::kSurfaces;
  int m = 31;
  double theta_deg = 17.0;
  double epsilon = 1e-4;
  /// Empty: {1e-1, 5e-3, 1e-3, 1e-4} for surfaces, {1e-4} otherwise.
  std::vector<double> epsilon0;
  /// Empty: the experiment's own runs (see default_runs). A single value of
  /// either list is paired with every entry of the other.
  std::vector<double> k;
  std::vector<std::size_t> steps;
  AntidiffusionMode mode = AntidiffusionMode::kAveraging;
  int q = 2;
  std::uint64_t seed = 20240601;
  std::filesystem::path out_dir = "out";
  /// 0: IMEX_STAB_THREADS or the hardware concurrency.
  int threads = 0;
};

struct RunPlan {
  double k;
  std::size_t steps;
};

/// (k, steps) pairs after applying defaults and broadcasting; throws
/// ConfigError on mismatched list lengths or invalid values.
std::vector<RunPlan> resolve_runs(const ExperimentSpec& spec);
std::vector<double> resolve_epsilon0(const ExperimentSpec& spec);

/// Throws ConfigError on any invalid field.
void validate(const ExperimentSpec& spec);

struct RunSummary {
  std::string label;
  double epsilon0 = 0.0;
  double k = 0.0;
  std::size_t steps = 0;
  std::size_t completed_steps = 0;
  bool blew_up = false;
  double max_energy = 0.0;
  double final_energy = 0.0;
  double first_nonzero_energy = 0.0;
  /// First step whose energy exceeds 1e6 x first_nonzero_energy.
  std::optional<std::size_t> growth_step;
  /// Outcome of the audit the experiment applies to this run, if any.
  std::optional<bool> audit_passed;
  std::string note;
};

struct ExperimentReport {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
  std::vector<RunSummary> runs;
  std::vector<std::string> messages;
};

ExperimentReport run_surfaces(const ExperimentSpec& spec);
ExperimentReport run_energy_compare(const ExperimentSpec& spec);
ExperimentReport run_shifted_decay(const ExperimentSpec& spec);
ExperimentReport run_explicit_blowup(const ExperimentSpec& spec);
ExperimentReport run_verifications(const ExperimentSpec& spec);
ExperimentReport run_convergence(const ExperimentSpec& spec);

/// Dispatches on spec.name after validate(); ConfigError becomes exit code 4.
ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace imexstab::experiments
