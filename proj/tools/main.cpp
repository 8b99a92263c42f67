#include "experiments.hpp"

#include <imexstab/errors.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace ex = imexstab::experiments;

namespace {

void parse_mode(const std::string& text, ex::ExperimentSpec& spec) {
  if (text == "proj") {
    spec.mode = imexstab::AntidiffusionMode::kProjection;
    return;
  }
  if (text.rfind("avg", 0) == 0) {
    spec.mode = imexstab::AntidiffusionMode::kAveraging;
    if (text.size() > 3) {
      if (text[3] != ':') {
        throw imexstab::ConfigError("mode must be avg:q or proj, got '" + text + "'");
      }
      try {
        std::size_t used = 0;
        spec.q = std::stoi(text.substr(4), &used);
        if (used != text.size() - 4) {
          throw std::invalid_argument(text);
        }
      } catch (const std::exception&) {
        throw imexstab::ConfigError("bad averaging power in '" + text + "'");
      }
    }
    return;
  }
  throw imexstab::ConfigError("mode must be avg:q or proj, got '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMEX stability experiments for convection-diffusion with anti-diffusion"};
  ex::ExperimentSpec spec;
  std::string experiment = "surfaces";
  std::string mode = "avg:2";
  std::string out = spec.out_dir.string();

  app.add_option("--experiment", experiment,
                 "surfaces | energy-compare | shifted-decay | explicit-blowup | verify-lemmas | "
                 "convergence")
      ->capture_default_str();
  app.add_option("--m", spec.m, "Interior grid points per direction")->capture_default_str();
  app.add_option("--theta-deg", spec.theta_deg, "Advection angle in degrees")->capture_default_str();
  app.add_option("--epsilon", spec.epsilon, "Physical diffusion")->capture_default_str();
  app.add_option("--eps0", spec.epsilon0, "Artificial viscosity (repeatable for sweeps)");
  app.add_option("--k", spec.k, "Timestep (repeatable)");
  app.add_option("--steps", spec.steps, "Step count (repeatable, paired with --k)");
  app.add_option("--mode", mode, "Anti-diffusion: avg:q or proj")->capture_default_str();
  app.add_option("--seed", spec.seed, "Seed for randomized suites")->capture_default_str();
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--threads", spec.threads, "Sweep parallelism (0: IMEX_STAB_THREADS or cores)");
  app.set_config("--config", "", "key=value configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ex::kExitConfigError;
  }

  try {
    spec.name = ex::parse_experiment(experiment);
    parse_mode(mode, spec);
    spec.out_dir = out;
  } catch (const imexstab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return ex::kExitConfigError;
  }

  ex::ExperimentReport report;
  try {
    report = ex::run_experiment(spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::kExitAuditFailure;
  }

  for (const auto& f : report.files) {
    std::cout << "wrote " << f.string() << '\n';
  }
  for (const auto& r : report.runs) {
    std::cout << r.label << ": steps=" << r.completed_steps << '/' << r.steps
              << " max_energy=" << r.max_energy << (r.blew_up ? " BLOW-UP" : "");
    if (r.audit_passed) {
      std::cout << " audit=" << (*r.audit_passed ? "pass" : "fail");
    }
    std::cout << '\n';
  }
  for (const auto& m : report.messages) {
    std::cerr << m << '\n';
  }
  return report.exit_code;
}
