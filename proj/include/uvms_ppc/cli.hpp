// Copyright 2026 The uvms_ppc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file cli.hpp
 * @brief Batch command-line front end.
 *
 *   uvms_ppc run <scenario> [--out log.csv] [--seed N] [--duration S] [--report path]
 *   uvms_ppc validate <scenario>
 *   uvms_ppc paper-scenario [--out path] [--model-file path]
 *   uvms_ppc check-invariants <log.csv>
 *   uvms_ppc robustness <scenario> [--report path] [--stress]
 *
 * Exit codes: 0 success, 1 validation or envelope failure, 2 usage error.
 */

#ifndef UVMS_PPC_CLI_HPP_
#define UVMS_PPC_CLI_HPP_

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uvms_ppc/log_io.hpp"
#include "uvms_ppc/scenario.hpp"
#include "uvms_ppc/simulation.hpp"
#include "uvms_ppc/verification.hpp"

namespace uvms {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

namespace detail {

inline int cmd_run(const std::string& scenario_path, const std::string& out_path, std::optional<std::uint64_t> seed,
                   std::optional<double> duration, const std::string& report_path, std::ostream& out,
                   std::ostream& err) {
  Scenario s;
  try {
    s = load_scenario(scenario_path);
    if (seed) {
      s.seed = *seed;
      s.noise.seed = *seed;
    }
    if (duration) s.duration = *duration;
    validate_scenario(s);
  } catch (const std::exception& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitFailure;
  }

  SimLog log;
  std::string failure;
  try {
    run_scenario_into(s, log);
  } catch (const SimulationError& e) {
    failure = e.what();
  }
  try {
    export_log(log, out_path);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  const OracleReport rep = envelope_battery(log);
  if (!report_path.empty()) {
    try {
      write_report(format_report(rep) + (failure.empty() ? "" : "run aborted: " + failure + "\n"), report_path);
    } catch (const std::exception& e) {
      err << e.what() << "\n";
      return kExitFailure;
    }
  }
  if (!failure.empty()) {
    err << failure << "\n" << "partial log (" << log.records.size() << " records) written to " << out_path << "\n";
    return kExitFailure;
  }
  out << "wrote " << log.records.size() << " records to " << out_path << "; min envelope margin " << rep.min_margin
      << "\n";
  return rep.passed ? kExitOk : kExitFailure;
}

inline int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    validate_scenario(load_scenario(path));
  } catch (const std::exception& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitFailure;
  }
  out << path << ": ok\n";
  return kExitOk;
}

inline int cmd_paper_scenario(const std::string& out_path, const std::string& model_file, std::ostream& out,
                              std::ostream& err) {
  Scenario s = paper_scenario();
  if (!model_file.empty()) s.model_file = model_file;
  const std::string text = scenario_to_string(s, model_file.empty());
  if (out_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!(f << text)) {
    err << "cannot write '" << out_path << "'\n";
    return kExitFailure;
  }
  return kExitOk;
}

inline int cmd_check_invariants(const std::string& path, std::ostream& out, std::ostream& err) {
  SimLog log;
  try {
    log = import_log(path);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  const OracleReport rep = envelope_battery(log);
  if (!rep.passed) {
    err << "envelope violation: " << rep.worst_case << "\n";
    return kExitFailure;
  }
  out << path << ": " << rep.samples << " records, no violations";
  if (!rep.notes.empty()) out << " (" << rep.notes << ")";
  out << ", min margin " << rep.min_margin << "\n";
  return kExitOk;
}

inline int cmd_robustness(const std::string& path, const std::string& report_path, bool stress, std::ostream& out,
                          std::ostream& err) {
  Scenario s;
  try {
    s = load_scenario(path);
    validate_scenario(s);
  } catch (const std::exception& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitFailure;
  }
  const RobustnessReport rep = robustness_battery(s);
  std::string text = format_report(rep);
  if (stress) {
    const VariantResult probe = stress_probe(s);
    text += "(stress probe, not asserted)\n" + format_report(probe.envelopes);
  }
  out << text;
  if (!report_path.empty()) {
    try {
      write_report(text, report_path);
    } catch (const std::exception& e) {
      err << e.what() << "\n";
      return kExitFailure;
    }
  }
  return rep.summary.passed ? kExitOk : kExitFailure;
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Prescribed-performance force control of an underwater vehicle-manipulator system"};
  app.require_subcommand(1);

  std::string scenario_path, out_path = "run.csv", report_path, log_path, model_file, paper_out;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  bool stress = false;

  CLI::App* run = app.add_subcommand("run", "Simulate a scenario and write its CSV log");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_path, "Log output path")->capture_default_str();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--duration", duration, "Override the duration (s)")->check(CLI::NonNegativeNumber);
  run->add_option("--report", report_path, "Also write an envelope report");

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file and its initial conditions");
  validate->add_option("scenario", scenario_path, "Scenario file")->required();

  CLI::App* paper = app.add_subcommand("paper-scenario", "Emit the built-in contact-task scenario");
  paper->add_option("--out", paper_out, "Write to a file instead of stdout");
  paper->add_option("--model-file", model_file, "Reference this model file instead of inlining the model");

  CLI::App* check = app.add_subcommand("check-invariants", "Re-verify envelope containment on a log");
  check->add_option("log", log_path, "CSV log")->required();

  CLI::App* robust = app.add_subcommand("robustness", "Disturbance/noise/plant sweep of a scenario");
  robust->add_option("scenario", scenario_path, "Scenario file")->required();
  robust->add_option("--report", report_path, "Write the report to a file");
  robust->add_flag("--stress", stress, "Also run the x100 disturbance probe");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  if (*run) return detail::cmd_run(scenario_path, out_path, seed, duration, report_path, out, err);
  if (*validate) return detail::cmd_validate(scenario_path, out, err);
  if (*paper) return detail::cmd_paper_scenario(paper_out, model_file, out, err);
  if (*check) return detail::cmd_check_invariants(log_path, out, err);
  if (*robust) return detail::cmd_robustness(scenario_path, report_path, stress, out, err);
  err << app.help();
  return kExitUsage;
}

}  // namespace uvms

#endif  // UVMS_PPC_CLI_HPP_
