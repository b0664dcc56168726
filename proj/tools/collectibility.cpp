// Command-line front end: analytic witness and collectibility of two-qubit
// states, Monte Carlo coincidence campaigns and reduction of counts files.

#include <cmath>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "collectibility/io/commands.hpp"

namespace {

using collectibility::io::Command;
using collectibility::io::RunConfig;

struct Raw {
  std::string format = "table";
  std::string trials = "1e6";
  std::string calibration = "polarized-reference";
  double nu = 1.0;
  double xi = 0.5;
};

void add_common(CLI::App& sub, RunConfig& config, Raw& raw) {
  sub.add_option("--format", raw.format, "Report format: table, csv or json")
      ->check(CLI::IsMember({"table", "human", "csv", "json"}));
  sub.add_option("-o,--output", config.output,
                 "Report file (default stdout; relative paths honour "
                 "COLLECTIBILITY_OUTPUT_DIR)");
  sub.add_option("--seed", config.seed, "Random seed recorded in the report");
}

void add_state(CLI::App& sub, RunConfig& config) {
  sub.add_option("--state", config.state,
                 "bell, separable, mixed, werner:<p> or a density-matrix JSON file");
}

void add_campaign(CLI::App& sub, RunConfig& config, Raw& raw) {
  sub.add_option("--noise-preset", config.noise_preset,
                 "Parasitic level preset: ideal, bell (0.57), separable (0.49), mixed (0.85)");
  sub.add_option("--nu", raw.nu, "Two-photon mode overlap in [0, 1]")->check(CLI::Range(0.0, 1.0));
  sub.add_option("--trials", raw.trials, "Trials per setting and arm (e.g. 1e6)");
  sub.add_option("--calibration", raw.calibration,
                 "Parasitic-level calibration: polarized-reference or same-projection")
      ->check(CLI::IsMember({"polarized-reference", "same-projection"}));
  sub.add_flag("--twofold-product", config.twofold_product,
               "Synthesize four-fold counts from two-fold rates (product states only)");
}

std::uint64_t parse_trials(const std::string& text) {
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    collectibility::fail_validation("--trials: cannot parse '" + text + "'");
  }
  if (!(value >= 1.0 && value <= 1e12) || std::floor(value) != value) {
    collectibility::fail_validation("--trials must be a positive integer up to 1e12");
  }
  return static_cast<std::uint64_t>(value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective entanglement witness and collectibility of two-qubit states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(collectibility::io::kVersion));

  RunConfig config;
  Raw raw;

  auto* witness = app.add_subcommand("witness", "Analytic witness W and its components");
  add_state(*witness, config);
  add_common(*witness, config, raw);

  auto* collect = app.add_subcommand("collectibility", "Y(theta) profile and its maximum");
  add_state(*collect, config);
  add_common(*collect, config, raw);
  collect->add_option("--profile-points", config.profile_points, "Points in the Y(theta) profile");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coincidence campaign");
  add_state(*simulate, config);
  add_common(*simulate, config, raw);
  add_campaign(*simulate, config, raw);
  simulate->add_option("--xi", raw.xi, "Horizontal balance xi (default: from the state)")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--counts", config.counts, "Counts file to write (default counts.csv)");

  auto* sweep = app.add_subcommand("werner-sweep", "Werner interpolation of Bell and mixed campaigns");
  add_common(*sweep, config, raw);
  add_campaign(*sweep, config, raw);
  sweep->add_option("--xi", raw.xi, "Horizontal balance xi (default 0.5)")->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--grid", config.grid, "Werner parameters p")->delimiter(',');

  auto* reduce = app.add_subcommand("reduce", "Reduce an external counts file to W");
  add_common(*reduce, config, raw);
  reduce->add_option("--counts", config.counts, "Counts file to read")->required();
  reduce->add_option("--xi", raw.xi, "Horizontal balance xi")->required()->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* active = app.get_subcommands().front();
  if (active == witness) config.command = Command::witness;
  if (active == collect) config.command = Command::collectibility;
  if (active == simulate) config.command = Command::simulate;
  if (active == sweep) config.command = Command::werner_sweep;
  if (active == reduce) config.command = Command::reduce;

  try {
    config.format = *collectibility::io::format_from_string(raw.format);
    const auto given = [active](const char* name) {
      const CLI::Option* opt = active->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--nu")) config.nu = raw.nu;
    if (given("--xi")) config.xi = raw.xi;
    if (active == simulate || active == sweep) {
      config.trials = parse_trials(raw.trials);
      config.calibration = *collectibility::photonics::calibration_from_string(raw.calibration);
    }
  } catch (const collectibility::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return collectibility::io::exit_code(e.kind());
  }
  return collectibility::io::run(config, std::cout, std::cerr);
}
