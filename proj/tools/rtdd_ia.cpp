// rtdd-ia: feasibility checks, DoF search, beamformer construction and
// rate sweeps for two-cell reverse-TDD MIMO networks.
//
// Exit status: 0 ok, 1 infeasible under --strict, 2 bad input, 3 numerical
// failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rtdd/beamform.hpp"
#include "rtdd/evaluate.hpp"
#include "rtdd/feasibility.hpp"
#include "rtdd/io.hpp"

namespace {

using namespace rtdd;

constexpr int kInfeasible = 1;
constexpr int kInputError = 2;
constexpr int kNumericalError = 3;

struct Flags {
  std::string config_path;
  std::string dof;
  int trials = 5;
  std::uint64_t seed = 0;
  int iters = 5000;
  std::string snr;
  std::string out;
  std::string format;
  std::string mode = "necessary";
  bool strict = false;
  int workers = 1;
};

EnumerationOptions enumeration_from_env() {
  EnumerationOptions opts;
  if (const char* raw = std::getenv("IA_RTDD_MAX_SUBSET_USERS")) {
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 1 || v > 62)
      throw ConfigError(std::string("IA_RTDD_MAX_SUBSET_USERS must be an integer in [1, 62], got '") + raw + "'");
    opts.max_subset_users = static_cast<int>(v);
  }
  return opts;
}

void emit(const Flags& f, const std::string& text) {
  if (f.out.empty() || f.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(f.out, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + f.out + "'");
  file << text;
}

void require_format(const Flags& f, const std::string& allowed) {
  if (!f.format.empty() && f.format != allowed)
    throw ConfigError("--format " + f.format + " is not available here; this subcommand writes " + allowed);
}

double single_snr(const Flags& f, double fallback) {
  if (f.snr.empty()) return fallback;
  const auto grid = io::parse_snr_grid(f.snr);
  if (grid.size() != 1) throw ConfigError("--snr takes a single value for this subcommand");
  return grid.front();
}

IterationOptions iteration_options(const Flags& f, bool record) {
  if (f.iters < 1) throw ConfigError("--iters must be >= 1");
  IterationOptions o;
  o.max_iters = f.iters;
  o.record_trace = record;
  return o;
}

int run_check(const Flags& f) {
  require_format(f, "json");
  const auto config = io::load_config(f.config_path);
  const auto dof = io::parse_dof(f.dof, config);
  FeasibilityReport report;
  if (f.mode == "necessary") {
    report = check_necessary(config, dof, enumeration_from_env());
  } else {
    if (f.trials < 1) throw ConfigError("--trials must be >= 1");
    report = check_sufficient(config, dof, f.trials, RngStream(f.seed));
  }
  emit(f, io::dump(io::to_json(report)));
  return f.strict && !report.verdict ? kInfeasible : 0;
}

int run_search(const Flags& f) {
  require_format(f, "json");
  const auto config = io::load_config(f.config_path);
  if (f.trials < 1) throw ConfigError("--trials must be >= 1");
  SearchOptions opts;
  opts.trials = f.trials;
  opts.seed = f.seed;
  opts.enumeration = enumeration_from_env();
  const auto mode = f.mode == "necessary" ? SearchMode::necessary_bound : SearchMode::sufficient_certified;
  const auto result = search_max_sum_dof(config, mode, opts);
  emit(f, io::dump(io::to_json(result)));
  return f.strict && !result.optimal ? kInfeasible : 0;
}

int run_symmetric(const Flags& f) {
  require_format(f, "json");
  const auto config = io::load_config(f.config_path);
  const auto [da, db] = io::parse_symmetric_dof(f.dof);
  const auto report = check_symmetric_sufficient(config, da, db, enumeration_from_env());
  emit(f, io::dump(io::to_json(report)));
  return f.strict && !report.verdict ? kInfeasible : 0;
}

int run_construct(const Flags& f) {
  require_format(f, "json");
  const auto config = io::load_config(f.config_path);
  const auto dof = io::parse_dof(f.dof, config);
  const double snr_db = single_snr(f, 30.0);
  const auto stream = trial_stream(f.seed, 0);
  const auto channels = sample_channels(config, stream);
  const auto powers = PowerProfile::from_snr_db(config, snr_db);
  const auto built = build_beamformers(channels, dof, powers, iteration_options(f, false), stream.substream(1));
  auto j = io::to_json(residual_report(channels, built.beamformers));
  j["mean_channel_norm"] = std::strtod(io::format_double(channels.mean_frobenius_norm()).c_str(), nullptr);
  j["iterations"] = built.trace.iterations;
  j["converged"] = built.trace.converged;
  j["branch"] = built.branch == ZeroForcingBranch::alpha_first_beta_receivers ? "alpha_first_beta_receivers"
                                                                               : "alpha_precoders_first";
  emit(f, io::dump(j));
  return 0;
}

int run_leakage(const Flags& f) {
  require_format(f, "csv");
  const auto config = io::load_config(f.config_path);
  const auto dof = io::parse_dof(f.dof, config);
  const auto stream = trial_stream(f.seed, 0);
  const auto channels = sample_channels(config, stream);
  const auto powers = PowerProfile::from_snr_db(config, single_snr(f, 30.0));
  const auto result = iterate_alignment(channels, dof, powers, iteration_options(f, true), stream.substream(1));
  emit(f, io::trace_csv(result.trace));
  return 0;
}

int run_sumrate(const Flags& f) {
  const auto config = io::load_config(f.config_path);
  const auto dof = io::parse_dof(f.dof, config);
  if (f.trials < 1) throw ConfigError("--trials must be >= 1");
  if (f.workers < 1) throw ConfigError("--workers must be >= 1");
  SweepOptions opts;
  opts.iteration = iteration_options(f, false);
  opts.workers = f.workers;
  const auto grid = io::parse_snr_grid(f.snr.empty() ? "0:5:50" : f.snr);
  const auto result = monte_carlo_sweep(config, dof, grid, f.trials, f.seed, opts);
  emit(f, f.format == "json" ? io::dump(io::to_json(result)) : io::sweep_csv(result));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interference-alignment feasibility and simulation for two-cell reverse-TDD MIMO networks"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub, bool needs_dof) {
    sub->add_option("--config", f.config_path, "network config JSON")->required()->check(CLI::ExistingFile);
    auto* dof = sub->add_option("--dof", f.dof, "allocation 'a1,a2,...;b1,b2,...'");
    if (needs_dof) dof->required();
    sub->add_option("--out", f.out, "output file (default stdout)");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", f.seed, "random seed");
  };

  auto* check = app.add_subcommand("check", "necessary or rank-based sufficient check of one allocation");
  add_common(check, true);
  check->add_option("--mode", f.mode, "necessary or sufficient")->check(CLI::IsMember({"necessary", "sufficient"}));
  check->add_option("--trials", f.trials, "channel draws for the rank test");
  check->add_flag("--strict", f.strict, "exit 1 when infeasible");

  auto* search = app.add_subcommand("search", "maximum sum DoF over all allocations");
  add_common(search, false);
  search->add_option("--mode", f.mode, "which maximum to report")->check(CLI::IsMember({"necessary", "sufficient"}));
  search->add_option("--trials", f.trials, "channel draws per rank test");
  search->add_flag("--strict", f.strict, "exit 1 unless the bound is certified");

  auto* symmetric = app.add_subcommand("symmetric", "closed-form check of a symmetric allocation 'd_alpha;d_beta'");
  add_common(symmetric, true);
  symmetric->add_flag("--strict", f.strict, "exit 1 when infeasible");

  auto* construct = app.add_subcommand("construct", "build beamformers on one channel draw and report residuals");
  add_common(construct, true);
  construct->add_option("--iters", f.iters, "alignment iteration cap");
  construct->add_option("--snr", f.snr, "SNR in dB (default 30)");

  auto* leakage = app.add_subcommand("simulate-leakage", "leakage per iteration on one channel draw (CSV)");
  add_common(leakage, true);
  leakage->add_option("--iters", f.iters, "alignment iteration cap");
  leakage->add_option("--snr", f.snr, "SNR in dB (default 30)");

  auto* sumrate = app.add_subcommand("simulate-sumrate", "Monte-Carlo sum rate over an SNR grid");
  add_common(sumrate, true);
  sumrate->add_option("--iters", f.iters, "alignment iteration cap");
  sumrate->add_option("--snr", f.snr, "grid START:STEP:STOP in dB (default 0:5:50)");
  sumrate->add_option("--trials", f.trials, "channel draws per grid point");
  sumrate->add_option("--workers", f.workers, "parallel trial workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*check) return run_check(f);
    if (*search) return run_search(f);
    if (*symmetric) return run_symmetric(f);
    if (*construct) return run_construct(f);
    if (*leakage) return run_leakage(f);
    return run_sumrate(f);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const SizeGuardError& e) {
    std::cerr << "error: " << e.what() << " (raise IA_RTDD_MAX_SUBSET_USERS to allow it)\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}
