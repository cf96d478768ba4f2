// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "rtdd/beamform.hpp"
#include "rtdd/evaluate.hpp"
#include "rtdd/feasibility.hpp"
#include "rtdd/io.hpp"
#include "support.hpp"

using namespace rtdd;

namespace {

const NetworkConfig kEx1{10, {4, 6, 6}, 13, {3, 6}};
const NetworkConfig kEx2{8, {2, 3, 8}, 12, {3, 7}};
const NetworkConfig kEx4{12, {6, 6, 8}, 16, {6, 6}};
const NetworkConfig kSim{12, {8, 8, 8, 8}, 18, {4, 4, 4}};
const DofAllocation kSimDof{{3, 3, 3, 3}, {2, 2, 2}};

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) { return io::format_double(v); }

Outcome example1() {
  const auto t0 = Clock::now();
  const auto r = search_max_sum_dof(kEx1, SearchMode::sufficient_certified);
  const double secs = seconds_since(t0);
  const int single = single_cell_dof(kEx1);
  return {r.necessary_bound == 13 && r.sufficient_certified == 13 && r.optimal && single == 10 && secs < 60,
          "necessary " + std::to_string(r.necessary_bound) + ", sufficient " + std::to_string(r.sufficient_certified) +
              ", optimal " + (r.optimal ? "yes" : "no") + ", single-cell " + std::to_string(single) + ", " +
              fmt(secs) + " s"};
}

Outcome example2() {
  const auto t0 = Clock::now();
  const auto r = search_max_sum_dof(kEx2, SearchMode::sufficient_certified);
  const double secs = seconds_since(t0);
  const int single = single_cell_dof(kEx2);
  return {r.necessary_bound == 12 && r.sufficient_certified == 11 && r.gap() == 1 && single == 10 && secs < 120,
          "necessary " + std::to_string(r.necessary_bound) + " at " + io::format_dof(r.necessary_allocation) +
              ", sufficient " + std::to_string(r.sufficient_certified) + " at " +
              io::format_dof(r.sufficient_allocation) + ", gap " + std::to_string(r.gap()) + ", single-cell " +
              std::to_string(single) + ", " + fmt(secs) + " s (expected 12/11)"};
}

Outcome example3() {
  const auto r = search_max_sum_dof(dual_config(kEx1), SearchMode::sufficient_certified);
  return {r.d_sum == 13 && r.necessary_bound == 13,
          "dual d_sum " + std::to_string(r.d_sum) + ", necessary " + std::to_string(r.necessary_bound)};
}

Outcome example4() {
  const auto r = check_symmetric_sufficient(kEx4, 4, 2);
  const auto s = search_max_sum_dof(kEx4, SearchMode::necessary_bound);
  const int single = single_cell_dof(kEx4);
  return {r.verdict && s.necessary_bound == 16 && single == 12,
          std::string("symmetric ") + (r.verdict ? "pass" : "fail") + ", necessary bound " +
              std::to_string(s.necessary_bound) + ", single-cell " + std::to_string(single)};
}

Outcome simulation_feasibility() {
  const auto r = check_sufficient(kSim, kSimDof, 5, RngStream(2024));
  const auto* rank = r.find("rank");
  int full = 0;
  Eigen::Index rows = 0, cols = 0;
  if (rank != nullptr && rank->rank) {
    rows = rank->rank->rows;
    cols = rank->rank->cols;
    for (auto v : rank->rank->ranks) full += v == rows;
  }
  const auto s = search_max_sum_dof(kSim, SearchMode::necessary_bound);
  return {r.verdict && rows == 72 && cols == 72 && full >= 4 && s.necessary_bound == 18,
          "alignment matrix " + std::to_string(rows) + "x" + std::to_string(cols) + ", full rank in " +
              std::to_string(full) + "/5, necessary bound " + std::to_string(s.necessary_bound)};
}

Outcome leakage_convergence() {
  const auto t0 = Clock::now();
  const auto powers = PowerProfile::from_snr_db(kSim, 30.0);
  IterationOptions opts;
  opts.max_iters = 2000;
  opts.leakage_stop = 1e-6;
  int monotone = 0, reached = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto stream = trial_stream(seed, 0);
    const auto ch = sample_channels(kSim, stream);
    const auto r = iterate_alignment(ch, kSimDof, powers, opts, stream.substream(1));
    const auto& tr = r.trace.total;
    bool ok = true;
    for (std::size_t i = 1; i < tr.size(); ++i)
      if (tr[i] > tr[i - 1] + 1e-9 * tr.front()) ok = false;
    monotone += ok;
    reached += r.trace.final_leakage <= 1e-6 * r.trace.initial_leakage;
  }
  const double secs = seconds_since(t0);
  return {monotone == 20 && reached >= 18 && secs < 600,
          "monotone " + std::to_string(monotone) + "/20, reached 1e-6 in " + std::to_string(reached) +
              "/20 (need 18), " + fmt(secs) + " s"};
}

Outcome sum_rate_sweep() {
  const auto grid = io::parse_snr_grid("0:10:50");
  const auto r = monte_carlo_sweep(kSim, kSimDof, grid, 50, 7);
  bool above = true;
  std::string rows;
  for (const auto& row : r.rows) {
    if (row.snr_db >= 20 && !(row.mean_sum_rate > row.baseline_single_cell)) above = false;
    rows += " " + fmt(row.snr_db) + "dB:" + fmt(row.mean_sum_rate) + "/" + fmt(row.baseline_single_cell);
  }
  const double slope = r.rows[5].mean_sum_rate - r.rows[4].mean_sum_rate;
  const double target = 18.0 * std::log2(10.0);
  const bool slope_ok = std::abs(slope - target) <= 0.15 * target;
  return {above && slope_ok, "slope " + fmt(slope) + " per 10 dB (target " + fmt(target) + "), " +
                                 (above ? "above" : "not above") + " baseline from 20 dB; proposed/baseline" + rows};
}

Outcome residual_suite() {
  struct Case {
    const NetworkConfig* config;
    DofAllocation dof;
  };
  const std::vector<Case> cases{{&kEx4, DofAllocation::symmetric(kEx4, 4, 2)}, {&kSim, kSimDof}};
  std::string detail;
  bool pass = true;
  for (const auto& c : cases) {
    const auto powers = PowerProfile::from_snr_db(*c.config, 30.0);
    int clean = 0, margins = 0;
    double worst = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto stream = trial_stream(seed, 0);
      const auto ch = sample_channels(*c.config, stream);
      IterationOptions opts;
      opts.record_trace = false;
      const auto p = build_beamformers(ch, c.dof, powers, opts, stream.substream(1));
      const auto res = residual_report(ch, p.beamformers);
      const double scale = ch.mean_frobenius_norm();
      const double r = std::max({res.intercell_beta, res.intracell_alpha, res.intracell_beta}) / scale;
      worst = std::max(worst, r);
      clean += r <= 1e-8;
      margins += res.min_margin() >= 1e-6;
    }
    pass = pass && clean == 100 && margins >= 95;
    detail += (detail.empty() ? "" : "; ") + std::to_string(c.config->m_alpha) + "x" +
              std::to_string(c.config->m_beta) + ": residuals ok " + std::to_string(clean) +
              "/100 (worst " + fmt(worst) + "), margins ok " + std::to_string(margins) + "/100";
  }
  return {pass, detail};
}

Outcome hall_equivalence() {
  testing::Gen gen(4242);
  int agree = 0, complete = 0, zero = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int da = gen.uniform(1, 3), db = gen.uniform(1, 3);
    const auto c = testing::divisible_config(gen, da, db, 3, 8);
    const auto hall = hall_condition(c, da, db);
    const auto dof = DofAllocation::symmetric(c, da, db);
    agree += hall.complete == !testing::oracle_subset_counting(c, dof).found && hall.complete == testing::oracle_hall(hall.graph);
    if (!hall.complete) continue;
    ++complete;
    const auto real = construct_special_realization(c, da, db);
    double residual = 0;
    for (int k = 0; k < c.num_alpha(); ++k)
      for (int l = 0; l < c.num_beta(); ++l) {
        const cmat& g = real.channels.cross(k, l);
        residual += (cmat::Identity(g.rows(), da).adjoint() * g * cmat::Identity(g.cols(), db)).norm();
      }
    zero += residual == 0.0;
  }
  return {agree == 100 && zero == complete && complete > 0,
          "agreement " + std::to_string(agree) + "/100, zero 7a residual on " + std::to_string(zero) + "/" +
              std::to_string(complete) + " special realizations"};
}

Outcome consistency() {
  testing::Gen gen(777);
  int sufficient = 0, violations = 0, dual_mismatch = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = gen.config(3, 5);
    const auto d = gen.allocation(c);
    const auto nec = check_necessary(c, d);
    const auto suf = check_sufficient(c, d, 3, RngStream(static_cast<std::uint64_t>(trial)));
    if (suf.verdict) {
      ++sufficient;
      violations += !nec.verdict;
    }
    dual_mismatch += check_necessary(dual_config(c), dual_allocation(d)).verdict != nec.verdict;
  }
  return {violations == 0 && dual_mismatch == 0,
          std::to_string(sufficient) + " sufficient passes, " + std::to_string(violations) +
              " without necessary pass, " + std::to_string(dual_mismatch) + " duality mismatches"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"search on (10,(4,6,6))x(13,(3,6))", example1},
      {"search on (8,(2,3,8))x(12,(3,7))", example2},
      {"dual of (10,(4,6,6))x(13,(3,6))", example3},
      {"symmetric (4,2) on (12,(6,6,8))x(16,(6,6))", example4},
      {"rank test on (12,(8,8,8,8))x(18,(4,4,4))", simulation_feasibility},
      {"leakage convergence at 30 dB", leakage_convergence},
      {"sum-rate sweep 0:10:50 dB", sum_rate_sweep},
      {"pipeline residuals", residual_suite},
      {"matching vs enumeration", hall_equivalence},
      {"sufficient implies necessary, duality", consistency},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
