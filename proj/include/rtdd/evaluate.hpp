#ifndef RTDD_EVALUATE_HPP
#define RTDD_EVALUATE_HPP

#include <cstdint>
#include <vector>

#include "rtdd/beamform.hpp"
#include "rtdd/model.hpp"

namespace rtdd {

/// Per-user achievable rates in bits per channel use.
struct RateBreakdown {
  std::vector<double> rate_alpha;
  std::vector<double> rate_beta;
  double sum = 0.0;
};

/// log2 det(I + C_desired (I + C_intra + C_inter)^-1) at user (alpha, k), with
/// interference treated as noise.
double user_rate_alpha(const ChannelSet& channels, const BeamformerSet& beamformers, const PowerProfile& powers, int k);

/// Same for stream group (beta, l) at BS beta.
double user_rate_beta(const ChannelSet& channels, const BeamformerSet& beamformers, const PowerProfile& powers, int l);

RateBreakdown sum_rate(const ChannelSet& channels, const BeamformerSet& beamformers, const PowerProfile& powers);

/// round-robin split of min(M, sum N) streams over users, capped per user.
std::vector<int> round_robin_streams(int m, const std::vector<int>& n);

/// Sum rate of each cell operated alone with zero-forcing, on one channel draw.
/// Each cell spends total power SNR, split equally over its active users.
struct SingleCellRates {
  double alpha = 0.0;
  double beta = 0.0;
};
SingleCellRates single_cell_rates(const ChannelSet& channels, double snr_db);

/// Mean single-cell rate of each cell over `trials` draws; returns the larger.
/// Trial t uses the same channel stream as trial t of monte_carlo_sweep.
double baseline_single_cell(const NetworkConfig& config, double snr_db, int trials, std::uint64_t seed);

/// log2(1 + SNR).
double baseline_point_to_point(double snr_db);

struct SweepRow {
  double snr_db = 0.0;
  double mean_sum_rate = 0.0;
  std::vector<double> mean_rate_alpha;
  std::vector<double> mean_rate_beta;
  double baseline_single_cell = 0.0;
  double baseline_p2p = 0.0;
  int trials_ok = 0;
  int trials_failed = 0;
  bool failed() const { return trials_ok == 0; }
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct SweepOptions {
  IterationOptions iteration{.max_iters = 5000, .leakage_stop = 1e-10, .record_trace = false};
  int workers = 1;  ///< concurrent trial workers; results do not depend on it
};

/// For every grid point and trial: sample channels (stream = trial index), run
/// the beamformer pipeline with P_alpha = SNR split over K users and
/// P_beta_l = SNR, and average the sum rate in ascending trial order.
/// Failing trials are dropped from the means and counted.
SweepResult monte_carlo_sweep(const NetworkConfig& config, const DofAllocation& dof,
                              const std::vector<double>& snr_grid_db, int trials, std::uint64_t seed,
                              const SweepOptions& options = {});

/// Channel stream of trial `trial` under `seed`; the alignment start uses
/// its substream 1.
inline RngStream trial_stream(std::uint64_t seed, int trial) {
  return RngStream(seed, static_cast<std::uint64_t>(trial));
}

}  // namespace rtdd

#endif  // RTDD_EVALUATE_HPP
