#include "rtdd/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <thread>

#include "rtdd/linalg.hpp"

namespace rtdd {

namespace {

double stream_weight(double power, Eigen::Index streams) {
  return streams == 0 ? 0.0 : power / static_cast<double>(streams);
}

// log2 det(I + w M M^H N^-1) for Hermitian positive definite N. Uses the
// Cholesky factor N = C C^H: the determinant equals det(I + X X^H) with
// X = sqrt(w) C^-1 M, which stays Hermitian.
double rate_bits(const cmat& desired, double weight, const cmat& noise_plus_interference) {
  if (desired.rows() == 0) return 0.0;
  Eigen::LLT<cmat> llt(noise_plus_interference);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("rate: interference-plus-noise covariance is not positive definite (condition number " +
                           std::to_string(condition_number(noise_plus_interference)) + ")");
  }
  const cmat x = std::sqrt(weight) * llt.matrixL().solve(desired);
  const cmat gram = cmat::Identity(x.rows(), x.rows()) + x * x.adjoint();
  const double bits = hermitian_logdet(gram) / std::log(2.0);
  if (!std::isfinite(bits)) {
    throw NumericalFailure("rate: non-finite result (condition number " +
                           std::to_string(condition_number(noise_plus_interference)) + ")");
  }
  return std::max(0.0, bits);
}

void accumulate(cmat& cov, const cmat& term, double weight) {
  if (weight == 0.0 || term.cols() == 0) return;
  cov.noalias() += weight * term * term.adjoint();
}

}  // namespace

double user_rate_alpha(const ChannelSet& channels, const BeamformerSet& b, const PowerProfile& powers, int k) {
  const auto ku = static_cast<std::size_t>(k);
  const cmat& u = b.u_alpha[ku];
  const Eigen::Index d = u.cols();
  if (d == 0) return 0.0;
  const cmat uh_h = u.adjoint() * channels.h_alpha[ku];
  cmat interference = cmat::Identity(d, d);
  for (std::size_t i = 0; i < b.v_alpha.size(); ++i)
    if (i != ku) accumulate(interference, uh_h * b.v_alpha[i], stream_weight(powers.p_alpha[i], b.v_alpha[i].cols()));
  for (std::size_t l = 0; l < b.v_beta.size(); ++l)
    accumulate(interference, u.adjoint() * channels.g_cross[ku][l] * b.v_beta[l],
               stream_weight(powers.p_beta[l], b.v_beta[l].cols()));
  return rate_bits(uh_h * b.v_alpha[ku], stream_weight(powers.p_alpha[ku], d), interference);
}

double user_rate_beta(const ChannelSet& channels, const BeamformerSet& b, const PowerProfile& powers, int l) {
  const auto lu = static_cast<std::size_t>(l);
  const cmat& u = b.u_beta[lu];
  const Eigen::Index d = u.cols();
  if (d == 0) return 0.0;
  cmat interference = cmat::Identity(d, d);
  for (std::size_t j = 0; j < b.v_beta.size(); ++j)
    if (j != lu)
      accumulate(interference, u.adjoint() * channels.h_beta[j] * b.v_beta[j],
                 stream_weight(powers.p_beta[j], b.v_beta[j].cols()));
  const cmat uh_g = u.adjoint() * channels.g_bs;
  for (std::size_t k = 0; k < b.v_alpha.size(); ++k)
    accumulate(interference, uh_g * b.v_alpha[k], stream_weight(powers.p_alpha[k], b.v_alpha[k].cols()));
  return rate_bits(u.adjoint() * channels.h_beta[lu] * b.v_beta[lu], stream_weight(powers.p_beta[lu], d),
                   interference);
}

RateBreakdown sum_rate(const ChannelSet& channels, const BeamformerSet& b, const PowerProfile& powers) {
  RateBreakdown r;
  for (std::size_t k = 0; k < b.u_alpha.size(); ++k)
    r.rate_alpha.push_back(user_rate_alpha(channels, b, powers, static_cast<int>(k)));
  for (std::size_t l = 0; l < b.u_beta.size(); ++l)
    r.rate_beta.push_back(user_rate_beta(channels, b, powers, static_cast<int>(l)));
  r.sum = std::accumulate(r.rate_alpha.begin(), r.rate_alpha.end(), 0.0) +
          std::accumulate(r.rate_beta.begin(), r.rate_beta.end(), 0.0);
  return r;
}

std::vector<int> round_robin_streams(int m, const std::vector<int>& n) {
  std::vector<int> d(n.size(), 0);
  int remaining = std::min(m, std::accumulate(n.begin(), n.end(), 0));
  while (remaining > 0) {
    for (std::size_t i = 0; i < n.size() && remaining > 0; ++i) {
      if (d[i] < n[i]) {
        ++d[i];
        --remaining;
      }
    }
  }
  return d;
}

SingleCellRates single_cell_rates(const ChannelSet& channels, double snr_db) {
  const auto config = channels.shape();
  const double snr = db_to_linear(snr_db);
  const std::size_t K = config.n_alpha.size();
  const std::size_t L = config.n_beta.size();
  SingleCellRates out;

  // Each cell alone spends total power SNR, split equally over its active
  // users, so identical cells see identical statistics.

  // Cell alpha: dominant receive directions per user, zero-forcing precoder.
  {
    const auto d = round_robin_streams(config.m_alpha, config.n_alpha);
    const auto active = static_cast<double>(std::count_if(d.begin(), d.end(), [](int v) { return v > 0; }));
    BeamformerSet b;
    PowerProfile p{std::vector<double>(K, 0.0), std::vector<double>(L, 0.0)};
    const int total = std::accumulate(d.begin(), d.end(), 0);
    cmat stacked(total, config.m_alpha);
    Eigen::Index row = 0;
    for (std::size_t k = 0; k < K; ++k) {
      Eigen::JacobiSVD<cmat> svd(channels.h_alpha[k], Eigen::ComputeThinU);
      b.u_alpha.push_back(svd.matrixU().leftCols(d[k]));
      stacked.middleRows(row, d[k]) = b.u_alpha[k].adjoint() * channels.h_alpha[k];
      row += d[k];
      if (d[k] > 0) p.p_alpha[k] = snr / active;
    }
    const cmat tx = pseudo_inverse(stacked, 1e12, "single-cell alpha precoder");
    row = 0;
    for (std::size_t k = 0; k < K; ++k) {
      b.v_alpha.push_back(normalize_columns(tx.middleCols(row, d[k])));
      row += d[k];
    }
    for (std::size_t l = 0; l < L; ++l) {
      b.u_beta.push_back(cmat(config.m_beta, 0));
      b.v_beta.push_back(cmat(config.n_beta[l], 0));
    }
    out.alpha = sum_rate(channels, b, p).sum;
  }

  // Cell beta: dominant transmit directions per user, zero-forcing receiver.
  {
    const auto d = round_robin_streams(config.m_beta, config.n_beta);
    const auto active = static_cast<double>(std::count_if(d.begin(), d.end(), [](int v) { return v > 0; }));
    BeamformerSet b;
    PowerProfile p{std::vector<double>(K, 0.0), std::vector<double>(L, 0.0)};
    const int total = std::accumulate(d.begin(), d.end(), 0);
    cmat stacked(config.m_beta, total);
    Eigen::Index col = 0;
    for (std::size_t l = 0; l < L; ++l) {
      Eigen::JacobiSVD<cmat> svd(channels.h_beta[l], Eigen::ComputeThinV);
      b.v_beta.push_back(svd.matrixV().leftCols(d[l]));
      stacked.middleCols(col, d[l]) = channels.h_beta[l] * b.v_beta[l];
      col += d[l];
      if (d[l] > 0) p.p_beta[l] = snr / active;
    }
    const cmat rx = pseudo_inverse(stacked, 1e12, "single-cell beta receiver");
    col = 0;
    for (std::size_t l = 0; l < L; ++l) {
      b.u_beta.push_back(normalize_columns(rx.middleRows(col, d[l]).adjoint()));
      col += d[l];
    }
    for (std::size_t k = 0; k < K; ++k) {
      b.u_alpha.push_back(cmat(config.n_alpha[k], 0));
      b.v_alpha.push_back(cmat(config.m_alpha, 0));
    }
    out.beta = sum_rate(channels, b, p).sum;
  }
  return out;
}

double baseline_single_cell(const NetworkConfig& config, double snr_db, int trials, std::uint64_t seed) {
  validate_config(config);
  if (trials < 1) throw std::invalid_argument("baseline_single_cell: trials must be >= 1");
  double sum_alpha = 0.0, sum_beta = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto r = single_cell_rates(sample_channels(config, trial_stream(seed, t)), snr_db);
    sum_alpha += r.alpha;
    sum_beta += r.beta;
  }
  return std::max(sum_alpha, sum_beta) / trials;
}

double baseline_point_to_point(double snr_db) { return std::log2(1.0 + db_to_linear(snr_db)); }

SweepResult monte_carlo_sweep(const NetworkConfig& config, const DofAllocation& dof,
                              const std::vector<double>& snr_grid_db, int trials, std::uint64_t seed,
                              const SweepOptions& options) {
  validate_config(config, dof);
  if (trials < 1) throw std::invalid_argument("monte_carlo_sweep: trials must be >= 1");
  const std::size_t G = snr_grid_db.size();
  const auto T = static_cast<std::size_t>(trials);

  struct Cell {
    std::optional<RateBreakdown> rates;
    SingleCellRates single;
  };
  std::vector<Cell> cells(G * T);

  auto run_trial = [&](std::size_t t) {
    const auto stream = trial_stream(seed, static_cast<int>(t));
    const auto channels = sample_channels(config, stream);
    for (std::size_t g = 0; g < G; ++g) {
      Cell& cell = cells[g * T + t];
      const auto powers = PowerProfile::from_snr_db(config, snr_grid_db[g]);
      try {
        const auto built = build_beamformers(channels, dof, powers, options.iteration, stream.substream(1));
        cell.rates = sum_rate(channels, built.beamformers, powers);
      } catch (const SingularSystemError&) {
      } catch (const NumericalFailure&) {
      } catch (const std::invalid_argument&) {
      }
      cell.single = single_cell_rates(channels, snr_grid_db[g]);
    }
  };

  const auto workers = static_cast<std::size_t>(std::max(1, options.workers));
  if (workers == 1) {
    for (std::size_t t = 0; t < T; ++t) run_trial(t);
  } else {
    // Static round-robin assignment; each cell is written by exactly one worker.
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < T; t += workers) run_trial(t);
      });
  }

  SweepResult result;
  result.trials = trials;
  result.seed = seed;
  const std::size_t K = config.n_alpha.size();
  const std::size_t L = config.n_beta.size();
  for (std::size_t g = 0; g < G; ++g) {
    SweepRow row;
    row.snr_db = snr_grid_db[g];
    row.mean_rate_alpha.assign(K, 0.0);
    row.mean_rate_beta.assign(L, 0.0);
    double single_alpha = 0.0, single_beta = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const Cell& cell = cells[g * T + t];
      single_alpha += cell.single.alpha;
      single_beta += cell.single.beta;
      if (!cell.rates) {
        ++row.trials_failed;
        continue;
      }
      ++row.trials_ok;
      row.mean_sum_rate += cell.rates->sum;
      for (std::size_t k = 0; k < K; ++k) row.mean_rate_alpha[k] += cell.rates->rate_alpha[k];
      for (std::size_t l = 0; l < L; ++l) row.mean_rate_beta[l] += cell.rates->rate_beta[l];
    }
    if (row.trials_ok > 0) {
      const double n = row.trials_ok;
      row.mean_sum_rate /= n;
      for (auto& v : row.mean_rate_alpha) v /= n;
      for (auto& v : row.mean_rate_beta) v /= n;
    }
    row.baseline_single_cell = std::max(single_alpha, single_beta) / static_cast<double>(T);
    row.baseline_p2p = baseline_point_to_point(row.snr_db);
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace rtdd
