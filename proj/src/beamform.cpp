#include "rtdd/beamform.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace rtdd {

namespace {

std::vector<Eigen::Index> offsets(const std::vector<int>& d) {
  std::vector<Eigen::Index> out;
  Eigen::Index acc = 0;
  for (int v : d) {
    out.push_back(acc);
    acc += v;
  }
  out.push_back(acc);
  return out;
}

double per_stream(double power, Eigen::Index streams) {
  return streams == 0 ? 0.0 : power / static_cast<double>(streams);
}

}  // namespace

double db_to_linear(double db) { return std::isinf(db) && db < 0 ? 0.0 : std::pow(10.0, db / 10.0); }

double PowerProfile::total_alpha() const { return std::accumulate(p_alpha.begin(), p_alpha.end(), 0.0); }

PowerProfile PowerProfile::from_snr_db(const NetworkConfig& config, double snr_db) {
  const double snr = db_to_linear(snr_db);
  const auto K = static_cast<double>(config.n_alpha.size());
  return {std::vector<double>(config.n_alpha.size(), snr / K), std::vector<double>(config.n_beta.size(), snr)};
}

std::vector<cmat> init_postcoders(const NetworkConfig& config, const DofAllocation& dof, const RngStream& rng) {
  validate_config(config, dof);
  auto engine = rng.engine();
  std::vector<cmat> out;
  for (std::size_t k = 0; k < config.n_alpha.size(); ++k)
    out.push_back(random_orthonormal(config.n_alpha[k], dof.d_alpha[k], engine));
  return out;
}

cmat covariance_tx(const ChannelSet& channels, const std::vector<cmat>& u_alpha, const PowerProfile& powers, int l) {
  const auto nb = channels.h_beta[static_cast<std::size_t>(l)].cols();
  cmat cov = cmat::Zero(nb, nb);
  for (std::size_t k = 0; k < u_alpha.size(); ++k) {
    const double w = per_stream(powers.p_alpha[k], u_alpha[k].cols());
    if (w == 0.0) continue;
    const cmat t = channels.cross(static_cast<int>(k), l).adjoint() * u_alpha[k];
    cov.noalias() += w * t * t.adjoint();
  }
  return cov;
}

cmat covariance_rx(const ChannelSet& channels, const std::vector<cmat>& v_beta, const PowerProfile& powers, int k) {
  const auto na = channels.h_alpha[static_cast<std::size_t>(k)].rows();
  cmat cov = cmat::Zero(na, na);
  for (std::size_t l = 0; l < v_beta.size(); ++l) {
    const double w = per_stream(powers.p_beta[l], v_beta[l].cols());
    if (w == 0.0) continue;
    const cmat t = channels.cross(k, static_cast<int>(l)) * v_beta[l];
    cov.noalias() += w * t * t.adjoint();
  }
  return cov;
}

AlignmentResult iterate_alignment(const ChannelSet& channels, const DofAllocation& dof, const PowerProfile& powers,
                                  const IterationOptions& opts, const RngStream& rng) {
  if (opts.max_iters < 1) throw std::invalid_argument("iterate_alignment: max_iters must be >= 1");
  if (!(opts.leakage_stop > 0.0)) throw std::invalid_argument("iterate_alignment: leakage_stop must be > 0");
  const auto config = channels.shape();
  validate_config(config, dof);
  const int K = config.num_alpha();
  const int L = config.num_beta();

  AlignmentResult out;
  out.u_alpha = init_postcoders(config, dof, rng);
  out.v_beta.resize(static_cast<std::size_t>(L));
  auto& trace = out.trace;

  std::vector<double> per_user(static_cast<std::size_t>(K));
  for (int i = 1; i <= opts.max_iters; ++i) {
    for (int l = 0; l < L; ++l)
      out.v_beta[static_cast<std::size_t>(l)] =
          update_v_beta(covariance_tx(channels, out.u_alpha, powers, l), dof.d_beta[static_cast<std::size_t>(l)]);
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
      const cmat cov = covariance_rx(channels, out.v_beta, powers, k);
      cmat& u = out.u_alpha[static_cast<std::size_t>(k)];
      u = update_u_alpha(cov, dof.d_alpha[static_cast<std::size_t>(k)]);
      const double leak = std::max(0.0, (u.adjoint() * cov * u).trace().real());
      per_user[static_cast<std::size_t>(k)] = leak;
      total += leak;
    }
    if (opts.record_trace) {
      trace.total.push_back(total);
      trace.per_user.push_back(per_user);
    }
    if (i == 1) trace.initial_leakage = total;
    trace.final_leakage = total;
    trace.iterations = i;
    if (total <= opts.leakage_stop * trace.initial_leakage) {
      trace.converged = true;
      break;
    }
  }
  return out;
}

ZeroForcingBranch zero_forcing_branch(int m_alpha, int m_beta) {
  return m_alpha >= m_beta ? ZeroForcingBranch::alpha_first_beta_receivers : ZeroForcingBranch::alpha_precoders_first;
}

namespace {

// A precoder must right-invert its stack and a receive filter left-invert it;
// with the wrong shape the pseudo-inverse only gives a least-squares fit.
cmat right_inverse(const cmat& a, double cond_limit, const char* what) {
  if (a.rows() > a.cols())
    throw SingularSystemError(std::string(what) + ": " + std::to_string(a.rows()) + " streams to null with " +
                              std::to_string(a.cols()) + " antennas");
  return pseudo_inverse(a, cond_limit, what);
}

cmat left_inverse(const cmat& a, double cond_limit, const char* what) {
  if (a.cols() > a.rows())
    throw SingularSystemError(std::string(what) + ": " + std::to_string(a.cols()) + " streams to separate with " +
                              std::to_string(a.rows()) + " antennas");
  return pseudo_inverse(a, cond_limit, what);
}

}  // namespace

ZeroForcingResult zero_force_step2(const ChannelSet& channels, const DofAllocation& dof,
                                   const std::vector<cmat>& u_alpha, const std::vector<cmat>& v_beta,
                                   double cond_limit) {
  const auto config = channels.shape();
  validate_config(config, dof);
  const std::size_t K = config.n_alpha.size();
  const std::size_t L = config.n_beta.size();
  const auto off_a = offsets(dof.d_alpha);
  const auto off_b = offsets(dof.d_beta);
  const Eigen::Index sum_a = off_a.back();
  const Eigen::Index sum_b = off_b.back();

  // [H_b1 V_b1 ... H_bL V_bL]: desired uplink directions at BS beta.
  cmat uplink(config.m_beta, sum_b);
  for (std::size_t l = 0; l < L; ++l) uplink.middleCols(off_b[l], dof.d_beta[l]) = channels.h_beta[l] * v_beta[l];
  // Stack of U_ak^H H_ak: effective downlink rows.
  cmat downlink(sum_a, config.m_alpha);
  for (std::size_t k = 0; k < K; ++k) downlink.middleRows(off_a[k], dof.d_alpha[k]) = u_alpha[k].adjoint() * channels.h_alpha[k];

  ZeroForcingResult out;
  out.branch = zero_forcing_branch(config.m_alpha, config.m_beta);
  out.v_alpha.resize(K);
  out.u_beta.resize(L);

  if (out.branch == ZeroForcingBranch::alpha_first_beta_receivers) {
    const cmat rx = left_inverse(uplink, cond_limit, "M_alpha >= M_beta branch, uplink receive filter");
    for (std::size_t l = 0; l < L; ++l) out.u_beta[l] = rx.middleRows(off_b[l], dof.d_beta[l]).adjoint();
    cmat stacked(sum_a + sum_b, config.m_alpha);
    stacked << downlink, rx * channels.g_bs;
    const cmat tx = right_inverse(stacked, cond_limit, "M_alpha >= M_beta branch, downlink precoder");
    for (std::size_t k = 0; k < K; ++k) out.v_alpha[k] = tx.middleCols(off_a[k], dof.d_alpha[k]);
  } else {
    const cmat tx = right_inverse(downlink, cond_limit, "M_alpha < M_beta branch, downlink precoder");
    for (std::size_t k = 0; k < K; ++k) out.v_alpha[k] = tx.middleCols(off_a[k], dof.d_alpha[k]);
    cmat stacked(config.m_beta, sum_b + sum_a);
    stacked << uplink, channels.g_bs * tx;
    const cmat rx = left_inverse(stacked, cond_limit, "M_alpha < M_beta branch, uplink receive filter");
    for (std::size_t l = 0; l < L; ++l) out.u_beta[l] = rx.middleRows(off_b[l], dof.d_beta[l]).adjoint();
  }
  return out;
}

BeamformerSet normalize(const BeamformerSet& b) {
  BeamformerSet out;
  for (const auto& m : b.u_alpha) out.u_alpha.push_back(normalize_columns(m));
  for (const auto& m : b.v_alpha) out.v_alpha.push_back(normalize_columns(m));
  for (const auto& m : b.u_beta) out.u_beta.push_back(normalize_columns(m));
  for (const auto& m : b.v_beta) out.v_beta.push_back(normalize_columns(m));
  return out;
}

double ResidualReport::min_margin() const {
  double lo = std::numeric_limits<double>::infinity();
  for (double m : margin_alpha) lo = std::min(lo, m);
  for (double m : margin_beta) lo = std::min(lo, m);
  return lo;
}

ResidualReport residual_report(const ChannelSet& channels, const BeamformerSet& b) {
  const std::size_t K = b.u_alpha.size();
  const std::size_t L = b.v_beta.size();
  double s7a = 0, s7b = 0, s7c = 0, s7d = 0;
  ResidualReport r;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t l = 0; l < L; ++l) {
      s7a += (b.u_alpha[k].adjoint() * channels.g_cross[k][l] * b.v_beta[l]).squaredNorm();
      s7b += (b.u_beta[l].adjoint() * channels.g_bs * b.v_alpha[k]).squaredNorm();
    }
    for (std::size_t i = 0; i < K; ++i)
      if (i != k) s7c += (b.u_alpha[k].adjoint() * channels.h_alpha[k] * b.v_alpha[i]).squaredNorm();
    const cmat direct = b.u_alpha[k].adjoint() * channels.h_alpha[k] * b.v_alpha[k];
    r.margin_alpha.push_back(direct.size() == 0 ? std::numeric_limits<double>::infinity() : min_singular_value(direct));
  }
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t j = 0; j < L; ++j)
      if (j != l) s7d += (b.u_beta[l].adjoint() * channels.h_beta[j] * b.v_beta[j]).squaredNorm();
    const cmat direct = b.u_beta[l].adjoint() * channels.h_beta[l] * b.v_beta[l];
    r.margin_beta.push_back(direct.size() == 0 ? std::numeric_limits<double>::infinity() : min_singular_value(direct));
  }
  r.intercell_alpha = std::sqrt(s7a);
  r.intercell_beta = std::sqrt(s7b);
  r.intracell_alpha = std::sqrt(s7c);
  r.intracell_beta = std::sqrt(s7d);
  return r;
}

PipelineResult build_beamformers(const ChannelSet& channels, const DofAllocation& dof, const PowerProfile& powers,
                                 const IterationOptions& opts, const RngStream& rng) {
  auto aligned = iterate_alignment(channels, dof, powers, opts, rng);
  auto zf = zero_force_step2(channels, dof, aligned.u_alpha, aligned.v_beta);
  PipelineResult out;
  out.trace = std::move(aligned.trace);
  out.branch = zf.branch;
  out.beamformers = normalize(BeamformerSet{std::move(aligned.u_alpha), std::move(zf.v_alpha), std::move(zf.u_beta),
                                            std::move(aligned.v_beta)});
  return out;
}

}  // namespace rtdd
