#ifndef RTDD_BEAMFORM_HPP
#define RTDD_BEAMFORM_HPP

#include <vector>

#include "rtdd/linalg.hpp"
#include "rtdd/model.hpp"
#include "rtdd/types.hpp"

namespace rtdd {

/// Precoders V and postcoders U for every user. Column counts equal the
/// stream counts; an inactive user has zero-column matrices.
struct BeamformerSet {
  std::vector<cmat> u_alpha;  ///< N_ak x d_ak
  std::vector<cmat> v_alpha;  ///< M_a x d_ak
  std::vector<cmat> u_beta;   ///< M_b x d_bl
  std::vector<cmat> v_beta;   ///< N_bl x d_bl
};

/// Per-user transmit powers (linear). Each user's power is split evenly over
/// its streams.
struct PowerProfile {
  std::vector<double> p_alpha;
  std::vector<double> p_beta;

  double total_alpha() const;

  /// P_alpha = SNR split evenly over the K downlink users, P_beta_l = SNR.
  /// -inf dB gives zero power.
  static PowerProfile from_snr_db(const NetworkConfig& config, double snr_db);
};

double db_to_linear(double db);

struct LeakageTrace {
  std::vector<double> total;                  ///< I^[i], i = 1..iterations (when recorded)
  std::vector<std::vector<double>> per_user;  ///< I_ak^[i] per iteration (when recorded)
  double initial_leakage = 0.0;               ///< I^[1]
  double final_leakage = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct IterationOptions {
  int max_iters = 5000;
  double leakage_stop = 1e-10;  ///< stop once I^[i] <= leakage_stop * I^[1]
  bool record_trace = true;
};

/// Random starting postcoders, Haar-distributed with orthonormal columns.
std::vector<cmat> init_postcoders(const NetworkConfig& config, const DofAllocation& dof, const RngStream& rng);

/// Interference covariance seen by the transmit side of user (beta, l):
/// sum_k (P_ak / d_ak) (G_akl^H U_ak)(G_akl^H U_ak)^H.
cmat covariance_tx(const ChannelSet& channels, const std::vector<cmat>& u_alpha, const PowerProfile& powers, int l);

/// Interference covariance at user (alpha, k):
/// sum_l (P_bl / d_bl) (G_akl V_bl)(G_akl V_bl)^H.
cmat covariance_rx(const ChannelSet& channels, const std::vector<cmat>& v_beta, const PowerProfile& powers, int k);

/// Least-interference subspace: eigenvectors of the d smallest eigenvalues.
inline cmat update_v_beta(const cmat& cov, int d) { return smallest_eigenvectors(cov, d); }
inline cmat update_u_alpha(const cmat& cov, int d) { return smallest_eigenvectors(cov, d); }

struct AlignmentResult {
  std::vector<cmat> u_alpha;
  std::vector<cmat> v_beta;
  LeakageTrace trace;
};

/// Alternating leakage minimization for the cross-link alignment. Each
/// iteration refreshes every V_bl from the previous U_ak, then every U_ak from
/// the new V_bl, and records I = sum_k tr(U_ak^H C_ak U_ak). Non-convergence is
/// reported in the trace.
AlignmentResult iterate_alignment(const ChannelSet& channels, const DofAllocation& dof, const PowerProfile& powers,
                                  const IterationOptions& opts, const RngStream& rng);

enum class ZeroForcingBranch {
  alpha_first_beta_receivers,  ///< M_a >= M_b: U_beta first, then V_alpha
  alpha_precoders_first,       ///< M_a < M_b: V_alpha first, then U_beta
};

ZeroForcingBranch zero_forcing_branch(int m_alpha, int m_beta);

struct ZeroForcingResult {
  std::vector<cmat> v_alpha;
  std::vector<cmat> u_beta;
  ZeroForcingBranch branch = ZeroForcingBranch::alpha_first_beta_receivers;
};

/// Pseudo-inverse zero forcing for the base-station side, given aligned U_alpha
/// and V_beta. Throws SingularSystemError when a stacked matrix has condition
/// number above `cond_limit`.
ZeroForcingResult zero_force_step2(const ChannelSet& channels, const DofAllocation& dof,
                                   const std::vector<cmat>& u_alpha, const std::vector<cmat>& v_beta,
                                   double cond_limit = 1e12);

/// Unit-norm columns everywhere. Throws std::invalid_argument on a zero column.
BeamformerSet normalize(const BeamformerSet& beamformers);

/// Alignment residuals (Frobenius norm over all terms of each condition) and
/// the smallest singular value of every effective direct link.
struct ResidualReport {
  double intercell_alpha = 0.0;  ///< U_ak^H G_akl V_bl
  double intercell_beta = 0.0;   ///< U_bl^H G_b V_ak
  double intracell_alpha = 0.0;  ///< U_ak^H H_ak V_ai, i != k
  double intracell_beta = 0.0;   ///< U_bl^H H_bj V_bj, j != l
  std::vector<double> margin_alpha;
  std::vector<double> margin_beta;

  double min_margin() const;
};

ResidualReport residual_report(const ChannelSet& channels, const BeamformerSet& beamformers);

/// Leakage minimization, zero forcing and normalization in sequence.
struct PipelineResult {
  BeamformerSet beamformers;
  LeakageTrace trace;
  ZeroForcingBranch branch = ZeroForcingBranch::alpha_first_beta_receivers;
};

PipelineResult build_beamformers(const ChannelSet& channels, const DofAllocation& dof, const PowerProfile& powers,
                                 const IterationOptions& opts, const RngStream& rng);

}  // namespace rtdd

#endif  // RTDD_BEAMFORM_HPP
