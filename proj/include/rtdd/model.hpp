#ifndef RTDD_MODEL_HPP
#define RTDD_MODEL_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "rtdd/types.hpp"

namespace rtdd {

/// Throws ConfigError unless every antenna count is >= 1, K, L >= 1, the
/// allocation lengths match, and 0 <= d <= N per user.
void validate_config(const NetworkConfig& config, const DofAllocation& dof);
void validate_config(const NetworkConfig& config);

/// Reproducible random stream addressed by (seed, stream_index).
///
/// There is no global state: every consumer builds its own engine from the
/// stream, so trials run on any number of workers draw identical samples.
class RngStream {
 public:
  using Engine = std::mt19937_64;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0)
      : seed_(seed), stream_index_(stream_index) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  /// Child stream; distinct (parent, index) pairs give unrelated children.
  RngStream substream(std::uint64_t index) const;

  Engine engine() const;

  bool operator==(const RngStream&) const = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
};

/// One realization of every channel in the network.
struct ChannelSet {
  std::vector<cmat> h_alpha;               ///< H_ak: N_ak x M_a, BS alpha -> user (alpha,k)
  std::vector<std::vector<cmat>> g_cross;  ///< G_akl: N_ak x N_bl, user (beta,l) -> user (alpha,k)
  std::vector<cmat> h_beta;                ///< H_bl: M_b x N_bl, user (beta,l) -> BS beta
  cmat g_bs;                               ///< G_b: M_b x M_a, BS alpha -> BS beta

  const cmat& cross(int k, int l) const { return g_cross[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]; }

  /// Zero matrices with the shapes dictated by `config`.
  static ChannelSet zeros(const NetworkConfig& config);

  /// Mean Frobenius norm over all K + KL + L + 1 matrices.
  double mean_frobenius_norm() const;

  /// Antenna counts implied by the matrix shapes.
  NetworkConfig shape() const;

  /// Throws ConfigError if any shape disagrees with `config`.
  void check_dimensions(const NetworkConfig& config) const;
};

/// Draws a ChannelSet with i.i.d. CN(0,1) entries. Matrices are filled in the
/// order H_alpha, G_cross (k-major), H_beta, G_beta, each column-major.
ChannelSet sample_channels(const NetworkConfig& config, const RngStream& rng);

/// The four blocks of a cross channel split at (d_row, d_col):
/// [g1 g2; g3 g4] with g1 of size d_row x d_col.
template <typename Scalar>
struct CrossBlockPartition {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix g1, g2, g3, g4;

  Matrix assemble() const {
    Matrix out(g1.rows() + g3.rows(), g1.cols() + g2.cols());
    out << g1, g2, g3, g4;
    return out;
  }
};

template <typename Derived>
CrossBlockPartition<typename Derived::Scalar> partition_cross(const Eigen::MatrixBase<Derived>& g,
                                                              Eigen::Index d_row, Eigen::Index d_col) {
  if (d_row < 0 || d_col < 0 || d_row > g.rows() || d_col > g.cols()) {
    throw std::out_of_range("partition_cross: block size (" + std::to_string(d_row) + ", " + std::to_string(d_col) +
                            ") outside " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
  }
  const Eigen::Index rr = g.rows() - d_row;
  const Eigen::Index rc = g.cols() - d_col;
  CrossBlockPartition<typename Derived::Scalar> p;
  p.g1 = g.topLeftCorner(d_row, d_col);
  p.g2 = g.topRightCorner(d_row, rc);
  p.g3 = g.bottomLeftCorner(rr, d_col);
  p.g4 = g.bottomRightCorner(rr, rc);
  return p;
}

}  // namespace rtdd

#endif  // RTDD_MODEL_HPP
