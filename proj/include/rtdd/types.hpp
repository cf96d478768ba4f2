#ifndef RTDD_TYPES_HPP
#define RTDD_TYPES_HPP

#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rtdd {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

/// Antenna counts of a two-cell reverse-TDD network.
///
/// Cell alpha runs downlink: base station with `m_alpha` antennas serving K
/// users. Cell beta runs uplink: L users transmitting to a base station with
/// `m_beta` antennas.
struct NetworkConfig {
  int m_alpha = 0;
  std::vector<int> n_alpha;
  int m_beta = 0;
  std::vector<int> n_beta;

  int num_alpha() const { return static_cast<int>(n_alpha.size()); }
  int num_beta() const { return static_cast<int>(n_beta.size()); }

  bool operator==(const NetworkConfig&) const = default;
};

/// Per-user stream counts. A zero entry marks an inactive user.
struct DofAllocation {
  std::vector<int> d_alpha;
  std::vector<int> d_beta;

  int sum_alpha() const { return std::accumulate(d_alpha.begin(), d_alpha.end(), 0); }
  int sum_beta() const { return std::accumulate(d_beta.begin(), d_beta.end(), 0); }
  int sum() const { return sum_alpha() + sum_beta(); }

  static DofAllocation symmetric(const NetworkConfig& config, int d_alpha, int d_beta) {
    return {std::vector<int>(config.n_alpha.size(), d_alpha),
            std::vector<int>(config.n_beta.size(), d_beta)};
  }

  bool operator==(const DofAllocation&) const = default;
};

// Error taxonomy. Everything derives from std::exception so callers can catch
// broadly; the CLI maps ConfigError to exit status 2.

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rtdd

#endif  // RTDD_TYPES_HPP
