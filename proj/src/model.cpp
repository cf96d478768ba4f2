#include "rtdd/model.hpp"

#include <string>

#include "rtdd/linalg.hpp"

namespace rtdd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_antennas(const std::vector<int>& counts, const char* name) {
  if (counts.empty()) throw ConfigError(std::string(name) + " must list at least one user");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 1) {
      throw ConfigError(std::string(name) + "[" + std::to_string(i + 1) + "] = " + std::to_string(counts[i]) +
                        " must be >= 1");
    }
  }
}

void check_streams(const std::vector<int>& d, const std::vector<int>& n, const char* side) {
  if (d.size() != n.size()) {
    throw ConfigError(std::string("d_") + side + " has " + std::to_string(d.size()) + " entries but the config has " +
                      std::to_string(n.size()) + " users");
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::string who = std::string("d_") + side + std::to_string(i + 1);
    if (d[i] < 0) throw ConfigError(who + " = " + std::to_string(d[i]) + " is negative");
    if (d[i] > n[i]) throw ConfigError(who + " > N_" + side + std::to_string(i + 1));
  }
}

}  // namespace

void validate_config(const NetworkConfig& config) {
  if (config.m_alpha < 1) throw ConfigError("M_alpha must be >= 1");
  if (config.m_beta < 1) throw ConfigError("M_beta must be >= 1");
  check_antennas(config.n_alpha, "N_alpha");
  check_antennas(config.n_beta, "N_beta");
}

void validate_config(const NetworkConfig& config, const DofAllocation& dof) {
  validate_config(config);
  check_streams(dof.d_alpha, config.n_alpha, "alpha");
  check_streams(dof.d_beta, config.n_beta, "beta");
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(splitmix64(seed_ ^ splitmix64(stream_index_ + 0x632BE59BD9B4E019ULL)), index);
}

RngStream::Engine RngStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(stream_index_), static_cast<std::uint32_t>(stream_index_ >> 32)};
  return Engine(seq);
}

ChannelSet ChannelSet::zeros(const NetworkConfig& config) {
  ChannelSet ch;
  for (int n : config.n_alpha) ch.h_alpha.push_back(cmat::Zero(n, config.m_alpha));
  ch.g_cross.resize(config.n_alpha.size());
  for (std::size_t k = 0; k < config.n_alpha.size(); ++k)
    for (int nb : config.n_beta) ch.g_cross[k].push_back(cmat::Zero(config.n_alpha[k], nb));
  for (int n : config.n_beta) ch.h_beta.push_back(cmat::Zero(config.m_beta, n));
  ch.g_bs = cmat::Zero(config.m_beta, config.m_alpha);
  return ch;
}

double ChannelSet::mean_frobenius_norm() const {
  double total = g_bs.norm();
  std::size_t count = 1;
  for (const auto& h : h_alpha) total += h.norm(), ++count;
  for (const auto& row : g_cross)
    for (const auto& g : row) total += g.norm(), ++count;
  for (const auto& h : h_beta) total += h.norm(), ++count;
  return total / static_cast<double>(count);
}

NetworkConfig ChannelSet::shape() const {
  NetworkConfig c;
  c.m_alpha = static_cast<int>(g_bs.cols());
  c.m_beta = static_cast<int>(g_bs.rows());
  for (const auto& h : h_alpha) c.n_alpha.push_back(static_cast<int>(h.rows()));
  for (const auto& h : h_beta) c.n_beta.push_back(static_cast<int>(h.cols()));
  return c;
}

void ChannelSet::check_dimensions(const NetworkConfig& config) const {
  auto expect = [](const cmat& m, int rows, int cols, const std::string& name) {
    if (m.rows() != rows || m.cols() != cols) {
      throw ConfigError(name + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                        std::to_string(rows) + "x" + std::to_string(cols));
    }
  };
  const std::size_t K = config.n_alpha.size();
  const std::size_t L = config.n_beta.size();
  if (h_alpha.size() != K || g_cross.size() != K || h_beta.size() != L)
    throw ConfigError("channel set user counts do not match the config");
  for (std::size_t k = 0; k < K; ++k) {
    expect(h_alpha[k], config.n_alpha[k], config.m_alpha, "H_alpha" + std::to_string(k + 1));
    if (g_cross[k].size() != L) throw ConfigError("G_cross row " + std::to_string(k + 1) + " has wrong length");
    for (std::size_t l = 0; l < L; ++l)
      expect(g_cross[k][l], config.n_alpha[k], config.n_beta[l],
             "G_alpha" + std::to_string(k + 1) + std::to_string(l + 1));
  }
  for (std::size_t l = 0; l < L; ++l) expect(h_beta[l], config.m_beta, config.n_beta[l], "H_beta" + std::to_string(l + 1));
  expect(g_bs, config.m_beta, config.m_alpha, "G_beta");
}

ChannelSet sample_channels(const NetworkConfig& config, const RngStream& rng) {
  auto engine = rng.engine();
  ChannelSet ch;
  for (int n : config.n_alpha) ch.h_alpha.push_back(complex_gaussian(n, config.m_alpha, engine));
  ch.g_cross.resize(config.n_alpha.size());
  for (std::size_t k = 0; k < config.n_alpha.size(); ++k)
    for (int nb : config.n_beta) ch.g_cross[k].push_back(complex_gaussian(config.n_alpha[k], nb, engine));
  for (int n : config.n_beta) ch.h_beta.push_back(complex_gaussian(config.m_beta, n, engine));
  ch.g_bs = complex_gaussian(config.m_beta, config.m_alpha, engine);
  return ch;
}

}  // namespace rtdd
