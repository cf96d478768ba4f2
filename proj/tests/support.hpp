#ifndef RTDD_TESTS_SUPPORT_HPP
#define RTDD_TESTS_SUPPORT_HPP

// Random generators and brute-force oracles shared by the test binaries.
// The oracles are deliberately naive: no Gray codes, no matching, no layout
// helpers from the library.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "rtdd/feasibility.hpp"
#include "rtdd/types.hpp"

namespace rtdd::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return uniform(0, 1) == 1; }
  std::mt19937_64& engine() { return rng_; }

  NetworkConfig config(int max_users, int max_antennas) {
    NetworkConfig c;
    c.m_alpha = uniform(1, max_antennas);
    c.m_beta = uniform(1, max_antennas);
    const int K = uniform(1, max_users);
    const int L = uniform(1, max_users);
    for (int k = 0; k < K; ++k) c.n_alpha.push_back(uniform(1, max_antennas));
    for (int l = 0; l < L; ++l) c.n_beta.push_back(uniform(1, max_antennas));
    return c;
  }

  DofAllocation allocation(const NetworkConfig& c) {
    DofAllocation d;
    for (int n : c.n_alpha) d.d_alpha.push_back(uniform(0, n));
    for (int n : c.n_beta) d.d_beta.push_back(uniform(0, n));
    return d;
  }

 private:
  std::mt19937_64 rng_;
};

inline int mask_sum(const std::vector<int>& v, unsigned mask) {
  int s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (mask & (1u << i)) s += v[i];
  return s;
}

inline std::vector<int> mask_members(unsigned mask, std::size_t n) {
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (1u << i)) out.push_back(static_cast<int>(i) + 1);
  return out;
}

struct OracleViolation {
  bool found = false;
  std::vector<int> i_alpha, i_beta;
};

/// First (alpha mask, beta mask) pair in ascending order violating the
/// per-subset antenna bound.
inline OracleViolation oracle_subset_antennas(const NetworkConfig& c, const DofAllocation& d) {
  const std::size_t K = c.n_alpha.size(), L = c.n_beta.size();
  for (unsigned a = 0; a < (1u << K); ++a)
    for (unsigned b = 0; b < (1u << L); ++b) {
      const int lhs = mask_sum(d.d_alpha, a) + mask_sum(d.d_beta, b);
      const int rhs = std::max(mask_sum(c.n_alpha, a), mask_sum(c.n_beta, b));
      if (lhs > rhs) return {true, mask_members(a, K), mask_members(b, L)};
    }
  return {};
}

/// Same for the equations-versus-variables count.
inline OracleViolation oracle_subset_counting(const NetworkConfig& c, const DofAllocation& d) {
  const std::size_t K = c.n_alpha.size(), L = c.n_beta.size();
  for (unsigned a = 0; a < (1u << K); ++a)
    for (unsigned b = 0; b < (1u << L); ++b) {
      long lhs = 0, rhs = 0;
      for (std::size_t k = 0; k < K; ++k) {
        if (!(a & (1u << k))) continue;
        rhs += d.d_alpha[k] * (c.n_alpha[k] - d.d_alpha[k]);
        for (std::size_t l = 0; l < L; ++l)
          if (b & (1u << l)) lhs += d.d_alpha[k] * d.d_beta[l];
      }
      for (std::size_t l = 0; l < L; ++l)
        if (b & (1u << l)) rhs += d.d_beta[l] * (c.n_beta[l] - d.d_beta[l]);
      if (lhs > rhs) return {true, mask_members(a, K), mask_members(b, L)};
    }
  return {};
}

inline bool oracle_necessary(const NetworkConfig& c, const DofAllocation& d) {
  const int sa = d.sum_alpha(), sb = d.sum_beta();
  return sa <= c.m_alpha && sb <= c.m_beta && sa + sb <= std::max(c.m_alpha, c.m_beta) &&
         !oracle_subset_antennas(c, d).found && !oracle_subset_counting(c, d).found;
}

// Config with N_alpha = d_alpha + d_beta * a_k and N_beta = d_beta + d_alpha * b_l.
inline NetworkConfig divisible_config(Gen& gen, int da, int db, int max_users, int max_antennas) {
  NetworkConfig c;
  c.m_alpha = gen.uniform(1, 12);
  c.m_beta = gen.uniform(1, 12);
  const int K = gen.uniform(1, max_users), L = gen.uniform(1, max_users);
  for (int k = 0; k < K; ++k) c.n_alpha.push_back(da + db * gen.uniform(0, (max_antennas - da) / db));
  for (int l = 0; l < L; ++l) c.n_beta.push_back(db + da * gen.uniform(0, (max_antennas - db) / da));
  return c;
}

// Hall's condition by brute force: every set S of equation blocks must see at
// least |S| variable blocks.
inline bool oracle_hall(const HallGraph& g) {
  const std::size_t left = g.left_size();
  for (std::size_t s = 1; s < (std::size_t{1} << left); ++s) {
    std::vector<char> seen(g.right.size(), 0);
    std::size_t size = 0;
    for (std::size_t u = 0; u < left; ++u) {
      if (!(s & (std::size_t{1} << u))) continue;
      ++size;
      for (std::size_t r : g.neighbors(static_cast<int>(u) / g.num_beta, static_cast<int>(u) % g.num_beta)) seen[r] = 1;
    }
    if (static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1)) < size) return false;
  }
  return true;
}

}  // namespace rtdd::testing

#endif  // RTDD_TESTS_SUPPORT_HPP
