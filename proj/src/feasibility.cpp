#include "rtdd/feasibility.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>

#include "rtdd/linalg.hpp"

namespace rtdd {

namespace {

// Per-side subset sums indexed by bit mask, filled by walking the reflected
// Gray code so every step adds or removes a single user.
struct SubsetSums {
  std::vector<long long> streams;    // sum d
  std::vector<long long> antennas;   // sum N
  std::vector<long long> variables;  // sum d (N - d)
};

SubsetSums subset_sums(const std::vector<int>& d, const std::vector<int>& n) {
  const std::size_t count = std::size_t{1} << d.size();
  SubsetSums s{std::vector<long long>(count, 0), std::vector<long long>(count, 0),
               std::vector<long long>(count, 0)};
  std::size_t mask = 0;
  long long sd = 0, sn = 0, sv = 0;
  for (std::size_t step = 1; step < count; ++step) {
    const int bit = std::countr_zero(step);
    mask ^= std::size_t{1} << bit;
    const long long sign = ((mask >> bit) & 1U) != 0 ? 1 : -1;
    const auto b = static_cast<std::size_t>(bit);
    sd += sign * d[b];
    sn += sign * n[b];
    sv += sign * static_cast<long long>(d[b]) * (n[b] - d[b]);
    s.streams[mask] = sd;
    s.antennas[mask] = sn;
    s.variables[mask] = sv;
  }
  return s;
}

std::vector<int> mask_members(std::size_t mask, std::size_t size) {
  std::vector<int> out;
  for (std::size_t i = 0; i < size; ++i)
    if ((mask >> i) & 1U) out.push_back(static_cast<int>(i) + 1);
  return out;
}

void guard_enumeration(const NetworkConfig& config, const EnumerationOptions& options) {
  const int users = config.num_alpha() + config.num_beta();
  if (users > options.max_subset_users && !options.override_guard) {
    throw SizeGuardError("subset enumeration over K + L = " + std::to_string(users) +
                         " users exceeds the limit of " + std::to_string(options.max_subset_users) +
                         " (raise the limit or set the override)");
  }
  if (users > 62) throw SizeGuardError("subset enumeration beyond 62 users is not representable");
}

// First (alpha mask, beta mask) pair, in ascending order, for which `violates`
// holds.
std::optional<SubsetWitness> first_violation(std::size_t k, std::size_t l,
                                             const std::function<bool(std::size_t, std::size_t)>& violates) {
  for (std::size_t ma = 0; ma < (std::size_t{1} << k); ++ma)
    for (std::size_t mb = 0; mb < (std::size_t{1} << l); ++mb)
      if (violates(ma, mb)) return SubsetWitness{mask_members(ma, k), mask_members(mb, l)};
  return std::nullopt;
}

ConditionResult inequality(std::string id, long long lhs, long long rhs, const std::string& what) {
  ConditionResult r;
  r.id = std::move(id);
  r.pass = lhs <= rhs;
  r.detail = what + ": " + std::to_string(lhs) + (r.pass ? " <= " : " > ") + std::to_string(rhs);
  return r;
}

// The three base-station conditions shared by the necessary and rank tests.
void add_bs_conditions(FeasibilityReport& report, const NetworkConfig& config, const DofAllocation& dof) {
  report.add(inequality("8a", dof.sum_alpha(), config.m_alpha, "sum d_alpha vs M_alpha"));
  report.add(inequality("8b", dof.sum_beta(), config.m_beta, "sum d_beta vs M_beta"));
  report.add(inequality("8c", dof.sum(), std::max(config.m_alpha, config.m_beta), "d_sum vs max(M_alpha, M_beta)"));
}

}  // namespace

FeasibilityReport check_necessary(const NetworkConfig& config, const DofAllocation& dof,
                                  const EnumerationOptions& options) {
  validate_config(config, dof);
  guard_enumeration(config, options);

  FeasibilityReport report;
  add_bs_conditions(report, config, dof);

  const auto a = subset_sums(dof.d_alpha, config.n_alpha);
  const auto b = subset_sums(dof.d_beta, config.n_beta);
  const std::size_t K = config.n_alpha.size();
  const std::size_t L = config.n_beta.size();

  ConditionResult user_subsets{"8d", true, {}, {}, "subset streams vs max(subset antennas)"};
  user_subsets.subsets = first_violation(K, L, [&](std::size_t ma, std::size_t mb) {
    return a.streams[ma] + b.streams[mb] > std::max(a.antennas[ma], b.antennas[mb]);
  });
  user_subsets.pass = !user_subsets.subsets.has_value();
  report.add(std::move(user_subsets));

  ConditionResult counting{"8e", true, {}, {}, "equations vs variables over subsets"};
  counting.subsets = first_violation(K, L, [&](std::size_t ma, std::size_t mb) {
    return a.streams[ma] * b.streams[mb] > a.variables[ma] + b.variables[mb];
  });
  counting.pass = !counting.subsets.has_value();
  report.add(std::move(counting));
  return report;
}

int two_user_ic_dof(int m1, int n1, int m2, int n2) {
  return std::min({m1 + m2, n1 + n2, std::max(m1, n2), std::max(m2, n1)});
}

int single_cell_dof(const NetworkConfig& config) {
  const int sum_na = std::accumulate(config.n_alpha.begin(), config.n_alpha.end(), 0);
  const int sum_nb = std::accumulate(config.n_beta.begin(), config.n_beta.end(), 0);
  return std::max(std::min(config.m_alpha, sum_na), std::min(config.m_beta, sum_nb));
}

AlignmentMatrixLayout AlignmentMatrixLayout::of(const NetworkConfig& config, const DofAllocation& dof) {
  AlignmentMatrixLayout layout;
  layout.num_alpha = config.num_alpha();
  layout.num_beta = config.num_beta();
  layout.d_alpha = dof.d_alpha;
  layout.d_beta = dof.d_beta;
  Eigen::Index row = 0;
  for (int k = 0; k < layout.num_alpha; ++k)
    for (int l = 0; l < layout.num_beta; ++l) {
      layout.row_offsets.push_back(row);
      row += static_cast<Eigen::Index>(dof.d_alpha[static_cast<std::size_t>(k)]) *
             dof.d_beta[static_cast<std::size_t>(l)];
    }
  layout.rows = row;
  Eigen::Index col = 0;
  for (std::size_t k = 0; k < dof.d_alpha.size(); ++k) {
    layout.col_offsets.push_back(col);
    col += static_cast<Eigen::Index>(dof.d_alpha[k]) * (config.n_alpha[k] - dof.d_alpha[k]);
  }
  for (std::size_t l = 0; l < dof.d_beta.size(); ++l) {
    layout.col_offsets.push_back(col);
    col += static_cast<Eigen::Index>(dof.d_beta[l]) * (config.n_beta[l] - dof.d_beta[l]);
  }
  layout.cols = col;
  return layout;
}

AlignmentMatrix build_alignment_matrix(const NetworkConfig& config, const ChannelSet& channels,
                                       const DofAllocation& dof) {
  validate_config(config, dof);
  channels.check_dimensions(config);
  AlignmentMatrix out{cmat::Zero(0, 0), AlignmentMatrixLayout::of(config, dof)};
  const auto& layout = out.layout;
  out.matrix = cmat::Zero(layout.rows, layout.cols);
  const int K = config.num_alpha();
  const int L = config.num_beta();
  for (int k = 0; k < K; ++k) {
    const int da = dof.d_alpha[static_cast<std::size_t>(k)];
    const int free_a = config.n_alpha[static_cast<std::size_t>(k)] - da;
    for (int l = 0; l < L; ++l) {
      const int db = dof.d_beta[static_cast<std::size_t>(l)];
      const int free_b = config.n_beta[static_cast<std::size_t>(l)] - db;
      if (da == 0 || db == 0) continue;
      const auto part = partition_cross(channels.cross(k, l), da, db);
      const Eigen::Index alpha_col = layout.col_offsets[static_cast<std::size_t>(k)];
      const Eigen::Index beta_col = layout.col_offsets[static_cast<std::size_t>(K + l)];
      for (int m = 0; m < da; ++m) {
        const Eigen::Index row0 = layout.row_index(k, l, m, 0);
        // diag[d_ak](G3^T): m-th diagonal copy.
        out.matrix.block(row0, alpha_col + static_cast<Eigen::Index>(m) * free_a, db, free_a) = part.g3.transpose();
        // diag[d_bl](G2 row m): row n carries G2[m, :] in the n-th slot.
        for (int n = 0; n < db; ++n)
          out.matrix.block(row0 + n, beta_col + static_cast<Eigen::Index>(n) * free_b, 1, free_b) = part.g2.row(m);
      }
    }
  }
  return out;
}

FeasibilityReport check_sufficient(const NetworkConfig& config, const DofAllocation& dof, int trials,
                                   const RngStream& rng) {
  validate_config(config, dof);
  if (trials < 1) throw std::invalid_argument("check_sufficient: trials must be >= 1");

  FeasibilityReport report;
  add_bs_conditions(report, config, dof);
  if (!report.verdict) return report;  // rank test not evaluated

  const auto layout = AlignmentMatrixLayout::of(config, dof);
  ConditionResult rank{"rank", true, {}, RankWitness{}, ""};
  rank.rank->rows = layout.rows;
  rank.rank->cols = layout.cols;
  if (layout.rows > layout.cols) {
    rank.pass = false;
    rank.rank->structurally_impossible = true;
    rank.detail = "structurally impossible: " + std::to_string(layout.rows) + " equations > " +
                  std::to_string(layout.cols) + " unknowns";
  } else if (layout.rows == 0) {
    rank.detail = "no cross-link equations";
  } else {
    int full = 0;
    for (int t = 0; t < trials; ++t) {
      const auto channels = sample_channels(config, rng.substream(static_cast<std::uint64_t>(t)));
      const auto g = build_alignment_matrix(config, channels, dof);
      const Eigen::Index r = numerical_rank(g.matrix);
      rank.rank->ranks.push_back(r);
      if (r == layout.rows) ++full;
    }
    rank.pass = 2 * full > trials;
    rank.detail = std::to_string(full) + " of " + std::to_string(trials) + " draws full row rank" +
                  (rank.pass ? "" : ": rank-deficient on sampled channels");
  }
  report.add(std::move(rank));
  return report;
}

FeasibilityReport check_symmetric_sufficient(const NetworkConfig& config, int d_alpha, int d_beta,
                                             const EnumerationOptions& options) {
  if (d_alpha < 1 || d_beta < 1) throw ConfigError("symmetric streams must be >= 1");
  const auto dof = DofAllocation::symmetric(config, d_alpha, d_beta);
  validate_config(config, dof);
  guard_enumeration(config, options);

  const long long K = config.num_alpha();
  const long long L = config.num_beta();
  FeasibilityReport report;
  report.add(inequality("13a", K * d_alpha, config.m_alpha, "K d_alpha vs M_alpha"));
  report.add(inequality("13b", L * d_beta, config.m_beta, "L d_beta vs M_beta"));
  report.add(inequality("13c", K * d_alpha + L * d_beta, std::max(config.m_alpha, config.m_beta),
                        "K d_alpha + L d_beta vs max(M_alpha, M_beta)"));

  ConditionResult divisible{"13d", true, {}, {}, "all residual antenna counts divisible"};
  for (std::size_t k = 0; k < config.n_alpha.size() && divisible.pass; ++k) {
    if ((config.n_alpha[k] - d_alpha) % d_beta != 0) {
      divisible.pass = false;
      divisible.detail = "(N_alpha" + std::to_string(k + 1) + " - d_alpha) mod d_beta = " +
                         std::to_string((config.n_alpha[k] - d_alpha) % d_beta);
    }
  }
  for (std::size_t l = 0; l < config.n_beta.size() && divisible.pass; ++l) {
    if ((config.n_beta[l] - d_beta) % d_alpha != 0) {
      divisible.pass = false;
      divisible.detail = "(N_beta" + std::to_string(l + 1) + " - d_beta) mod d_alpha = " +
                         std::to_string((config.n_beta[l] - d_beta) % d_alpha);
    }
  }
  const bool exact = divisible.pass;
  report.add(std::move(divisible));

  const auto a = subset_sums(dof.d_alpha, config.n_alpha);
  const auto b = subset_sums(dof.d_beta, config.n_beta);
  ConditionResult counting{"13e", true, {}, {}, "|I_a||I_b| d_a d_b vs variables over subsets"};
  const long long dd = static_cast<long long>(d_alpha) * d_beta;
  counting.subsets = first_violation(config.n_alpha.size(), config.n_beta.size(), [&](std::size_t ma, std::size_t mb) {
    const long long eqs = std::popcount(ma) * static_cast<long long>(std::popcount(mb)) * dd;
    return eqs > a.variables[ma] + b.variables[mb];
  });
  counting.pass = !counting.subsets.has_value();
  report.add(std::move(counting));

  report.necessary_verdict = check_necessary(config, dof, options).verdict;
  report.exact = exact;
  return report;
}

HallGraph HallGraph::build(const NetworkConfig& config, int d_alpha, int d_beta) {
  if (d_alpha < 1 || d_beta < 1) throw ConfigError("symmetric streams must be >= 1");
  HallGraph g;
  g.num_alpha = config.num_alpha();
  g.num_beta = config.num_beta();
  for (std::size_t k = 0; k < config.n_alpha.size(); ++k) {
    const int free = config.n_alpha[k] - d_alpha;
    if (free < 0 || free % d_beta != 0)
      throw ConfigError("divisibility violated: N_alpha" + std::to_string(k + 1) + " - d_alpha not a multiple of d_beta");
    g.a_blocks.push_back(free / d_beta);
  }
  for (std::size_t l = 0; l < config.n_beta.size(); ++l) {
    const int free = config.n_beta[l] - d_beta;
    if (free < 0 || free % d_alpha != 0)
      throw ConfigError("divisibility violated: N_beta" + std::to_string(l + 1) + " - d_beta not a multiple of d_alpha");
    g.b_blocks.push_back(free / d_alpha);
  }
  for (int k = 0; k < g.num_alpha; ++k)
    for (int i = 0; i < g.a_blocks[static_cast<std::size_t>(k)]; ++i)
      g.right.push_back({VariableBlock::Side::alpha, k, i});
  for (int l = 0; l < g.num_beta; ++l)
    for (int j = 0; j < g.b_blocks[static_cast<std::size_t>(l)]; ++j)
      g.right.push_back({VariableBlock::Side::beta, l, j});
  return g;
}

std::vector<std::size_t> HallGraph::neighbors(int k, int l) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < right.size(); ++r) {
    const auto& v = right[r];
    if ((v.side == VariableBlock::Side::alpha && v.user == k) || (v.side == VariableBlock::Side::beta && v.user == l))
      out.push_back(r);
  }
  return out;
}

HallResult hall_condition(const NetworkConfig& config, int d_alpha, int d_beta) {
  validate_config(config);
  HallResult result;
  result.graph = HallGraph::build(config, d_alpha, d_beta);
  const auto& g = result.graph;
  const std::size_t left = g.left_size();

  std::vector<std::vector<std::size_t>> adj(left);
  for (int k = 0; k < g.num_alpha; ++k)
    for (int l = 0; l < g.num_beta; ++l) adj[static_cast<std::size_t>(k * g.num_beta + l)] = g.neighbors(k, l);

  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match_right(g.right.size(), none);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (std::size_t r : adj[u]) {
      if (seen[r]) continue;
      seen[r] = 1;
      if (match_right[r] == none || augment(match_right[r])) {
        match_right[r] = u;
        return true;
      }
    }
    return false;
  };

  std::size_t matched = 0;
  for (std::size_t u = 0; u < left; ++u) {
    seen.assign(g.right.size(), 0);
    if (augment(u)) ++matched;
  }
  result.complete = matched == left;
  if (result.complete) {
    result.matching.resize(left);
    for (std::size_t r = 0; r < g.right.size(); ++r)
      if (match_right[r] != none) result.matching[match_right[r]] = g.right[r];
  }
  return result;
}

SpecialRealization construct_special_realization(const NetworkConfig& config, int d_alpha, int d_beta) {
  SpecialRealization out{ChannelSet::zeros(config), hall_condition(config, d_alpha, d_beta)};
  if (!out.hall.complete) throw ConfigError("no complete matching: the subset counting condition fails");
  const int L = config.num_beta();
  for (int k = 0; k < config.num_alpha(); ++k)
    for (int l = 0; l < L; ++l) {
      const auto& v = out.hall.matching[static_cast<std::size_t>(k * L + l)];
      cmat& g = out.channels.g_cross[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      if (v.side == VariableBlock::Side::alpha) {
        // i-th d_beta x d_beta row block of G3 (G3 starts at row d_alpha).
        g.block(d_alpha + v.block * d_beta, 0, d_beta, d_beta).setIdentity();
      } else {
        // j-th d_alpha x d_alpha column block of G2 (G2 starts at column d_beta).
        g.block(0, d_beta + v.block * d_alpha, d_alpha, d_alpha).setIdentity();
      }
    }
  return out;
}

bool is_block_permutation(const NetworkConfig& config, const SpecialRealization& realization, int d_alpha,
                          int d_beta) {
  const auto dof = DofAllocation::symmetric(config, d_alpha, d_beta);
  const auto g = build_alignment_matrix(config, realization.channels, dof);
  std::vector<char> used(static_cast<std::size_t>(g.matrix.cols()), 0);
  for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
    Eigen::Index hits = 0;
    for (Eigen::Index c = 0; c < g.matrix.cols(); ++c) {
      const cplx v = g.matrix(r, c);
      if (v == cplx(0.0, 0.0)) continue;
      if (v != cplx(1.0, 0.0) || used[static_cast<std::size_t>(c)]) return false;
      used[static_cast<std::size_t>(c)] = 1;
      ++hits;
    }
    if (hits != 1) return false;
  }
  return true;
}

SearchResult search_max_sum_dof(const NetworkConfig& config, SearchMode mode, const SearchOptions& options) {
  validate_config(config);
  guard_enumeration(config, options.enumeration);

  std::vector<int> caps = config.n_alpha;
  caps.insert(caps.end(), config.n_beta.begin(), config.n_beta.end());
  std::uint64_t space = 1;
  for (int c : caps) {
    space *= static_cast<std::uint64_t>(c) + 1;
    if (space > options.budget)
      throw SizeGuardError("allocation search space exceeds the budget of " + std::to_string(options.budget));
  }

  // Odometer enumeration with the last user fastest yields ascending
  // lexicographic order; a stable sort on the sum keeps it within ties.
  std::vector<std::vector<int>> candidates;
  candidates.reserve(space);
  std::vector<int> cur(caps.size(), 0);
  for (std::uint64_t i = 0; i < space; ++i) {
    candidates.push_back(cur);
    for (std::size_t p = cur.size(); p-- > 0;) {
      if (++cur[p] <= caps[p]) break;
      cur[p] = 0;
    }
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  auto total = [&](std::size_t i) { return std::accumulate(candidates[i].begin(), candidates[i].end(), 0); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return total(x) > total(y); });

  const std::size_t K = config.n_alpha.size();
  auto to_alloc = [&](std::size_t i) {
    const auto& c = candidates[i];
    return DofAllocation{std::vector<int>(c.begin(), c.begin() + static_cast<long>(K)),
                         std::vector<int>(c.begin() + static_cast<long>(K), c.end())};
  };

  SearchResult result;
  result.mode = mode;
  FeasibilityReport necessary_report, sufficient_report;
  bool found = false;
  for (std::size_t i : order) {
    auto alloc = to_alloc(i);
    auto rep = check_necessary(config, alloc, options.enumeration);
    if (rep.verdict) {
      result.necessary_bound = alloc.sum();
      result.necessary_allocation = std::move(alloc);
      necessary_report = std::move(rep);
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("search: the all-zero allocation must satisfy the necessary conditions");

  found = false;
  const RngStream root(options.seed);
  for (std::size_t i : order) {
    auto alloc = to_alloc(i);
    auto rep = check_sufficient(config, alloc, options.trials, root.substream(i));
    if (rep.verdict) {
      result.sufficient_certified = alloc.sum();
      result.sufficient_allocation = std::move(alloc);
      sufficient_report = std::move(rep);
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("search: the all-zero allocation must satisfy the rank test");

  result.optimal = result.necessary_bound == result.sufficient_certified;
  if (mode == SearchMode::necessary_bound) {
    result.d_sum = result.necessary_bound;
    result.allocation = result.necessary_allocation;
    result.report = std::move(necessary_report);
  } else {
    result.d_sum = result.sufficient_certified;
    result.allocation = result.sufficient_allocation;
    result.report = std::move(sufficient_report);
  }
  return result;
}

NetworkConfig dual_config(const NetworkConfig& config) {
  return {config.m_beta, config.n_beta, config.m_alpha, config.n_alpha};
}

DofAllocation dual_allocation(const DofAllocation& dof) { return {dof.d_beta, dof.d_alpha}; }

}  // namespace rtdd
