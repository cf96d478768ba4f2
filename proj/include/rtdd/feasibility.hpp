#ifndef RTDD_FEASIBILITY_HPP
#define RTDD_FEASIBILITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtdd/model.hpp"
#include "rtdd/types.hpp"

namespace rtdd {

/// Violating user subsets, 1-based.
struct SubsetWitness {
  std::vector<int> i_alpha;
  std::vector<int> i_beta;
  bool operator==(const SubsetWitness&) const = default;
};

/// Outcome of the alignment-matrix rank test.
struct RankWitness {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<Eigen::Index> ranks;  ///< one entry per channel draw
  bool structurally_impossible = false;
};

struct ConditionResult {
  std::string id;  ///< "8a".."8e", "rank", "13a".."13e"
  bool pass = true;
  std::optional<SubsetWitness> subsets;
  std::optional<RankWitness> rank;
  std::string detail;
};

struct FeasibilityReport {
  bool verdict = true;
  std::vector<ConditionResult> conditions;

  // Only filled by check_symmetric_sufficient.
  std::optional<bool> necessary_verdict;  ///< the general necessary check on the expanded allocation
  std::optional<bool> exact;              ///< divisibility holds, so the symmetric verdict is if-and-only-if

  void add(ConditionResult result) {
    verdict = verdict && result.pass;
    conditions.push_back(std::move(result));
  }
  const ConditionResult* find(const std::string& id) const {
    for (const auto& c : conditions)
      if (c.id == id) return &c;
    return nullptr;
  }
  bool passed(const std::string& id) const {
    const auto* c = find(id);
    return c != nullptr && c->pass;
  }
};

/// Guard on the 2^(K+L) subset enumeration.
struct EnumerationOptions {
  int max_subset_users = 20;
  bool override_guard = false;
};

/// Converse bounds 8a-8e. 8d and 8e are checked over every subset pair; a
/// failing condition records the violation that is first when pairs are
/// ordered by (alpha mask, beta mask) with user i at bit i-1.
FeasibilityReport check_necessary(const NetworkConfig& config, const DofAllocation& dof,
                                  const EnumerationOptions& options = {});

/// Sum DoF of the two-user MIMO interference channel with M_i transmit and
/// N_i receive antennas at pair i.
int two_user_ic_dof(int m1, int n1, int m2, int n2);

/// Sum DoF obtained by switching one of the two cells off.
int single_cell_dof(const NetworkConfig& config);

/// Row and column bookkeeping of the linearized alignment system.
///
/// Rows: block (k, l) in k-major order, d_ak * d_bl rows, entry (m, n) at
/// offset m * d_bl + n. Columns: K blocks of width d_ak (N_ak - d_ak) for the
/// receive-side unknowns, then L blocks of width d_bl (N_bl - d_bl) for the
/// transmit-side unknowns.
struct AlignmentMatrixLayout {
  int num_alpha = 0;
  int num_beta = 0;
  std::vector<Eigen::Index> row_offsets;  ///< indexed k * L + l
  std::vector<Eigen::Index> col_offsets;  ///< K alpha blocks then L beta blocks
  std::vector<int> d_alpha, d_beta;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;

  static AlignmentMatrixLayout of(const NetworkConfig& config, const DofAllocation& dof);

  /// 0-based row of equation (m, n) in block (k, l).
  Eigen::Index row_index(int k, int l, int m, int n) const {
    return row_offsets[static_cast<std::size_t>(k * num_beta + l)] + m * d_beta[static_cast<std::size_t>(l)] + n;
  }
};

struct AlignmentMatrix {
  cmat matrix;
  AlignmentMatrixLayout layout;
};

/// Coefficient matrix of the first-order terms of the cross-link alignment
/// equations. Block (k, l) holds diag[d_ak](G3^T) in alpha column block k and
/// the stacked diag[d_bl](G2 row m) in beta column block l; the rest is zero.
AlignmentMatrix build_alignment_matrix(const NetworkConfig& config, const ChannelSet& channels,
                                       const DofAllocation& dof);

/// Rank-based sufficient test: 8a-8c plus full row rank of the alignment
/// matrix on a strict majority of `trials` independent channel draws.
FeasibilityReport check_sufficient(const NetworkConfig& config, const DofAllocation& dof, int trials,
                                   const RngStream& rng);

/// Closed-form sufficient test for symmetric allocations (13a-13e).
FeasibilityReport check_symmetric_sufficient(const NetworkConfig& config, int d_alpha, int d_beta,
                                             const EnumerationOptions& options = {});

/// A right-hand vertex of the matching graph: sub-block `block` of the
/// receive-side unknowns of user (alpha, user) or transmit-side unknowns of
/// user (beta, user). Indices are 0-based.
struct VariableBlock {
  enum class Side { alpha, beta };
  Side side = Side::alpha;
  int user = 0;
  int block = 0;
  bool operator==(const VariableBlock&) const = default;
};

/// Bipartite graph between equation blocks F_kl and variable sub-blocks.
struct HallGraph {
  int num_alpha = 0;
  int num_beta = 0;
  std::vector<int> a_blocks;  ///< (N_ak - d_alpha) / d_beta
  std::vector<int> b_blocks;  ///< (N_bl - d_beta) / d_alpha
  std::vector<VariableBlock> right;

  static HallGraph build(const NetworkConfig& config, int d_alpha, int d_beta);

  std::size_t left_size() const { return static_cast<std::size_t>(num_alpha * num_beta); }
  /// Right-vertex indices adjacent to equation block (k, l).
  std::vector<std::size_t> neighbors(int k, int l) const;
};

struct HallResult {
  bool complete = false;
  HallGraph graph;
  /// Matched right vertex per equation block, indexed k * L + l. Filled only
  /// when the matching saturates every block.
  std::vector<VariableBlock> matching;
};

/// Maximum bipartite matching (augmenting paths). Throws ConfigError when the
/// divisibility condition fails.
HallResult hall_condition(const NetworkConfig& config, int d_alpha, int d_beta);

struct SpecialRealization {
  ChannelSet channels;  ///< only the cross channels are populated; the rest are zero
  HallResult hall;
};

/// Cross channels with G1 = G4 = 0 and a single identity sub-block per
/// equation block, placed at the matched variable block.
SpecialRealization construct_special_realization(const NetworkConfig& config, int d_alpha, int d_beta);

/// True when every row of the alignment matrix built on the realization has a
/// single unit entry and no column is used twice, i.e. the Jacobian at the
/// zero point is a (partial) block permutation.
bool is_block_permutation(const NetworkConfig& config, const SpecialRealization& realization, int d_alpha,
                          int d_beta);

enum class SearchMode { necessary_bound, sufficient_certified };

struct SearchOptions {
  std::uint64_t budget = 5'000'000;  ///< cap on prod(N + 1)
  int trials = 5;
  std::uint64_t seed = 0;
  EnumerationOptions enumeration;
};

struct SearchResult {
  SearchMode mode = SearchMode::necessary_bound;
  int d_sum = 0;
  DofAllocation allocation;
  FeasibilityReport report;
  int necessary_bound = 0;
  int sufficient_certified = 0;
  DofAllocation necessary_allocation;
  DofAllocation sufficient_allocation;
  bool optimal = false;  ///< both maxima coincide
  int gap() const { return necessary_bound - sufficient_certified; }
};

/// Maximum sum DoF over all allocations 0 <= d <= N. Candidates are visited in
/// descending sum, ties in ascending lexicographic order; the first pass wins.
/// Both maxima are always computed so the optimality flag can be set.
SearchResult search_max_sum_dof(const NetworkConfig& config, SearchMode mode, const SearchOptions& options = {});

/// Swaps the roles of the two cells.
NetworkConfig dual_config(const NetworkConfig& config);
DofAllocation dual_allocation(const DofAllocation& dof);

}  // namespace rtdd

#endif  // RTDD_FEASIBILITY_HPP
