#pragma once

#include "gpce/basis.hpp"
#include "gpce/criteria.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gpce {

enum class Scheme {
  Random,
  LhsStandard,
  LhsMaximin,
  LhsPhiP,
  LhsScEse,
  CoherenceOptimal,
  GreedyMc,
  GreedyMcCc,
  GreedyD,
  GreedyDCoh,
};

/// Canonical CLI/config name ("random", "lhs-std", "greedy-mc-cc", ...).
std::string_view scheme_name(Scheme scheme);
/// Accepts canonical names with '-' or '_' separators.
std::optional<Scheme> parse_scheme(std::string_view name);
bool is_lhs(Scheme scheme);
bool is_greedy(Scheme scheme);
bool needs_basis(Scheme scheme);

/// M points in [0, 1]^d with positive weights (all 1 unless importance
/// weighted). For greedy designs `order` holds the pool index of each row in
/// selection order.
struct SampleSet {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
  Scheme scheme = Scheme::Random;
  std::uint64_t seed = 0;
  std::vector<Eigen::Index> order;
  double acceptance_rate = 1.0;

  Eigen::Index size() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }
  bool is_weighted() const;
  /// First n rows (points, weights, order).
  SampleSet prefix(Eigen::Index n) const;
};

SampleSet random_grid(Eigen::Index m, int d, std::uint64_t seed);

SampleSet lhs_standard(Eigen::Index m, int d, std::uint64_t seed);

enum class PoolCriterion { Maximin, PhiP };

struct LhsPoolParams {
  int n_pool = 100;
  PoolCriterion criterion = PoolCriterion::Maximin;
  double p_exp = 10.0;
  double t = 2.0;
  DistanceMetric metric = DistanceMetric::Euclidean;
};

/// Seed of the k-th candidate design inside lhs_pool_optimal.
std::uint64_t lhs_pool_candidate_seed(std::uint64_t seed, int k);

/// Best of n_pool standard LHS designs under the pool criterion.
SampleSet lhs_pool_optimal(Eigen::Index m, int d, std::uint64_t seed,
                           const LhsPoolParams& params = {});

struct EseParams {
  int outer_iterations = 30;
  int inner_iterations = 0;       ///< 0 selects min(50, 2 M)
  double initial_threshold = 0.005;  ///< fraction of the initial phi_p
  double cool = 0.9;              ///< threshold factor after an improving sweep
  double warm = 1.1;              ///< threshold factor after a stagnant sweep
  double p_exp = 10.0;
  double t = 2.0;
  DistanceMetric metric = DistanceMetric::Euclidean;
};

/// Outcome of one ESE run: optimized points and the phi_p before and after.
struct EseResult {
  Eigen::MatrixXd points;
  double phi_before = 0.0;
  double phi_after = 0.0;
};

/// Element-exchange optimization of phi_p; exchanges swap two entries of one
/// column so per-column stratification is preserved.
EseResult ese_optimize(Eigen::MatrixXd points, std::uint64_t seed, const EseParams& params);

/// Strata [lo, hi] of the stretched-center LHS: border strata of width
/// alpha/M at both ends, the M-2 interior strata evenly splitting the rest.
/// With alpha = 1 these are the standard LHS strata.
std::vector<std::pair<double, double>> stretched_strata(Eigen::Index m, double alpha);

/// Stretched-center LHS followed by ESE optimization of phi_p.
SampleSet lhs_sc_ese(Eigen::Index m, int d, std::uint64_t seed, double alpha = 0.25,
                     const EseParams& params = {});

enum class Proposal { Auto, Uniform, Arcsine };

struct ChainParams {
  int burn_in = 1000;
  int thinning = 10;
  Proposal proposal = Proposal::Auto;  ///< Auto: arcsine when p >= d, else uniform
};

/// Independence Metropolis-Hastings draws from a density proportional to
/// B(xi)^2 = sum_j Psi_j(xi)^2 on [-1, 1]^d; weights are 1 / B.
SampleSet coherence_optimal(Eigen::Index m, const MultiIndexSet& basis, std::uint64_t seed,
                            const ChainParams& chain = {});

enum class GreedyCriterion { MutualCoherence, MutualCoherenceCrossCorrelation, DOptimal, DCoherence };

struct GreedyConfig {
  Eigen::Index pool_size = 0;
  GreedyCriterion criterion = GreedyCriterion::MutualCoherence;
  Eigen::Index target_size = 0;
  ChainParams chain;  ///< pool chain for DCoherence
};

/// Per-step record of the greedy selection (score of the chosen row).
struct GreedyTrace {
  std::vector<double> scores;
};

/// Random pool, random first row, then target_size - 1 additions, each the
/// pool-wide argmin of the criterion over unused rows.
SampleSet greedy_l1_optimal(const GreedyConfig& config, const MultiIndexSet& basis,
                            const InputSpec& spec, std::uint64_t seed,
                            GreedyTrace* trace = nullptr);

/// Greedy selection from an explicit pool matrix (rows already weighted).
/// Returns the pool row indices in selection order.
std::vector<Eigen::Index> greedy_select(const Eigen::MatrixXd& pool_matrix,
                                        GreedyCriterion criterion, Eigen::Index target_size,
                                        Eigen::Index first_row, GreedyTrace* trace = nullptr);

}  // namespace gpce
