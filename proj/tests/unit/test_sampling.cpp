#include "gpce/basis.hpp"
#include "gpce/criteria.hpp"
#include "gpce/rng.hpp"
#include "gpce/sampling.hpp"

#include "common/quadrature.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace gpce;

namespace {

void expect_in_unit_cube(const SampleSet& s) {
  EXPECT_TRUE((s.points.array() >= 0.0).all());
  EXPECT_TRUE((s.points.array() <= 1.0).all());
}

// One point per [j/m, (j+1)/m) in every column.
void expect_stratified(const Eigen::MatrixXd& pts) {
  const auto m = pts.rows();
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    std::vector<int> bins(static_cast<std::size_t>(m), 0);
    for (Eigen::Index i = 0; i < m; ++i)
      ++bins[static_cast<std::size_t>(std::min<Eigen::Index>(m - 1, static_cast<Eigen::Index>(pts(i, k) * m)))];
    for (int b : bins) EXPECT_EQ(b, 1);
  }
}

}  // namespace

TEST(SchemeNames, RoundTrip) {
  for (auto s : {Scheme::Random, Scheme::LhsStandard, Scheme::LhsMaximin, Scheme::LhsPhiP, Scheme::LhsScEse,
                 Scheme::CoherenceOptimal, Scheme::GreedyMc, Scheme::GreedyMcCc, Scheme::GreedyD,
                 Scheme::GreedyDCoh})
    EXPECT_EQ(parse_scheme(scheme_name(s)), s);
  EXPECT_EQ(parse_scheme("greedy_mc_cc"), Scheme::GreedyMcCc);
  EXPECT_FALSE(parse_scheme("sobol").has_value());
}

TEST(RandomGrid, DeterministicAndShaped) {
  auto a = random_grid(3, 2, 42), b = random_grid(3, 2, 42);
  EXPECT_EQ(a.points, b.points);
  EXPECT_NE(a.points, random_grid(3, 2, 43).points);
  auto one = random_grid(1, 5, 1);
  EXPECT_EQ(one.points.rows(), 1);
  EXPECT_EQ(one.points.cols(), 5);
  expect_in_unit_cube(random_grid(500, 4, 3));
  EXPECT_FALSE(a.is_weighted());
}

TEST(LhsStandard, Stratification) {
  auto q = lhs_standard(4, 1, 5);
  std::vector<double> v(q.points.data(), q.points.data() + 4);
  std::sort(v.begin(), v.end());
  for (int j = 0; j < 4; ++j) {
    EXPECT_GE(v[static_cast<std::size_t>(j)], j / 4.0);
    EXPECT_LT(v[static_cast<std::size_t>(j)], (j + 1) / 4.0);
  }
  expect_stratified(lhs_standard(4, 2, 6).points);
  expect_stratified(lhs_standard(100, 3, 7).points);
  EXPECT_EQ(lhs_standard(30, 3, 8).points, lhs_standard(30, 3, 8).points);
}

TEST(LhsPoolOptimal, SinglePoolIsStandard) {
  LhsPoolParams p;
  p.n_pool = 1;
  auto pool = lhs_pool_optimal(10, 3, 99, p);
  EXPECT_EQ(pool.points, lhs_standard(10, 3, lhs_pool_candidate_seed(99, 0)).points);
}

TEST(LhsPoolOptimal, BeatsPlainDesignAndKeepsStrata) {
  auto best = lhs_pool_optimal(5, 2, 17);
  expect_stratified(best.points);
  double plain = maximin_distance(lhs_standard(5, 2, lhs_pool_candidate_seed(17, 0)).points);
  EXPECT_GE(maximin_distance(best.points), plain);
}

TEST(LhsPoolOptimal, TinyPoolIsExhaustiveBest) {
  for (auto crit : {PoolCriterion::Maximin, PoolCriterion::PhiP}) {
    LhsPoolParams p;
    p.n_pool = 3;
    p.criterion = crit;
    auto best = lhs_pool_optimal(8, 3, 5, p);
    Eigen::MatrixXd expected;
    double score = 0.0;
    for (int k = 0; k < 3; ++k) {
      auto c = lhs_standard(8, 3, lhs_pool_candidate_seed(5, k)).points;
      double s = crit == PoolCriterion::Maximin ? -maximin_distance(c) : phi_p(c);
      if (k == 0 || s < score) {
        score = s;
        expected = c;
      }
    }
    EXPECT_EQ(best.points, expected);
  }
}

TEST(StretchedStrata, Geometry) {
  auto s = stretched_strata(6, 0.25);
  ASSERT_EQ(s.size(), 6u);
  EXPECT_DOUBLE_EQ(s.front().first, 0.0);
  EXPECT_NEAR(s.front().second, 0.25 / 6.0, 1e-15);
  EXPECT_NEAR(s.back().first, 1.0 - 0.25 / 6.0, 1e-15);
  EXPECT_DOUBLE_EQ(s.back().second, 1.0);
  for (std::size_t j = 1; j + 1 < s.size(); ++j) {
    EXPECT_NEAR(s[j].first, s[j - 1].second, 1e-15);
    EXPECT_NEAR(s[j].second - s[j].first, (1.0 - 0.5 / 6.0) / 4.0, 1e-15);
  }
  auto std_strata = stretched_strata(5, 1.0);
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_NEAR(std_strata[j].first, j / 5.0, 1e-15);
    EXPECT_NEAR(std_strata[j].second, (j + 1) / 5.0, 1e-15);
  }
}

TEST(LhsScEse, TwoPointsHugEdges) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = lhs_sc_ese(2, 1, seed, 0.25);
    for (int i = 0; i < 2; ++i) {
      double x = s.points(i, 0);
      EXPECT_LE(std::min(x, 1.0 - x), 0.125);
    }
  }
  EXPECT_THROW(lhs_sc_ese(1, 2, 0), std::invalid_argument);
}

TEST(LhsScEse, NoShrinkNoOptimizationIsStandardLhs) {
  EseParams none;
  none.outer_iterations = 0;
  auto s = lhs_sc_ese(12, 3, 77, 1.0, none);
  expect_stratified(s.points);
}

TEST(LhsScEse, InteriorStrataHoldOnePointPerColumn) {
  const Eigen::Index m = 15;
  auto s = lhs_sc_ese(m, 3, 4, 0.25);
  auto strata = stretched_strata(m, 0.25);
  for (Eigen::Index k = 0; k < 3; ++k)
    for (const auto& [lo, hi] : strata) {
      int count = 0;
      for (Eigen::Index i = 0; i < m; ++i) count += s.points(i, k) >= lo && s.points(i, k) <= hi;
      EXPECT_EQ(count, 1);
    }
}

TEST(Ese, NeverWorsensPhiP) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto start = lhs_standard(30, 2, seed).points;
    auto r = ese_optimize(start, seed + 100, {});
    EXPECT_NEAR(r.phi_before, phi_p(start), 1e-9 * r.phi_before);
    EXPECT_LE(r.phi_after, r.phi_before);
    EXPECT_NEAR(r.phi_after, phi_p(r.points), 1e-9 * r.phi_after);
    expect_stratified(r.points);
  }
}

TEST(CoherenceOptimal, ConstantBasisIsUnweighted) {
  auto s = coherence_optimal(50, MultiIndexSet::build(2, 0, 0), 3);
  EXPECT_TRUE(s.weights.isOnes(0.0));
  expect_in_unit_cube(s);
}

TEST(CoherenceOptimal, WeightsTimesBIsOne) {
  auto basis = MultiIndexSet::build(3, 3, 2);
  auto s = coherence_optimal(100, basis, 8);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    std::vector<double> xi(3);
    for (int k = 0; k < 3; ++k) xi[static_cast<std::size_t>(k)] = 2.0 * s.points(i, k) - 1.0;
    EXPECT_NEAR(s.weights[i] * std::sqrt(basis_sum_of_squares(basis, xi)), 1.0, 1e-12);
  }
  EXPECT_GT(s.acceptance_rate, 0.0);
  EXPECT_LE(s.acceptance_rate, 1.0);
}

TEST(CoherenceOptimal, MatchesQuadratureDensity) {
  // Target on [-1, 1]: B^2(xi) / 2 normalized; B^2 integrates to N_c under the
  // uniform density, so the bin mass is (1/N_c) * int_bin B^2 / 2.
  auto basis = MultiIndexSet::build(1, 8, 1);
  auto s = coherence_optimal(100000, basis, 2021);
  const int bins = 40;
  std::vector<double> hist(bins, 0.0);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    hist[static_cast<std::size_t>(std::min(bins - 1, static_cast<int>(s.points(i, 0) * bins)))] += 1.0;
  auto [x, w] = test::gauss_legendre(20);
  double tv = 0.0;
  for (int b = 0; b < bins; ++b) {
    double lo = -1.0 + 2.0 * b / bins, hi = lo + 2.0 / bins, mass = 0.0;
    for (int k = 0; k < x.size(); ++k) {
      double xi = lo + (x[k] + 1.0) * 0.5 * (hi - lo);
      mass += w[k] * basis_sum_of_squares(basis, std::vector<double>{xi}) * (hi - lo) / 2.0;
    }
    mass /= static_cast<double>(basis.size());
    tv += std::abs(hist[static_cast<std::size_t>(b)] / static_cast<double>(s.size()) - mass);
  }
  EXPECT_LT(0.5 * tv, 0.05);
}

TEST(Greedy, WholePool) {
  auto basis = MultiIndexSet::build(2, 2, 2);
  for (auto crit : {GreedyCriterion::MutualCoherence, GreedyCriterion::MutualCoherenceCrossCorrelation,
                    GreedyCriterion::DOptimal, GreedyCriterion::DCoherence}) {
    GreedyConfig cfg;
    cfg.pool_size = 12;
    cfg.target_size = 12;
    cfg.criterion = crit;
    auto s = greedy_l1_optimal(cfg, basis, InputSpec({0, 0}, {1, 1}), 3);
    std::set<Eigen::Index> used(s.order.begin(), s.order.end());
    EXPECT_EQ(used.size(), 12u);
    EXPECT_EQ(s.points.rows(), 12);
    expect_in_unit_cube(s);
  }
}

TEST(Greedy, PoolExhaustedThrows) {
  GreedyConfig cfg;
  cfg.pool_size = 5;
  cfg.target_size = 6;
  EXPECT_THROW(greedy_l1_optimal(cfg, MultiIndexSet::build(2, 2, 2), InputSpec({0, 0}, {1, 1}), 1),
               std::invalid_argument);
}

TEST(Greedy, McStepIsExhaustiveArgmin) {
  auto basis = MultiIndexSet::build(2, 2, 2);
  Eigen::MatrixXd pool = basis_matrix_unit(random_grid(6, 2, 12).points, basis);
  auto order = greedy_select(pool, GreedyCriterion::MutualCoherence, 3, 0);
  ASSERT_EQ(order.size(), 3u);
  std::vector<Eigen::Index> chosen{0};
  for (int step = 1; step < 3; ++step) {
    double best = 0.0;
    Eigen::Index arg = -1;
    for (Eigen::Index c = 0; c < 6; ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(chosen.size()) + 1, pool.cols());
      for (std::size_t r = 0; r < chosen.size(); ++r) rows.row(static_cast<Eigen::Index>(r)) = pool.row(chosen[r]);
      rows.row(rows.rows() - 1) = pool.row(c);
      double mu = mutual_coherence(rows);
      if (arg < 0 || mu < best) {
        best = mu;
        arg = c;
      }
    }
    EXPECT_EQ(order[static_cast<std::size_t>(step)], arg);
    chosen.push_back(arg);
  }
}

TEST(Greedy, McCcStepIsHybridArgmin) {
  auto basis = MultiIndexSet::build(2, 3, 2);
  Eigen::MatrixXd pool = basis_matrix_unit(random_grid(15, 2, 13).points, basis);
  auto order = greedy_select(pool, GreedyCriterion::MutualCoherenceCrossCorrelation, 6, 2);
  std::vector<Eigen::Index> chosen{2};
  for (std::size_t step = 1; step < 6; ++step) {
    std::vector<double> mu, g;
    std::vector<Eigen::Index> cand;
    for (Eigen::Index c = 0; c < 15; ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(chosen.size()) + 1, pool.cols());
      for (std::size_t r = 0; r < chosen.size(); ++r) rows.row(static_cast<Eigen::Index>(r)) = pool.row(chosen[r]);
      rows.row(rows.rows() - 1) = pool.row(c);
      mu.push_back(mutual_coherence(rows));
      g.push_back(avg_cross_correlation(rows));
      cand.push_back(c);
    }
    Eigen::Index arg = cand[hybrid_score(mu, g).index];
    EXPECT_EQ(order[step], arg);
    chosen.push_back(arg);
  }
}

TEST(Greedy, DOptimalSkipsDuplicatesWhileRankGrows) {
  // Three-term basis; the pool repeats its first rows. While the design is
  // rank deficient a duplicate adds no new direction, so it is never chosen.
  auto basis = MultiIndexSet::build(1, 2, 1);
  Eigen::MatrixXd base = basis_matrix_unit(random_grid(5, 1, 21).points, basis);
  Eigen::MatrixXd pool(8, 3);
  pool << base, base.topRows(3);
  auto order = greedy_select(pool, GreedyCriterion::DOptimal, 3, 0);
  std::set<Eigen::Index> rows;
  for (auto i : order) rows.insert(i < 5 ? i : i - 5);
  EXPECT_EQ(rows.size(), 3u);
  EXPECT_EQ(std::count(order.begin(), order.end(), 5), 0);

  // Brute force: the chosen third row maximizes det over all candidates.
  double best = -1.0;
  for (Eigen::Index c = 0; c < 8; ++c) {
    if (c == order[0] || c == order[1]) continue;
    Eigen::Matrix3d m;
    m << pool.row(order[0]), pool.row(order[1]), pool.row(c);
    best = std::max(best, std::abs(m.determinant()));
  }
  Eigen::Matrix3d chosen;
  chosen << pool.row(order[0]), pool.row(order[1]), pool.row(order[2]);
  EXPECT_NEAR(std::abs(chosen.determinant()), best, 1e-10 * best);
}

TEST(Greedy, DOptimalScoreMonotoneInFullRank) {
  auto basis = MultiIndexSet::build(2, 2, 2);
  Eigen::MatrixXd pool = basis_matrix_unit(random_grid(60, 2, 31).points, basis);
  auto order = greedy_select(pool, GreedyCriterion::DOptimal, 20, 0);
  double prev = 0.0;
  for (std::size_t n = basis.size(); n <= order.size(); ++n) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), pool.cols());
    for (std::size_t r = 0; r < n; ++r) rows.row(static_cast<Eigen::Index>(r)) = pool.row(order[r]);
    double logdet = std::log((rows.transpose() * rows).determinant());
    if (n > basis.size()) EXPECT_GE(logdet, prev);
    prev = logdet;
  }
}

TEST(Sampling, EverySchemeReproducible) {
  auto basis = MultiIndexSet::build(2, 3, 2);
  InputSpec spec({0, 0}, {1, 1});
  GreedyConfig cfg;
  cfg.pool_size = 40;
  cfg.target_size = 8;
  auto a = greedy_l1_optimal(cfg, basis, spec, 5), b = greedy_l1_optimal(cfg, basis, spec, 5);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.order, b.order);
  EXPECT_EQ(coherence_optimal(10, basis, 4).points, coherence_optimal(10, basis, 4).points);
  EXPECT_EQ(lhs_sc_ese(10, 2, 4).points, lhs_sc_ese(10, 2, 4).points);
  EXPECT_EQ(lhs_pool_optimal(10, 2, 4).points, lhs_pool_optimal(10, 2, 4).points);
}
