#include "gpce/basis.hpp"
#include "gpce/rng.hpp"
#include "gpce/sampling.hpp"
#include "gpce/solver.hpp"

#include "common/bp_oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace gpce;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index r, Eigen::Index c, Rng& rng) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

SelectionRule path_end() {
  SelectionRule r;
  r.kind = Selection::PathEnd;
  return r;
}

}  // namespace

TEST(Lars, OneSparseExact) {
  Rng rng(1);
  Eigen::MatrixXd x = gaussian(20, 8, rng);
  Eigen::VectorXd y = x.col(5);
  LarsPath path = lars_path(x, y);
  ASSERT_GE(path.size(), 2u);
  ASSERT_EQ(path.active[1].size(), 1u);
  EXPECT_EQ(path.active[1][0], 5);
  for (auto rule : {SelectionRule{}, path_end()}) {
    Eigen::VectorXd c = lars_lasso_fit(x, y, rule);
    EXPECT_LT((x * c - y).norm(), 1e-10);
  }
}

TEST(Lars, SoftThresholdingOnOrthonormalDesign) {
  Rng rng(2);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(12, 5, rng));
  Eigen::MatrixXd x = qr.householderQ() * Eigen::MatrixXd::Identity(12, 5);
  Eigen::VectorXd y = gaussian(12, 1, rng).col(0);
  Eigen::VectorXd z = x.transpose() * y;
  LarsPath path = lars_path(x, y);
  auto soft = [&](double lambda) {
    Eigen::VectorXd c(5);
    for (int j = 0; j < 5; ++j) c[j] = (z[j] > 0 ? 1.0 : -1.0) * std::max(0.0, std::abs(z[j]) - lambda);
    return c;
  };
  std::vector<double> knots(z.size());
  for (int j = 0; j < 5; ++j) knots[static_cast<std::size_t>(j)] = std::abs(z[j]);
  std::sort(knots.rbegin(), knots.rend());
  ASSERT_EQ(path.size(), 6u);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(path.lambdas[k], knots[k], 1e-12);
  for (std::size_t k = 0; k < path.size(); ++k)
    EXPECT_LT((path.coefficients[k] - soft(path.lambdas[k])).cwiseAbs().maxCoeff(), 1e-12);
  for (double l : {knots[0] * 0.9, 0.5 * (knots[1] + knots[2]), knots[4] * 0.3})
    EXPECT_LT((path.at(l) - soft(l)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Lars, MatchesBasisPursuitOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index m = 3 + trial % 6, n = std::min<Eigen::Index>(6, m + 1 + trial % 3);
    Eigen::MatrixXd x = gaussian(m, n, rng);
    if (trial % 2) x = x * Eigen::VectorXd::LinSpaced(n, 0.5, 3.0).asDiagonal();  // uneven column norms
    Eigen::VectorXd truth = Eigen::VectorXd::Zero(n);
    truth[static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(n)))] = 1.5;
    truth[static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(n)))] -= 0.7;
    Eigen::VectorXd y = x * truth;
    // Columns are scaled to unit norm inside the solver, so the matching
    // program weights |c_j| by the column norm.
    Eigen::VectorXd w = x.colwise().norm().transpose();
    auto oracle = test::basis_pursuit_oracle(x, y, w);
    ASSERT_TRUE(oracle.has_value());
    Eigen::VectorXd c = lars_lasso_fit(x, y, path_end());
    EXPECT_LT((c - oracle->coef).cwiseAbs().maxCoeff(), 1e-6) << "trial " << trial;
  }
}

TEST(Lars, KktHoldsAtEveryKnot) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd x = gaussian(15, 10, rng);
    Eigen::VectorXd y = gaussian(15, 1, rng).col(0);
    LarsPath path = lars_path(x, y);
    for (std::size_t k = 0; k < path.size(); ++k)
      EXPECT_LT(kkt_violation(x, y, path.coefficients[k], path.lambdas[k]), 1e-8);
  }
}

TEST(Lars, KktAtCvSelection) {
  auto basis = MultiIndexSet::build(2, 6, 2);
  Eigen::MatrixXd x = basis_matrix_unit(random_grid(25, 2, 5).points, basis);
  Rng rng(5);
  Eigen::VectorXd y = gaussian(25, 1, rng).col(0);
  LarsSolver solver(x);
  double lambda = -1.0;
  LarsPath path = solver.fit_path(y, &lambda);
  Eigen::VectorXd c = path.at(lambda);
  EXPECT_LT(kkt_violation(x, y, c, lambda), 1e-8);
  EXPECT_EQ(c, solver.fit(y));
}

TEST(Lars, CvChoosesMinimumOfGrid) {
  auto basis = MultiIndexSet::build(2, 8, 2);
  Eigen::MatrixXd x = basis_matrix_unit(random_grid(30, 2, 6).points, basis);
  Rng rng(6);
  Eigen::VectorXd y = x.col(0) + 0.5 * x.col(4) + 0.05 * gaussian(30, 1, rng).col(0);
  LarsSolver solver(x);
  LarsPath path = lars_path(x, y);
  auto curve = solver.cross_validate(y, path);
  ASSERT_EQ(curve.alphas.size(), curve.errors.size());
  double min_err = *std::min_element(curve.errors.begin(), curve.errors.end());
  EXPECT_EQ(curve.errors[curve.best], min_err);
  double lambda = -1.0;
  solver.fit_path(y, &lambda);
  EXPECT_NEAR(lambda, curve.alphas[curve.best] * std::sqrt(30.0), 1e-12);
}

TEST(Lars, Deterministic) {
  auto basis = MultiIndexSet::build(3, 4, 3);
  Eigen::MatrixXd x = basis_matrix_unit(random_grid(30, 3, 7).points, basis);
  Rng rng(7);
  Eigen::VectorXd y = gaussian(30, 1, rng).col(0);
  EXPECT_EQ(lars_lasso_fit(x, y), lars_lasso_fit(x, y));
}

TEST(Lars, ZeroResponseAndErrors) {
  Rng rng(8);
  Eigen::MatrixXd x = gaussian(6, 4, rng);
  EXPECT_TRUE(lars_lasso_fit(x, Eigen::VectorXd::Zero(6)).isZero(0.0));
  Eigen::VectorXd bad = Eigen::VectorXd::Ones(6);
  bad[2] = std::nan("");
  EXPECT_THROW(lars_lasso_fit(x, bad), std::invalid_argument);
  EXPECT_THROW(lars_lasso_fit(x, Eigen::VectorXd::Ones(5)), std::invalid_argument);
}

TEST(Lars, DuplicateColumnsDoNotBreakPath) {
  Rng rng(9);
  Eigen::MatrixXd x = gaussian(10, 6, rng);
  x.col(3) = x.col(1);
  Eigen::VectorXd y = gaussian(10, 1, rng).col(0);
  LarsPath path = lars_path(x, y);
  for (std::size_t k = 0; k < path.size(); ++k) {
    EXPECT_TRUE(path.coefficients[k].allFinite());
    EXPECT_LT(kkt_violation(x, y, path.coefficients[k], path.lambdas[k]), 1e-8);
  }
}

TEST(Lars, FixedKnotsAndResidualTolerance) {
  Rng rng(10);
  Eigen::MatrixXd x = gaussian(20, 8, rng);
  Eigen::VectorXd y = 2.0 * x.col(0) - x.col(6);
  SelectionRule knots;
  knots.kind = Selection::FixedKnots;
  knots.knots = 2;
  Eigen::VectorXd c = lars_lasso_fit(x, y, knots);
  EXPECT_LE((c.array() != 0.0).count(), 1);
  SelectionRule tol;
  tol.kind = Selection::ResidualTolerance;
  tol.tolerance = 1e-8;
  Eigen::VectorXd d = lars_lasso_fit(x, y, tol);
  EXPECT_LE((x * d - y).norm(), 1e-8 * y.norm());
}

TEST(Pinv, SquareSystem) {
  Rng rng(11);
  Eigen::MatrixXd x = gaussian(5, 5, rng);
  Eigen::VectorXd y = gaussian(5, 1, rng).col(0);
  EXPECT_LT((x * least_squares_pinv(x, y) - y).norm(), 1e-10);
}

TEST(Pinv, OverdeterminedConsistent) {
  Rng rng(12);
  Eigen::MatrixXd x = gaussian(9, 4, rng);
  Eigen::VectorXd c(4);
  c << 1, -2, 0.5, 3;
  EXPECT_LT((least_squares_pinv(x, Eigen::VectorXd(x * c)) - c).norm(), 1e-10);
}

TEST(Pinv, UnderdeterminedMinimumNorm) {
  // x1 + x2 + x3 = 3, x1 - x3 = 0. Solutions (t, 3 - 2t, t); the norm
  // 2 t^2 + (3 - 2t)^2 is smallest at t = 1, giving (1, 1, 1).
  Eigen::MatrixXd x(2, 3);
  x << 1, 1, 1, 1, 0, -1;
  Eigen::Vector2d y(3, 0);
  Eigen::VectorXd c = least_squares_pinv(x, Eigen::VectorXd(y));
  EXPECT_LT((c - Eigen::Vector3d(1, 1, 1)).norm(), 1e-12);
}

TEST(Pinv, RankDeficientAndErrors) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 2, 4, 3, 6;
  Eigen::Vector3d y(1, 2, 3);
  Eigen::VectorXd c = least_squares_pinv(x, Eigen::VectorXd(y));
  EXPECT_NEAR(c[0], 0.2, 1e-12);
  EXPECT_NEAR(c[1], 0.4, 1e-12);
  x(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(least_squares_pinv(x, Eigen::VectorXd(y)), std::invalid_argument);
}
