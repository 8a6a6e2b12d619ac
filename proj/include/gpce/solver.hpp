#pragma once

#include "gpce/basis.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace gpce {

/// Homotopy path of the Lasso. Knots are the values of
/// lambda = max_j |x_j^T r| / ||x_j|| where the active set changes; the
/// coefficients (original column scale) are piecewise linear in lambda
/// between knots.
struct LarsPath {
  std::vector<double> lambdas;               ///< strictly decreasing
  std::vector<Eigen::VectorXd> coefficients;  ///< one per knot
  std::vector<std::vector<Eigen::Index>> active;
  bool had_drop = false;
  Eigen::Index chosen = -1;  ///< knot picked by the selection rule, -1 if interpolated

  std::size_t size() const { return lambdas.size(); }
  /// Coefficients at an arbitrary lambda (linear between knots, clamped at the ends).
  Eigen::VectorXd at(double lambda) const;
};

enum class PathMode { Lasso, Lars };

/// Full path for one response. Columns are scaled to unit norm internally;
/// zero columns never enter. The path ends at lambda = 0 or when no further
/// column can enter.
LarsPath lars_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   PathMode mode = PathMode::Lasso);

enum class Selection { CrossValidation, PathEnd, FixedKnots, ResidualTolerance };

struct SelectionRule {
  Selection kind = Selection::CrossValidation;
  int folds = 10;              ///< CV: min(folds, M) folds
  std::uint64_t seed = 0x5eed;  ///< CV fold assignment
  int knots = 0;               ///< FixedKnots: stop after this many knots
  double tolerance = 1e-8;     ///< ResidualTolerance: ||r|| <= tol ||y||
};

/// Shared state for fitting many responses against one design: column
/// norms and CV fold designs are prepared once.
class LarsSolver {
 public:
  LarsSolver(Eigen::MatrixXd x, SelectionRule rule = {});

  Eigen::VectorXd fit(const Eigen::VectorXd& y) const;
  /// Path with `chosen` set (or the CV lambda reported through cv_lambda).
  LarsPath fit_path(const Eigen::VectorXd& y, double* selected_lambda = nullptr) const;

  /// Mean held-out squared error at each alpha = lambda / sqrt(M) of the grid.
  struct CvCurve {
    std::vector<double> alphas;
    std::vector<double> errors;
    std::size_t best = 0;
  };
  CvCurve cross_validate(const Eigen::VectorXd& y, const LarsPath& full) const;

  const Eigen::MatrixXd& design() const { return x_; }
  const SelectionRule& rule() const { return rule_; }

 private:
  Eigen::MatrixXd x_;
  SelectionRule rule_;
  std::vector<std::vector<Eigen::Index>> fold_test_;
};

/// Lasso-path coefficients chosen by `rule` (cross-validation by default).
Eigen::VectorXd lars_lasso_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               const SelectionRule& rule = {});
Eigen::VectorXd lars_lasso_fit(const GpceMatrix& matrix, const Eigen::VectorXd& y,
                               const SelectionRule& rule = {});

/// Largest violation of the Lasso optimality conditions at lambda, measured
/// on unit-norm columns: |z_j - lambda sign(c_j)| on the support and
/// max(0, |z_j| - lambda) off it, with z_j = x_j^T (y - X c) / ||x_j||.
double kkt_violation(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& coef, double lambda);

/// Minimum-norm least squares through the SVD, dropping singular values
/// below 1e-12 times the largest.
Eigen::VectorXd least_squares_pinv(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
Eigen::MatrixXd least_squares_pinv(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

}  // namespace gpce
