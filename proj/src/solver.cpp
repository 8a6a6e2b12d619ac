#include "gpce/solver.hpp"

#include "gpce/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gpce {

namespace {

constexpr double kCollinear = 1e-11;  // squared residual norm of a unit column in span(A)

void require_finite(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const char* who) {
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument(std::string(who) + ": non-finite input");
  if (x.rows() != y.size())
    throw std::invalid_argument(std::string(who) + ": design has " + std::to_string(x.rows()) +
                                " rows but response has " + std::to_string(y.size()));
}

struct UnitDesign {
  Eigen::MatrixXd x;  // columns scaled to unit norm (zero columns kept at zero)
  Eigen::VectorXd norms;
};

UnitDesign unit_design(const Eigen::MatrixXd& x) {
  UnitDesign d{x, x.colwise().norm().transpose()};
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    if (d.norms[j] > 0.0) d.x.col(j) /= d.norms[j];
  return d;
}

// Lower Cholesky factor of X_A^T X_A grown one column at a time.
class ActiveCholesky {
 public:
  explicit ActiveCholesky(Eigen::Index capacity) : l_(capacity, capacity) {}

  Eigen::Index size() const { return k_; }

  bool add(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& active, Eigen::Index j) {
    Eigen::VectorXd v(k_);
    for (Eigen::Index i = 0; i < k_; ++i) v[i] = x.col(active[static_cast<std::size_t>(i)]).dot(x.col(j));
    if (k_ > 0) l_.topLeftCorner(k_, k_).triangularView<Eigen::Lower>().solveInPlace(v);
    double diag = x.col(j).squaredNorm() - v.squaredNorm();
    if (diag <= kCollinear) return false;
    l_.row(k_).head(k_) = v.transpose();
    l_(k_, k_) = std::sqrt(diag);
    ++k_;
    return true;
  }

  // Deletes active position i: drop row i of L, then Givens rotations on
  // adjacent column pairs restore the lower-triangular shape.
  void remove(Eigen::Index i) {
    for (Eigen::Index r = i; r + 1 < k_; ++r) l_.row(r).head(k_) = l_.row(r + 1).head(k_);
    for (Eigen::Index j = i; j + 1 < k_; ++j) {
      const double a = l_(j, j), b = l_(j, j + 1);
      const double h = std::hypot(a, b);
      const double c = a / h, s = b / h;
      for (Eigen::Index r = j; r + 1 < k_; ++r) {
        const double x = l_(r, j), z = l_(r, j + 1);
        l_(r, j) = c * x + s * z;
        l_(r, j + 1) = -s * x + c * z;
      }
    }
    --k_;
    l_.row(k_).head(k_ + 1).setZero();
    l_.col(k_).head(k_ + 1).setZero();
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd w = rhs;
    auto l = l_.topLeftCorner(k_, k_);
    l.triangularView<Eigen::Lower>().solveInPlace(w);
    l.transpose().triangularView<Eigen::Upper>().solveInPlace(w);
    return w;
  }

 private:
  Eigen::MatrixXd l_;
  Eigen::Index k_ = 0;
};

// Path on a unit-column design; coefficients in the unit scale.
LarsPath unit_path(const Eigen::MatrixXd& xn, const Eigen::VectorXd& y, PathMode mode,
                   const Eigen::VectorXd& norms, int max_knots = -1) {
  const Eigen::Index m = xn.rows();
  const Eigen::Index n = xn.cols();
  LarsPath path;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd corr = xn.transpose() * y;
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  for (Eigen::Index j = 0; j < n; ++j) blocked[static_cast<std::size_t>(j)] = norms[j] == 0.0;

  double c_max = 0.0;
  Eigen::Index first = -1;
  for (Eigen::Index j = 0; j < n; ++j)
    if (!blocked[static_cast<std::size_t>(j)] && std::abs(corr[j]) > c_max) {
      c_max = std::abs(corr[j]);
      first = j;
    }
  path.lambdas.push_back(c_max);
  path.coefficients.push_back(beta);
  path.active.emplace_back();
  if (first < 0 || c_max == 0.0) return path;

  const Eigen::Index rank_cap = std::min(m, n);
  std::vector<Eigen::Index> active;
  std::vector<bool> in_active(static_cast<std::size_t>(n), false);
  Eigen::VectorXd sign_a;
  ActiveCholesky chol(rank_cap);
  auto enter = [&](Eigen::Index j) {
    if (!chol.add(xn, active, j)) {
      blocked[static_cast<std::size_t>(j)] = true;
      return;
    }
    active.push_back(j);
    in_active[static_cast<std::size_t>(j)] = true;
  };
  enter(first);
  path.active.back() = active;

  double lambda = c_max;
  const double floor = 1e-14 * c_max;
  Eigen::Index just_dropped = -1;
  const long max_iter = 8 * (static_cast<long>(m) + static_cast<long>(n)) + 16;
  for (long iter = 0; iter < max_iter && lambda > floor && !active.empty(); ++iter) {
    const auto k = static_cast<Eigen::Index>(active.size());
    sign_a.resize(k);
    for (Eigen::Index i = 0; i < k; ++i)
      sign_a[i] = corr[active[static_cast<std::size_t>(i)]] >= 0.0 ? 1.0 : -1.0;
    Eigen::VectorXd w = chol.solve(sign_a);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
    for (Eigen::Index i = 0; i < k; ++i) u.noalias() += w[i] * xn.col(active[static_cast<std::size_t>(i)]);
    Eigen::VectorXd a = xn.transpose() * u;

    double gamma = lambda;
    Eigen::Index entering = -1;
    Eigen::Index dropping = -1;
    if (k < rank_cap) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto js = static_cast<std::size_t>(j);
        if (in_active[js] || blocked[js]) continue;
        for (double s : {1.0, -1.0}) {
          // A column that just left sits on the boundary of its old sign; it
          // may only come back through the opposite one within this segment.
          if (j == just_dropped && s * corr[j] > 0.0) continue;
          double den = 1.0 - s * a[j];
          if (den <= 1e-12) continue;
          double g = std::max(0.0, (lambda - s * corr[j]) / den);
          if (g < gamma) {
            gamma = g;
            entering = j;
          }
        }
      }
    }
    if (mode == PathMode::Lasso) {
      for (Eigen::Index i = 0; i < k; ++i) {
        Eigen::Index j = active[static_cast<std::size_t>(i)];
        if (w[i] == 0.0) continue;
        double g = -beta[j] / w[i];
        if (g > 0.0 && g < gamma) {
          gamma = g;
          dropping = i;
          entering = -1;
        }
      }
    }

    for (Eigen::Index i = 0; i < k; ++i) beta[active[static_cast<std::size_t>(i)]] += gamma * w[i];
    lambda = gamma >= lambda ? 0.0 : lambda - gamma;
    if (dropping >= 0 || iter % 16 == 15) {
      Eigen::VectorXd r = y;
      for (Eigen::Index j : active) r.noalias() -= beta[j] * xn.col(j);
      corr.noalias() = xn.transpose() * r;
    } else {
      corr.noalias() -= gamma * a;
    }
    just_dropped = -1;

    if (dropping >= 0) {
      Eigen::Index j = active[static_cast<std::size_t>(dropping)];
      beta[j] = 0.0;
      active.erase(active.begin() + dropping);
      in_active[static_cast<std::size_t>(j)] = false;
      chol.remove(dropping);
      just_dropped = j;
      path.had_drop = true;
    } else if (entering >= 0) {
      enter(entering);
    }

    if (gamma > 0.0) {
      path.lambdas.push_back(lambda);
      path.coefficients.push_back(beta);
      path.active.push_back(active);
    } else {
      path.coefficients.back() = beta;
      path.active.back() = active;
    }
    if (max_knots > 0 && static_cast<int>(path.size()) >= max_knots) break;
    if (entering < 0 && dropping < 0) break;  // reached lambda = 0
  }
  return path;
}

void rescale(LarsPath& path, const Eigen::VectorXd& norms) {
  for (auto& c : path.coefficients)
    for (Eigen::Index j = 0; j < c.size(); ++j) c[j] = norms[j] > 0.0 ? c[j] / norms[j] : 0.0;
}

}  // namespace

Eigen::VectorXd LarsPath::at(double lambda) const {
  if (lambdas.empty()) return {};
  if (lambda >= lambdas.front()) return coefficients.front();
  if (lambda <= lambdas.back()) return coefficients.back();
  auto it = std::lower_bound(lambdas.begin(), lambdas.end(), lambda, std::greater<double>());
  auto hi = static_cast<std::size_t>(it - lambdas.begin());  // lambdas[hi] <= lambda
  std::size_t lo = hi - 1;
  double t = (lambdas[lo] - lambda) / (lambdas[lo] - lambdas[hi]);
  return (1.0 - t) * coefficients[lo] + t * coefficients[hi];
}

LarsPath lars_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, PathMode mode) {
  require_finite(x, y, "lars_path");
  UnitDesign d = unit_design(x);
  LarsPath path = unit_path(d.x, y, mode, d.norms);
  rescale(path, d.norms);
  return path;
}

LarsSolver::LarsSolver(Eigen::MatrixXd x, SelectionRule rule) : x_(std::move(x)), rule_(rule) {
  if (!x_.allFinite()) throw std::invalid_argument("LarsSolver: non-finite design");
  const Eigen::Index m = x_.rows();
  if (rule_.kind != Selection::CrossValidation) return;
  const auto k = static_cast<Eigen::Index>(std::min<Eigen::Index>(rule_.folds, m));
  if (k < 2) return;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(rule_.seed);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
  fold_test_.assign(static_cast<std::size_t>(k), {});
  for (std::size_t i = 0; i < perm.size(); ++i)
    fold_test_[i % static_cast<std::size_t>(k)].push_back(perm[i]);
  for (auto& f : fold_test_) std::sort(f.begin(), f.end());
}

LarsSolver::CvCurve LarsSolver::cross_validate(const Eigen::VectorXd& y,
                                               const LarsPath& full) const {
  CvCurve curve;
  const Eigen::Index m = x_.rows();
  const double root_m = std::sqrt(static_cast<double>(m));
  for (double l : full.lambdas) curve.alphas.push_back(l / root_m);
  if (curve.alphas.empty() || curve.alphas.back() > 0.0) curve.alphas.push_back(0.0);
  curve.errors.assign(curve.alphas.size(), 0.0);

  std::vector<bool> held(static_cast<std::size_t>(m));
  for (const auto& test : fold_test_) {
    std::fill(held.begin(), held.end(), false);
    for (Eigen::Index i : test) held[static_cast<std::size_t>(i)] = true;
    const auto m_train = m - static_cast<Eigen::Index>(test.size());
    Eigen::MatrixXd xt(m_train, x_.cols()), xv(static_cast<Eigen::Index>(test.size()), x_.cols());
    Eigen::VectorXd yt(m_train), yv(xv.rows());
    for (Eigen::Index i = 0, a = 0, b = 0; i < m; ++i) {
      if (held[static_cast<std::size_t>(i)]) {
        xv.row(b) = x_.row(i);
        yv[b++] = y[i];
      } else {
        xt.row(a) = x_.row(i);
        yt[a++] = y[i];
      }
    }
    UnitDesign d = unit_design(xt);
    LarsPath path = unit_path(d.x, yt, PathMode::Lasso, d.norms);
    rescale(path, d.norms);
    const double root_train = std::sqrt(static_cast<double>(m_train));
    for (std::size_t g = 0; g < curve.alphas.size(); ++g) {
      Eigen::VectorXd c = path.at(curve.alphas[g] * root_train);
      curve.errors[g] += (yv - xv * c).squaredNorm();
    }
  }
  for (double& e : curve.errors) e /= static_cast<double>(m);
  // Exact ties resolve to the smaller alpha.
  for (std::size_t g = 0; g < curve.errors.size(); ++g)
    if (curve.errors[g] <= curve.errors[curve.best]) curve.best = g;
  return curve;
}

LarsPath LarsSolver::fit_path(const Eigen::VectorXd& y, double* selected_lambda) const {
  require_finite(x_, y, "lars_lasso_fit");
  UnitDesign d = unit_design(x_);
  const int max_knots =
      rule_.kind == Selection::FixedKnots && rule_.knots > 0 ? rule_.knots : -1;
  LarsPath path = unit_path(d.x, y, PathMode::Lasso, d.norms, max_knots);
  rescale(path, d.norms);
  double lambda = path.lambdas.back();
  path.chosen = static_cast<Eigen::Index>(path.size()) - 1;
  switch (rule_.kind) {
    case Selection::PathEnd:
    case Selection::FixedKnots:
      break;
    case Selection::ResidualTolerance: {
      const double target = rule_.tolerance * y.norm();
      for (std::size_t i = 0; i < path.size(); ++i)
        if ((y - x_ * path.coefficients[i]).norm() <= target) {
          path.chosen = static_cast<Eigen::Index>(i);
          lambda = path.lambdas[i];
          break;
        }
      break;
    }
    case Selection::CrossValidation: {
      if (fold_test_.empty() || path.size() < 2) break;
      CvCurve curve = cross_validate(y, path);
      lambda = curve.alphas[curve.best] * std::sqrt(static_cast<double>(x_.rows()));
      path.chosen = curve.best < path.size() ? static_cast<Eigen::Index>(curve.best) : path.chosen;
      if (curve.best >= path.size()) lambda = 0.0;
      break;
    }
  }
  if (selected_lambda) *selected_lambda = lambda;
  return path;
}

Eigen::VectorXd LarsSolver::fit(const Eigen::VectorXd& y) const {
  if (y.size() == x_.rows() && y.allFinite() && (y.array() == 0.0).all())
    return Eigen::VectorXd::Zero(x_.cols());
  double lambda = 0.0;
  LarsPath path = fit_path(y, &lambda);
  return path.at(lambda);
}

Eigen::VectorXd lars_lasso_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               const SelectionRule& rule) {
  return LarsSolver(x, rule).fit(y);
}

Eigen::VectorXd lars_lasso_fit(const GpceMatrix& matrix, const Eigen::VectorXd& y,
                               const SelectionRule& rule) {
  return lars_lasso_fit(matrix.values, y, rule);
}

double kkt_violation(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& coef, double lambda) {
  Eigen::VectorXd norms = x.colwise().norm().transpose();
  Eigen::VectorXd z = x.transpose() * (y - x * coef);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (norms[j] == 0.0) continue;
    double zj = z[j] / norms[j];
    double v = coef[j] != 0.0 ? std::abs(zj - lambda * (coef[j] > 0.0 ? 1.0 : -1.0))
                              : std::max(0.0, std::abs(zj) - lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

Eigen::MatrixXd least_squares_pinv(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument("least_squares_pinv: non-finite input");
  if (x.rows() != y.rows()) throw std::invalid_argument("least_squares_pinv: row mismatch");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.cols(), y.cols());
  if (s.size() == 0 || s[0] == 0.0) return out;
  const double cutoff = 1e-12 * s[0];
  Eigen::MatrixXd uty = svd.matrixU().transpose() * y;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cutoff) out.noalias() += svd.matrixV().col(i) * (uty.row(i) / s[i]);
  return out;
}

Eigen::VectorXd least_squares_pinv(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return least_squares_pinv(x, Eigen::MatrixXd(y)).col(0);
}

}  // namespace gpce
