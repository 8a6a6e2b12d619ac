#include "gpce/criteria.hpp"

#include "gpce/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gpce {

double mutual_coherence(const Eigen::MatrixXd& matrix) {
  if (matrix.cols() < 2) throw std::invalid_argument("mutual_coherence: need at least two columns");
  Eigen::VectorXd norms = matrix.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < norms.size(); ++j)
    if (norms[j] == 0.0)
      throw std::invalid_argument("mutual_coherence: column " + std::to_string(j) + " is zero");
  Eigen::MatrixXd gram = matrix.transpose() * matrix;
  double mu = 0.0;
  for (Eigen::Index b = 1; b < gram.cols(); ++b)
    for (Eigen::Index a = 0; a < b; ++a)
      mu = std::max(mu, std::abs(gram(a, b)) / (norms[a] * norms[b]));
  return std::min(mu, 1.0);
}

double avg_cross_correlation(const Eigen::MatrixXd& matrix) {
  const Eigen::Index k = matrix.cols();
  if (k < 2) throw std::invalid_argument("avg_cross_correlation: need at least two columns");
  if (matrix.rows() == 0) throw std::invalid_argument("avg_cross_correlation: empty matrix");
  Eigen::MatrixXd gram = matrix.transpose() * matrix / static_cast<double>(matrix.rows());
  double frob = (Eigen::MatrixXd::Identity(k, k) - gram).squaredNorm();
  return frob / (static_cast<double>(k) * static_cast<double>(k - 1));
}

HybridChoice hybrid_score(std::span<const double> mu, std::span<const double> gamma) {
  if (mu.empty() || mu.size() != gamma.size())
    throw std::invalid_argument("hybrid_score: lists must be non-empty and of equal length");
  HybridChoice out;
  auto [mu_lo, mu_hi] = std::minmax_element(mu.begin(), mu.end());
  auto [g_lo, g_hi] = std::minmax_element(gamma.begin(), gamma.end());
  out.mu_min = *mu_lo;
  out.mu_max = *mu_hi;
  out.gamma_min = *g_lo;
  out.gamma_max = *g_hi;
  const double mu_range = out.mu_max - out.mu_min;
  const double g_range = out.gamma_max - out.gamma_min;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double a = mu_range > 0.0 ? (mu[i] - out.mu_min) / mu_range : 0.0;
    double b = g_range > 0.0 ? (gamma[i] - out.gamma_min) / g_range : 0.0;
    double f = a * a + b * b;
    if (f < best) {
      best = f;
      out.index = i;
    }
  }
  out.score = best;
  return out;
}

DOptimality d_optimality(const Eigen::MatrixXd& matrix) {
  const Eigen::Index m = matrix.rows();
  const Eigen::Index n = matrix.cols();
  DOptimality out;
  if (m >= n) {
    Eigen::MatrixXd gram = matrix.transpose() * matrix / static_cast<double>(m);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    Eigen::VectorXd d = ldlt.vectorD();
    double scale = gram.diagonal().cwiseAbs().maxCoeff();
    bool singular = ldlt.info() != Eigen::Success || scale == 0.0 ||
                    (d.array() <= 1e-13 * scale).any();
    if (singular) {
      out.value = std::numeric_limits<double>::infinity();
      out.mode = DOptimalityMode::Singular;
      return out;
    }
    double logdet = d.array().log().sum();
    out.value = std::exp(-logdet / static_cast<double>(n));
    out.mode = DOptimalityMode::InverseGramian;
    return out;
  }
  Eigen::MatrixXd outer = matrix * matrix.transpose();
  double det = outer.determinant();
  out.value = det > 0.0 ? std::pow(det, 1.0 / static_cast<double>(m)) : 0.0;
  out.mode = DOptimalityMode::RowSurrogate;
  return out;
}

namespace {

std::vector<double> sorted_pair_distances(const Eigen::MatrixXd& points, double t,
                                          DistanceMetric metric) {
  if (points.rows() < 2) throw std::invalid_argument("distance criteria need at least two points");
  Eigen::MatrixXd dist;
  kernels::pairwise_distances(points, t, metric == DistanceMetric::Periodic, dist,
                              kernels::default_backend());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points.rows() * (points.rows() - 1) / 2));
  for (Eigen::Index j = 1; j < dist.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) out.push_back(dist(i, j));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double maximin_distance(const Eigen::MatrixXd& points, double t, DistanceMetric metric) {
  return sorted_pair_distances(points, t, metric).front();
}

double phi_p(const Eigen::MatrixXd& points, double p_exp, double t, DistanceMetric metric) {
  std::vector<double> dist = sorted_pair_distances(points, t, metric);
  if (dist.front() <= 0.0) return std::numeric_limits<double>::infinity();
  // Group into the distinct distance list d_1 < ... < d_s with counts J_i.
  double sum = 0.0;
  std::size_t i = 0;
  while (i < dist.size()) {
    const double d = dist[i];
    std::size_t j = i;
    while (j < dist.size() && dist[j] - d <= kDistanceTieTolerance) ++j;
    sum += static_cast<double>(j - i) * std::pow(d, -p_exp);
    i = j;
  }
  return std::pow(sum, 1.0 / p_exp);
}

}  // namespace gpce
