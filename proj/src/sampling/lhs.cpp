#include "gpce/sampling.hpp"

#include "gpce/kernels.hpp"
#include "gpce/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gpce {

namespace {

void check_shape(Eigen::Index m, int d, const char* who) {
  if (m < 1 || d < 1) throw std::invalid_argument(std::string(who) + ": need m >= 1 and d >= 1");
}

// One point per stratum in every column. Per column the engine is consumed as
// a shuffle followed by m uniforms, the same for every strata layout.
Eigen::MatrixXd stratified(const std::vector<std::pair<double, double>>& strata, int d, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(strata.size());
  Eigen::MatrixXd points(m, d);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(m));
  for (int k = 0; k < d; ++k) {
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
    for (Eigen::Index i = 0; i < m; ++i) {
      auto [lo, hi] = strata[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      double u = uniform01(rng);
      points(i, k) = lo + (1.0 - u) * (hi - lo);
    }
  }
  return points;
}

SampleSet make_set(Eigen::MatrixXd points, Scheme scheme, std::uint64_t seed) {
  SampleSet out;
  out.weights = Eigen::VectorXd::Ones(points.rows());
  out.points = std::move(points);
  out.scheme = scheme;
  out.seed = seed;
  return out;
}

double pair_term(double dist, double p_exp) {
  return std::pow(dist, -p_exp);
}

}  // namespace

SampleSet random_grid(Eigen::Index m, int d, std::uint64_t seed) {
  check_shape(m, d, "random_grid");
  Rng rng(seed);
  Eigen::MatrixXd points(m, d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (int k = 0; k < d; ++k) points(i, k) = uniform01(rng);
  return make_set(std::move(points), Scheme::Random, seed);
}

SampleSet lhs_standard(Eigen::Index m, int d, std::uint64_t seed) {
  check_shape(m, d, "lhs_standard");
  std::vector<std::pair<double, double>> strata(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i)
    strata[static_cast<std::size_t>(i)] = {static_cast<double>(i) / static_cast<double>(m),
                                           static_cast<double>(i + 1) / static_cast<double>(m)};
  Rng rng(seed);
  return make_set(stratified(strata, d, rng), Scheme::LhsStandard, seed);
}

std::uint64_t lhs_pool_candidate_seed(std::uint64_t seed, int k) {
  return derive_seed(seed, "lhs-pool", static_cast<std::uint64_t>(k));
}

SampleSet lhs_pool_optimal(Eigen::Index m, int d, std::uint64_t seed, const LhsPoolParams& params) {
  check_shape(m, d, "lhs_pool_optimal");
  if (params.n_pool < 1) throw std::invalid_argument("lhs_pool_optimal: n_pool must be >= 1");
  const Scheme scheme =
      params.criterion == PoolCriterion::Maximin ? Scheme::LhsMaximin : Scheme::LhsPhiP;
  SampleSet best;
  double best_score = 0.0;
  for (int k = 0; k < params.n_pool; ++k) {
    SampleSet cand = lhs_standard(m, d, lhs_pool_candidate_seed(seed, k));
    if (m < 2) return make_set(std::move(cand.points), scheme, seed);
    // Larger maximin distance is better; smaller phi_p is better. Ties keep
    // the earliest candidate.
    double score = params.criterion == PoolCriterion::Maximin
                       ? -maximin_distance(cand.points, params.t, params.metric)
                       : phi_p(cand.points, params.p_exp, params.t, params.metric);
    if (k == 0 || score < best_score) {
      best_score = score;
      best = std::move(cand);
    }
  }
  return make_set(std::move(best.points), scheme, seed);
}

EseResult ese_optimize(Eigen::MatrixXd points, std::uint64_t seed, const EseParams& params) {
  const Eigen::Index m = points.rows();
  const Eigen::Index d = points.cols();
  EseResult out;
  if (m < 2 || d < 1) {
    out.points = std::move(points);
    return out;
  }
  const bool periodic = params.metric == DistanceMetric::Periodic;
  const double p = params.p_exp;

  // terms(i, j) = dist(i, j)^-p; the criterion is (sum_{i<j} terms)^(1/p).
  Eigen::MatrixXd dist;
  kernels::pairwise_distances(points, params.t, periodic, dist, kernels::default_backend());
  Eigen::MatrixXd terms(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) terms(i, j) = i == j ? 0.0 : pair_term(dist(i, j), p);
  auto total = [&] { return terms.sum() / 2.0; };

  double sum = total();
  double phi = std::pow(sum, 1.0 / p);
  out.phi_before = phi_p(points, p, params.t, params.metric);
  Eigen::MatrixXd original = points;
  Eigen::MatrixXd best = points;
  double best_phi = phi;

  const int inner = params.inner_iterations > 0
                        ? params.inner_iterations
                        : static_cast<int>(std::min<Eigen::Index>(50, 2 * m));
  double threshold = params.initial_threshold * phi;
  Rng rng(seed);
  Eigen::VectorXd row1(m), row2(m);

  auto distance_to = [&](const Eigen::RowVectorXd& x, Eigen::Index j) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      double delta = std::abs(x[k] - points(j, k));
      if (periodic) delta = std::min(delta, 1.0 - delta);
      acc += params.t == 2.0 ? delta * delta : std::pow(delta, params.t);
    }
    return params.t == 2.0 ? std::sqrt(acc) : std::pow(acc, 1.0 / params.t);
  };

  for (int outer = 0; outer < params.outer_iterations; ++outer) {
    bool improved = false;
    for (int it = 0; it < inner; ++it) {
      const Eigen::Index col = it % d;
      const auto i1 = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(m)));
      auto i2 = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(m - 1)));
      if (i2 >= i1) ++i2;
      const double u = uniform01(rng);

      Eigen::RowVectorXd x1 = points.row(i1);
      Eigen::RowVectorXd x2 = points.row(i2);
      std::swap(x1[col], x2[col]);
      // The distance between i1 and i2 is unchanged by the exchange.
      double delta = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (j == i1 || j == i2) {
          row1[j] = terms(i1, j);
          row2[j] = terms(i2, j);
          continue;
        }
        row1[j] = pair_term(distance_to(x1, j), p);
        row2[j] = pair_term(distance_to(x2, j), p);
        delta += row1[j] - terms(i1, j) + row2[j] - terms(i2, j);
      }
      const double trial = std::pow(std::max(sum + delta, 0.0), 1.0 / p);
      if (trial - phi <= threshold * u) {
        points.row(i1) = x1;
        points.row(i2) = x2;
        terms.row(i1) = row1.transpose();
        terms.col(i1) = row1;
        terms.row(i2) = row2.transpose();
        terms.col(i2) = row2;
        sum = total();
        phi = std::pow(sum, 1.0 / p);
        if (phi < best_phi * (1.0 - 1e-12)) {
          best_phi = phi;
          best = points;
          improved = true;
        }
      }
    }
    threshold *= improved ? params.cool : params.warm;
  }
  out.phi_after = phi_p(best, p, params.t, params.metric);
  if (out.phi_after > out.phi_before) {
    // Drift in the running sum picked a design that is not better after all.
    best = std::move(original);
    out.phi_after = out.phi_before;
  }
  out.points = std::move(best);
  return out;
}

std::vector<std::pair<double, double>> stretched_strata(Eigen::Index m, double alpha) {
  if (m < 1) throw std::invalid_argument("stretched_strata: m must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("stretched_strata: alpha must lie in (0, 1]");
  std::vector<std::pair<double, double>> strata(static_cast<std::size_t>(m));
  if (m == 1) {
    strata[0] = {0.0, 1.0};
    return strata;
  }
  const double md = static_cast<double>(m);
  const double border = alpha / md;
  strata.front() = {0.0, border};
  strata.back() = {1.0 - border, 1.0};
  if (m > 2) {
    const double width = (1.0 - 2.0 * border) / (md - 2.0);
    for (Eigen::Index i = 1; i + 1 < m; ++i) {
      double lo = border + static_cast<double>(i - 1) * width;
      strata[static_cast<std::size_t>(i)] = {lo, i + 2 == m ? 1.0 - border : lo + width};
    }
  }
  return strata;
}

SampleSet lhs_sc_ese(Eigen::Index m, int d, std::uint64_t seed, double alpha,
                     const EseParams& params) {
  check_shape(m, d, "lhs_sc_ese");
  if (m < 2) throw std::invalid_argument("lhs_sc_ese: need m >= 2 for the border strata");
  Rng rng(seed);
  Eigen::MatrixXd points = stratified(stretched_strata(m, alpha), d, rng);
  if (m >= 2 && params.outer_iterations > 0)
    points = ese_optimize(std::move(points), derive_seed(seed, "ese"), params).points;
  return make_set(std::move(points), Scheme::LhsScEse, seed);
}

}  // namespace gpce
