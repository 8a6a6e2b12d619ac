#include "gpce/sampling.hpp"

#include "gpce/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gpce {

namespace {

struct ChainState {
  Eigen::VectorXd xi;
  double log_weight = -std::numeric_limits<double>::infinity();  // log target - log proposal
  double sum_sq = 0.0;
};

}  // namespace

SampleSet coherence_optimal(Eigen::Index m, const MultiIndexSet& basis, std::uint64_t seed,
                            const ChainParams& chain) {
  if (m < 1) throw std::invalid_argument("coherence_optimal: m must be >= 1");
  if (chain.burn_in < 0 || chain.thinning < 1)
    throw std::invalid_argument("coherence_optimal: need burn_in >= 0 and thinning >= 1");
  const int d = basis.dim();
  Proposal proposal = chain.proposal;
  if (proposal == Proposal::Auto)
    proposal = basis.order() >= d ? Proposal::Arcsine : Proposal::Uniform;

  Rng rng(seed);
  auto draw = [&] {
    ChainState s;
    s.xi.resize(d);
    double log_g = 0.0;
    for (int k = 0; k < d; ++k) {
      double u = uniform01(rng);
      if (proposal == Proposal::Arcsine) {
        double x = std::cos(std::numbers::pi * u);
        s.xi[k] = x;
        double q = 1.0 - x * x;
        if (q <= 0.0) return s;  // density pole at the endpoint: never accepted
        log_g -= 0.5 * std::log(q);
      } else {
        s.xi[k] = 2.0 * u - 1.0;
      }
    }
    s.sum_sq = basis_sum_of_squares(basis, std::span<const double>(s.xi.data(), d));
    s.log_weight = std::log(s.sum_sq) - log_g;
    return s;
  };

  ChainState current = draw();
  while (!std::isfinite(current.log_weight)) current = draw();
  long accepted = 0;
  long steps = 0;
  auto step = [&] {
    ChainState next = draw();
    double u = uniform01(rng);
    ++steps;
    if (std::isfinite(next.log_weight) &&
        (next.log_weight >= current.log_weight ||
         std::log(u) < next.log_weight - current.log_weight)) {
      current = std::move(next);
      ++accepted;
    }
  };

  for (int i = 0; i < chain.burn_in; ++i) step();
  SampleSet out;
  out.points.resize(m, d);
  out.weights.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int t = 0; t < chain.thinning; ++t) step();
    for (int k = 0; k < d; ++k)
      out.points(i, k) = std::clamp(0.5 * (current.xi[k] + 1.0), 0.0, 1.0);
    out.weights[i] = 1.0 / std::sqrt(current.sum_sq);
  }
  out.scheme = Scheme::CoherenceOptimal;
  out.seed = seed;
  out.acceptance_rate = steps > 0 ? static_cast<double>(accepted) / static_cast<double>(steps) : 1.0;
  return out;
}

}  // namespace gpce
