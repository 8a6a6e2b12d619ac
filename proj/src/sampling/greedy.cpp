#include "gpce/sampling.hpp"

#include "gpce/kernels.hpp"
#include "gpce/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace gpce {

namespace {

// Index of the first minimum / maximum.
std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}
std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

class Selection {
 public:
  Selection(Eigen::Index pool_rows, Eigen::Index first) : used_(pool_rows, false) { add(first); }

  void add(Eigen::Index row) {
    used_[static_cast<std::size_t>(row)] = true;
    order_.push_back(row);
  }
  std::vector<Eigen::Index> candidates() const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < used_.size(); ++i)
      if (!used_[i]) out.push_back(static_cast<Eigen::Index>(i));
    return out;
  }
  Eigen::Index size() const { return static_cast<Eigen::Index>(order_.size()); }
  std::vector<Eigen::Index>& order() { return order_; }

 private:
  std::vector<bool> used_;
  std::vector<Eigen::Index> order_;
};

void select_coherence(const Eigen::MatrixXd& pool, bool hybrid, Eigen::Index target,
                      Selection& sel, GreedyTrace* trace) {
  const auto backend = kernels::default_backend();
  Eigen::VectorXd r = pool.row(sel.order().front()).transpose();
  Eigen::MatrixXd gram = r * r.transpose();
  std::vector<double> mu, gamma;
  while (sel.size() < target) {
    std::vector<Eigen::Index> cand = sel.candidates();
    mu.assign(cand.size(), 0.0);
    gamma.assign(hybrid ? cand.size() : 0, 0.0);
    kernels::score_coherence(gram, pool, cand, static_cast<double>(sel.size() + 1), mu, gamma,
                             backend);
    std::size_t pick;
    double score;
    if (hybrid) {
      HybridChoice choice = hybrid_score(mu, gamma);
      pick = choice.index;
      score = choice.score;
    } else {
      pick = argmin(mu);
      score = mu[pick];
    }
    r = pool.row(cand[pick]).transpose();
    gram.noalias() += r * r.transpose();
    sel.add(cand[pick]);
    if (trace) trace->scores.push_back(score);
  }
}

void select_d_optimal(const Eigen::MatrixXd& pool, Eigen::Index target, Selection& sel,
                      GreedyTrace* trace) {
  const auto backend = kernels::default_backend();
  const Eigen::Index n = pool.cols();
  std::vector<double> score;

  // Rank-deficient phase: maximize det(Psi Psi^T), i.e. the squared distance of
  // the new row from the span of the selected rows.
  Eigen::MatrixXd q(0, n);
  auto extend_basis = [&](Eigen::Index row) {
    Eigen::VectorXd v = pool.row(row).transpose();
    for (int pass = 0; pass < 2; ++pass)
      if (q.rows() > 0) v -= q.transpose() * (q * v);
    double norm = v.norm();
    if (norm <= 1e-12 * std::max(1.0, pool.row(row).norm())) return;
    q.conservativeResize(q.rows() + 1, Eigen::NoChange);
    q.row(q.rows() - 1) = v.transpose() / norm;
  };
  extend_basis(sel.order().front());
  while (sel.size() < target && sel.size() < n) {
    std::vector<Eigen::Index> cand = sel.candidates();
    score.assign(cand.size(), 0.0);
    kernels::score_projection_residual(q, pool, cand, score, backend);
    std::size_t pick = argmax(score);
    extend_basis(cand[pick]);
    sel.add(cand[pick]);
    if (trace) trace->scores.push_back(score[pick]);
  }
  if (sel.size() >= target) return;

  // Full-rank phase: minimize |G^{-1}|; adding r multiplies det G by 1 + r^T G^{-1} r.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index row : sel.order()) {
    Eigen::VectorXd r = pool.row(row).transpose();
    gram.noalias() += r * r.transpose();
  }
  auto invert = [&] {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    double scale = gram.diagonal().maxCoeff();
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 1e-13 * scale).all())
      return Eigen::MatrixXd(ldlt.solve(Eigen::MatrixXd::Identity(n, n)));
    return Eigen::MatrixXd(gram.completeOrthogonalDecomposition().pseudoInverse());
  };
  Eigen::MatrixXd inv = invert();
  int since_refresh = 0;
  while (sel.size() < target) {
    std::vector<Eigen::Index> cand = sel.candidates();
    score.assign(cand.size(), 0.0);
    kernels::score_leverage(inv, pool, cand, score, backend);
    std::size_t pick = argmax(score);
    Eigen::VectorXd r = pool.row(cand[pick]).transpose();
    gram.noalias() += r * r.transpose();
    if (++since_refresh == 16) {
      inv = invert();
      since_refresh = 0;
    } else {
      Eigen::VectorXd g = inv * r;
      inv -= (g * g.transpose()) / (1.0 + r.dot(g));
    }
    sel.add(cand[pick]);
    if (trace) trace->scores.push_back(score[pick]);
  }
}

}  // namespace

std::vector<Eigen::Index> greedy_select(const Eigen::MatrixXd& pool_matrix,
                                        GreedyCriterion criterion, Eigen::Index target_size,
                                        Eigen::Index first_row, GreedyTrace* trace) {
  const Eigen::Index rows = pool_matrix.rows();
  if (target_size < 1) throw std::invalid_argument("greedy_select: target size must be >= 1");
  if (target_size > rows)
    throw std::invalid_argument("greedy_select: pool exhausted (target " +
                                std::to_string(target_size) + " > pool " + std::to_string(rows) +
                                ")");
  if (first_row < 0 || first_row >= rows)
    throw std::out_of_range("greedy_select: first row outside the pool");
  if (pool_matrix.cols() < 2 && (criterion == GreedyCriterion::MutualCoherence ||
                                 criterion == GreedyCriterion::MutualCoherenceCrossCorrelation))
    throw std::invalid_argument("greedy_select: coherence criteria need at least two columns");
  Selection sel(rows, first_row);
  switch (criterion) {
    case GreedyCriterion::MutualCoherence:
      select_coherence(pool_matrix, false, target_size, sel, trace);
      break;
    case GreedyCriterion::MutualCoherenceCrossCorrelation:
      select_coherence(pool_matrix, true, target_size, sel, trace);
      break;
    case GreedyCriterion::DOptimal:
    case GreedyCriterion::DCoherence:
      select_d_optimal(pool_matrix, target_size, sel, trace);
      break;
  }
  return std::move(sel.order());
}

SampleSet greedy_l1_optimal(const GreedyConfig& config, const MultiIndexSet& basis,
                            const InputSpec& spec, std::uint64_t seed, GreedyTrace* trace) {
  if (config.pool_size < 1) throw std::invalid_argument("greedy_l1_optimal: empty pool");
  if (config.target_size > config.pool_size)
    throw std::invalid_argument("greedy_l1_optimal: pool exhausted (target " +
                                std::to_string(config.target_size) + " > pool " +
                                std::to_string(config.pool_size) + ")");
  const bool coherence_pool = config.criterion == GreedyCriterion::DCoherence;
  const std::uint64_t pool_seed = derive_seed(seed, "pool");
  SampleSet pool = coherence_pool ? coherence_optimal(config.pool_size, basis, pool_seed, config.chain)
                                  : random_grid(config.pool_size, basis.dim(), pool_seed);
  Eigen::MatrixXd pool_matrix = assemble_matrix(pool, basis, spec).values;
  Rng first_rng(derive_seed(seed, "first"));
  auto first = static_cast<Eigen::Index>(
      uniform_index(first_rng, static_cast<std::size_t>(config.pool_size)));
  std::vector<Eigen::Index> order =
      greedy_select(pool_matrix, config.criterion, config.target_size, first, trace);

  SampleSet out;
  const auto m = static_cast<Eigen::Index>(order.size());
  out.points.resize(m, pool.dim());
  out.weights.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.points.row(i) = pool.points.row(order[static_cast<std::size_t>(i)]);
    out.weights[i] = pool.weights[order[static_cast<std::size_t>(i)]];
  }
  out.order = std::move(order);
  switch (config.criterion) {
    case GreedyCriterion::MutualCoherence: out.scheme = Scheme::GreedyMc; break;
    case GreedyCriterion::MutualCoherenceCrossCorrelation: out.scheme = Scheme::GreedyMcCc; break;
    case GreedyCriterion::DOptimal: out.scheme = Scheme::GreedyD; break;
    case GreedyCriterion::DCoherence: out.scheme = Scheme::GreedyDCoh; break;
  }
  out.seed = seed;
  out.acceptance_rate = pool.acceptance_rate;
  return out;
}

}  // namespace gpce
