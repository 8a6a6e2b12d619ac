#include "gpce/basis.hpp"

#include "gpce/kernels.hpp"
#include "gpce/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gpce {

namespace {

// Enumerates all alpha with |alpha|_1 == total in ascending lexicographic
// order (first dimension most significant).
void enumerate_total(int dim, int total, int max_nonzero, MultiIndex& current, int pos,
                     int nonzero, std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    if (total > 0 && nonzero + 1 > max_nonzero) return;
    current[pos] = total;
    out.push_back(current);
    current[pos] = 0;
    return;
  }
  for (int k = 0; k <= total; ++k) {
    int nz = nonzero + (k > 0 ? 1 : 0);
    if (nz > max_nonzero) continue;
    current[pos] = k;
    enumerate_total(dim, total - k, max_nonzero, current, pos + 1, nz, out);
  }
  current[pos] = 0;
}

}  // namespace

MultiIndexSet MultiIndexSet::build(int dim, int order, int interaction) {
  if (dim < 1) throw std::invalid_argument("MultiIndexSet: dim must be >= 1");
  if (order < 0 || interaction < 0)
    throw std::invalid_argument("MultiIndexSet: order and interaction must be >= 0");

  MultiIndexSet set;
  set.dim_ = dim;
  set.order_ = order;
  set.interaction_ = interaction;

  MultiIndex current(dim, 0);
  set.indices_.push_back(current);
  int max_nonzero = std::min(interaction, dim);
  if (max_nonzero > 0) {
    for (int total = 1; total <= order; ++total)
      enumerate_total(dim, total, max_nonzero, current, 0, 0, set.indices_);
  }
  set.index_terms();
  return set;
}

MultiIndexSet MultiIndexSet::from_indices(int dim, int order, int interaction,
                                          std::vector<MultiIndex> indices) {
  MultiIndexSet set;
  set.dim_ = dim;
  set.order_ = order;
  set.interaction_ = interaction;
  for (const auto& a : indices) {
    if (static_cast<int>(a.size()) != dim)
      throw std::invalid_argument("MultiIndexSet: index length differs from dim");
    if (std::any_of(a.begin(), a.end(), [](int v) { return v < 0; }))
      throw std::invalid_argument("MultiIndexSet: negative degree");
  }
  set.indices_ = std::move(indices);
  set.index_terms();
  return set;
}

void MultiIndexSet::index_terms() {
  sparse_.clear();
  sparse_.reserve(indices_.size());
  max_degree_ = 0;
  for (const auto& a : indices_) {
    std::vector<std::pair<int, int>> term;
    for (int k = 0; k < dim_; ++k) {
      if (a[k] > 0) term.emplace_back(k, a[k]);
      max_degree_ = std::max(max_degree_, a[k]);
    }
    sparse_.push_back(std::move(term));
  }
}

void legendre_table(int max_order, double x, std::span<double> out) {
  // Three-term recurrence on the classical P_n, scaled at the end.
  out[0] = 1.0;
  if (max_order == 0) return;
  double prev = 1.0;
  double cur = x;
  out[1] = std::sqrt(3.0) * x;
  for (int n = 1; n < max_order; ++n) {
    double next = ((2.0 * n + 1.0) * x * cur - n * prev) / (n + 1.0);
    prev = cur;
    cur = next;
    out[n + 1] = std::sqrt(2.0 * (n + 1) + 1.0) * cur;
  }
}

double legendre(int order, double x) {
  if (order < 0) throw std::invalid_argument("legendre: negative order");
  std::vector<double> table(order + 1);
  legendre_table(order, x, table);
  return table[order];
}

double eval_basis(const MultiIndex& alpha, std::span<const double> xi) {
  if (alpha.size() != xi.size())
    throw std::invalid_argument("eval_basis: dimension mismatch between alpha and xi");
  double value = 1.0;
  for (std::size_t k = 0; k < alpha.size(); ++k)
    if (alpha[k] > 0) value *= legendre(alpha[k], xi[k]);
  return value;
}

double basis_sum_of_squares(const MultiIndexSet& basis, std::span<const double> xi) {
  const int d = basis.dim();
  const int pmax = basis.max_degree();
  std::vector<double> table(static_cast<std::size_t>(d) * (pmax + 1));
  for (int k = 0; k < d; ++k)
    legendre_table(pmax, xi[k], std::span<double>(table).subspan(k * (pmax + 1), pmax + 1));
  double sum = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    double v = 1.0;
    for (auto [dim, deg] : basis.sparse_term(j)) v *= table[dim * (pmax + 1) + deg];
    sum += v * v;
  }
  return sum;
}

InputSpec::InputSpec(std::vector<double> lower, std::vector<double> upper,
                     std::vector<std::string> names)
    : lower_(std::move(lower)), upper_(std::move(upper)), names_(std::move(names)) {
  if (lower_.size() != upper_.size() || lower_.empty())
    throw std::invalid_argument("InputSpec: bounds must be non-empty and of equal length");
  for (std::size_t k = 0; k < lower_.size(); ++k)
    if (!(lower_[k] < upper_[k]))
      throw std::invalid_argument("InputSpec: lower bound must be below upper bound in dimension " +
                                  std::to_string(k));
  if (names_.empty())
    for (std::size_t k = 0; k < lower_.size(); ++k) names_.push_back("x" + std::to_string(k + 1));
}

bool InputSpec::contains(std::span<const double> x, double tol) const {
  if (x.size() != lower_.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double slack = tol * (upper_[k] - lower_[k]);
    if (!(x[k] >= lower_[k] - slack && x[k] <= upper_[k] + slack)) return false;
  }
  return true;
}

std::vector<double> InputSpec::normalize(std::span<const double> x) const {
  if (x.size() != lower_.size())
    throw std::invalid_argument("InputSpec::normalize: dimension mismatch");
  if (!contains(x)) throw std::out_of_range("InputSpec::normalize: point outside input bounds");
  std::vector<double> xi(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    double v = 2.0 * (x[k] - lower_[k]) / (upper_[k] - lower_[k]) - 1.0;
    xi[k] = std::clamp(v, -1.0, 1.0);
  }
  return xi;
}

std::vector<double> InputSpec::denormalize(std::span<const double> xi) const {
  if (xi.size() != lower_.size())
    throw std::invalid_argument("InputSpec::denormalize: dimension mismatch");
  std::vector<double> x(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k)
    x[k] = lower_[k] + 0.5 * (xi[k] + 1.0) * (upper_[k] - lower_[k]);
  return x;
}

std::vector<double> InputSpec::from_unit_cube(std::span<const double> u) const {
  if (u.size() != lower_.size())
    throw std::invalid_argument("InputSpec::from_unit_cube: dimension mismatch");
  std::vector<double> x(u.size());
  for (std::size_t k = 0; k < u.size(); ++k)
    x[k] = lower_[k] + u[k] * (upper_[k] - lower_[k]);
  return x;
}

Eigen::MatrixXd basis_matrix_unit(const Eigen::MatrixXd& unit_points,
                                  const MultiIndexSet& basis) {
  if (unit_points.cols() != basis.dim())
    throw std::invalid_argument("basis_matrix_unit: point dimension differs from basis");
  Eigen::MatrixXd out;
  kernels::assemble(unit_points, basis, {}, out, kernels::default_backend());
  return out;
}

GpceMatrix assemble_matrix(const SampleSet& samples, const MultiIndexSet& basis,
                           const InputSpec& spec) {
  if (samples.size() == 0) throw std::invalid_argument("assemble_matrix: empty sample set");
  if (samples.dim() != basis.dim() || spec.dim() != basis.dim())
    throw std::invalid_argument("assemble_matrix: dimension mismatch");
  GpceMatrix m;
  m.weighted = samples.is_weighted();
  std::span<const double> scale;
  if (m.weighted) scale = std::span<const double>(samples.weights.data(), samples.weights.size());
  kernels::assemble(samples.points, basis, scale, m.values, kernels::default_backend());
  return m;
}

}  // namespace gpce
