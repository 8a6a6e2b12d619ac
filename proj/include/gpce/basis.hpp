#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gpce {

/// Per-dimension polynomial degrees of one basis term.
using MultiIndex = std::vector<int>;

/// Truncated multi-index set: every alpha with |alpha|_1 <= p and at most
/// p_i non-zero entries, in graded-lexicographic order (total degree first,
/// then ascending lexicographic, first dimension most significant).
class MultiIndexSet {
 public:
  static MultiIndexSet build(int dim, int order, int interaction);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int interaction() const { return interaction_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  int max_degree() const { return max_degree_; }

  /// Non-zero (dimension, degree) pairs of term i.
  const std::vector<std::pair<int, int>>& sparse_term(std::size_t i) const {
    return sparse_[i];
  }

  /// Rebuild from an explicit ordered list (deserialization).
  static MultiIndexSet from_indices(int dim, int order, int interaction,
                                    std::vector<MultiIndex> indices);

 private:
  void index_terms();

  int dim_ = 0;
  int order_ = 0;
  int interaction_ = 0;
  int max_degree_ = 0;
  std::vector<MultiIndex> indices_;
  std::vector<std::vector<std::pair<int, int>>> sparse_;
};

/// Orthonormal Legendre polynomial sqrt(2n+1) P_n(x) w.r.t. the uniform
/// density on [-1, 1].
double legendre(int order, double x);

/// Fills out[0..max_order] with the orthonormal Legendre values at x.
void legendre_table(int max_order, double x, std::span<double> out);

/// Product of 1-d orthonormal Legendre factors.
double eval_basis(const MultiIndex& alpha, std::span<const double> xi);

/// Independent uniform inputs given by physical bounds per dimension.
class InputSpec {
 public:
  InputSpec() = default;
  InputSpec(std::vector<double> lower, std::vector<double> upper,
            std::vector<std::string> names = {});

  int dim() const { return static_cast<int>(lower_.size()); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<std::string>& names() const { return names_; }

  bool contains(std::span<const double> x, double tol = 1e-12) const;

  /// Physical point -> [-1, 1]^d. Throws std::out_of_range outside bounds.
  std::vector<double> normalize(std::span<const double> x) const;
  /// [-1, 1]^d -> physical point.
  std::vector<double> denormalize(std::span<const double> xi) const;
  /// Unit hypercube [0, 1]^d -> physical point.
  std::vector<double> from_unit_cube(std::span<const double> u) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
};

/// Rows scaled by sample weights when `weighted` is set.
struct GpceMatrix {
  Eigen::MatrixXd values;
  bool weighted = false;
};

struct SampleSet;

/// Basis evaluations at sample points given in the unit hypercube.
/// Each row is multiplied by the sample's weight.
GpceMatrix assemble_matrix(const SampleSet& samples, const MultiIndexSet& basis,
                           const InputSpec& spec);

/// Unweighted evaluations at points of [0, 1]^d (one row per point).
Eigen::MatrixXd basis_matrix_unit(const Eigen::MatrixXd& unit_points,
                                  const MultiIndexSet& basis);

/// Sum of squared basis values at xi in [-1, 1]^d.
double basis_sum_of_squares(const MultiIndexSet& basis, std::span<const double> xi);

}  // namespace gpce
