#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <span>
#include <string>

namespace gpce {

struct CriterionScore {
  std::string name;
  double value = 0.0;
};

/// Largest normalized absolute inner product between distinct columns.
/// Throws std::invalid_argument on a zero column or fewer than two columns.
double mutual_coherence(const Eigen::MatrixXd& matrix);

/// ||I - Psi^T Psi / M||_F^2 / (K (K - 1)) with K the column count.
double avg_cross_correlation(const Eigen::MatrixXd& matrix);

/// Result of the min-max normalized hybrid of coherence and cross-correlation.
struct HybridChoice {
  std::size_t index = 0;
  double score = 0.0;
  double mu_min = 0.0, mu_max = 0.0;
  double gamma_min = 0.0, gamma_max = 0.0;
};

/// argmin_i ((mu_i - min mu)/(max mu - min mu))^2 + ((g_i - min g)/(max g - min g))^2.
/// A term whose range is zero contributes 0. Ties resolve to the lowest index.
HybridChoice hybrid_score(std::span<const double> mu, std::span<const double> gamma);

enum class DOptimalityMode {
  InverseGramian,  ///< rows >= cols: |G^{-1}|^{1/N_c}, G = Psi^T Psi / M
  RowSurrogate,    ///< rows < cols: det(Psi Psi^T)^{1/M}
  Singular,        ///< square Gramian not invertible; value is +inf
};

struct DOptimality {
  double value = 0.0;
  DOptimalityMode mode = DOptimalityMode::InverseGramian;
};

DOptimality d_optimality(const Eigen::MatrixXd& matrix);

enum class DistanceMetric { Euclidean, Periodic };

/// Minimum pairwise distance between rows.
double maximin_distance(const Eigen::MatrixXd& points, double t = 2.0,
                        DistanceMetric metric = DistanceMetric::Euclidean);

/// (sum_i J_i d_i^{-p})^{1/p} over distinct distances d_i with multiplicities
/// J_i (distances within 1e-12 are merged). +inf when two points coincide.
double phi_p(const Eigen::MatrixXd& points, double p_exp = 10.0, double t = 2.0,
             DistanceMetric metric = DistanceMetric::Euclidean);

inline constexpr double kDistanceTieTolerance = 1e-12;

}  // namespace gpce
