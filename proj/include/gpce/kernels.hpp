#pragma once

// Data-parallel inner loops. Every kernel exists twice: a serial reference
// and an OpenMP version. Both run the same per-item code, so their outputs
// are bit-identical for any thread count; tests/unit/test_kernels.cpp and
// the benchmark target compare them.

#include <Eigen/Dense>

#include <span>

namespace gpce {
class MultiIndexSet;
}

namespace gpce::kernels {

enum class Backend { Serial, OpenMP };

/// Backend used by the library entry points (OpenMP unless overridden).
Backend default_backend();
void set_default_backend(Backend backend);

/// out(i, j) = row_scale[i] * Psi_j(2 * unit_points.row(i) - 1).
/// An empty row_scale means all ones.
void assemble(const Eigen::MatrixXd& unit_points, const MultiIndexSet& basis,
              std::span<const double> row_scale, Eigen::MatrixXd& out,
              Backend backend);

/// Scores of appending each candidate row r = pool.row(candidates[k]) to a
/// design with Gramian `gram` (unnormalized Psi^T Psi). With G' = gram + r r^T:
///   mu[k]    = max_{a<b} |G'_ab| / sqrt(G'_aa G'_bb)
///   gamma[k] = ||I - G'/rows_after||_F^2 / (K (K - 1))
/// Zero-norm columns contribute nothing to mu.
void score_coherence(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& pool,
                     std::span<const Eigen::Index> candidates, double rows_after,
                     std::span<double> mu, std::span<double> gamma, Backend backend);

/// Squared norm of the component of each candidate row orthogonal to the
/// row space spanned by the orthonormal rows of `basis_rows`.
void score_projection_residual(const Eigen::MatrixXd& basis_rows,
                               const Eigen::MatrixXd& pool,
                               std::span<const Eigen::Index> candidates,
                               std::span<double> out, Backend backend);

/// Leverage r^T G^{-1} r of each candidate row.
void score_leverage(const Eigen::MatrixXd& gram_inverse, const Eigen::MatrixXd& pool,
                    std::span<const Eigen::Index> candidates, std::span<double> out,
                    Backend backend);

/// Symmetric matrix of pairwise distances between rows of `points`
/// (Minkowski exponent t; periodic wraps each coordinate difference).
void pairwise_distances(const Eigen::MatrixXd& points, double t, bool periodic,
                        Eigen::MatrixXd& out, Backend backend);

}  // namespace gpce::kernels
