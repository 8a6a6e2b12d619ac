#pragma once

#include "gpce/basis.hpp"
#include "gpce/sampling.hpp"
#include "gpce/solver.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gpce {

enum class SolverKind { Lars, LeastSquares };

struct SolverChoice {
  SolverKind kind = SolverKind::Lars;
  SelectionRule rule;
};

std::string solver_name(SolverKind kind);  ///< "l1" / "l2"

/// Maps physical points (one per row) to outputs (one column per QOI).
using Evaluator = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

class GpceModel {
 public:
  GpceModel() = default;
  GpceModel(MultiIndexSet basis, InputSpec spec, Eigen::MatrixXd coefficients);

  const MultiIndexSet& basis() const { return basis_; }
  const InputSpec& spec() const { return spec_; }
  /// N_c x N_y, rows in basis order.
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  Eigen::Index outputs() const { return coefficients_.cols(); }

  /// Points in physical coordinates; throws std::out_of_range naming the
  /// first row outside the input bounds.
  Eigen::MatrixXd predict(const Eigen::MatrixXd& points) const;
  /// Points in [0, 1]^d.
  Eigen::MatrixXd predict_unit(const Eigen::MatrixXd& unit_points) const;

  std::string to_json() const;
  static GpceModel from_json(const std::string& text);

 private:
  MultiIndexSet basis_;
  InputSpec spec_;
  Eigen::MatrixXd coefficients_;
};

/// Solves W Psi C = W Y column by column. Observations are M x N_y.
GpceModel fit(const SampleSet& samples, const Eigen::MatrixXd& observations,
              const MultiIndexSet& basis, const InputSpec& spec, const SolverChoice& solver = {});

/// Coefficients only, from an already weighted design and weighted observations.
Eigen::MatrixXd solve_coefficients(const Eigen::MatrixXd& design, const Eigen::MatrixXd& rhs,
                                   const SolverChoice& solver);

struct NrmsdResult {
  std::vector<double> per_qoi;            ///< NaN for degenerate QOIs
  double mean = 0.0;                      ///< over non-degenerate QOIs
  std::vector<Eigen::Index> degenerate;   ///< QOIs with zero reference range
};

/// sqrt(mean (pred - ref)^2) / (max ref - min ref) per column. Throws when
/// every QOI is degenerate.
NrmsdResult nrmsd(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& reference);

/// Draws n_test uniform points from `seed` and compares model and reference there.
NrmsdResult nrmsd(const GpceModel& model, const Evaluator& reference, Eigen::Index n_test,
                  std::uint64_t seed);

struct Moments {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};

/// Mean = coefficient of the zero index, variance = sum of the other squared coefficients.
Moments moments(const GpceModel& model);

/// Plain Monte Carlo over uniform inputs with the unbiased variance
/// estimator. Points are drawn row by row from one stream, so a run with n
/// shares its first n draws with any longer run under the same seed.
Moments reference_moments_mc(const Evaluator& evaluator, const InputSpec& spec, Eigen::Index n,
                             std::uint64_t seed);

/// Unit-cube points mapped to physical coordinates.
Eigen::MatrixXd to_physical(const InputSpec& spec, const Eigen::MatrixXd& unit_points);

}  // namespace gpce
