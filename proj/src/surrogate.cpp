#include "gpce/surrogate.hpp"

#include "gpce/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace gpce {

std::string solver_name(SolverKind kind) { return kind == SolverKind::Lars ? "l1" : "l2"; }

GpceModel::GpceModel(MultiIndexSet basis, InputSpec spec, Eigen::MatrixXd coefficients)
    : basis_(std::move(basis)), spec_(std::move(spec)), coefficients_(std::move(coefficients)) {
  if (coefficients_.rows() != static_cast<Eigen::Index>(basis_.size()))
    throw std::invalid_argument("GpceModel: coefficient rows differ from basis size");
  if (spec_.dim() != basis_.dim())
    throw std::invalid_argument("GpceModel: input spec and basis dimensions differ");
}

Eigen::MatrixXd to_physical(const InputSpec& spec, const Eigen::MatrixXd& unit_points) {
  Eigen::MatrixXd out(unit_points.rows(), unit_points.cols());
  for (Eigen::Index k = 0; k < unit_points.cols(); ++k) {
    const double lo = spec.lower()[static_cast<std::size_t>(k)];
    const double hi = spec.upper()[static_cast<std::size_t>(k)];
    out.col(k) = (lo + unit_points.col(k).array() * (hi - lo)).matrix();
  }
  return out;
}

Eigen::MatrixXd GpceModel::predict(const Eigen::MatrixXd& points) const {
  if (points.cols() != spec_.dim())
    throw std::invalid_argument("predict: points have " + std::to_string(points.cols()) +
                                " columns, model expects " + std::to_string(spec_.dim()));
  Eigen::MatrixXd unit(points.rows(), points.cols());
  std::vector<double> row(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index k = 0; k < points.cols(); ++k) row[static_cast<std::size_t>(k)] = points(i, k);
    if (!spec_.contains(row))
      throw std::out_of_range("predict: row " + std::to_string(i) + " lies outside the input domain");
    std::vector<double> xi = spec_.normalize(row);
    for (Eigen::Index k = 0; k < points.cols(); ++k)
      unit(i, k) = 0.5 * (xi[static_cast<std::size_t>(k)] + 1.0);
  }
  return predict_unit(unit);
}

Eigen::MatrixXd GpceModel::predict_unit(const Eigen::MatrixXd& unit_points) const {
  return basis_matrix_unit(unit_points, basis_) * coefficients_;
}

std::string GpceModel::to_json() const {
  nlohmann::json j;
  j["format"] = "gpce-model";
  j["version"] = 1;
  j["spec"] = {{"lower", spec_.lower()}, {"upper", spec_.upper()}, {"names", spec_.names()}};
  j["basis"] = {{"dim", basis_.dim()},
                {"order", basis_.order()},
                {"interaction", basis_.interaction()},
                {"indices", basis_.indices()}};
  nlohmann::json coef = nlohmann::json::array();
  for (Eigen::Index q = 0; q < coefficients_.cols(); ++q) {
    std::vector<double> col(coefficients_.col(q).data(),
                            coefficients_.col(q).data() + coefficients_.rows());
    coef.push_back(col);
  }
  j["coefficients"] = coef;
  return j.dump(1);
}

GpceModel GpceModel::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model file: ") + e.what());
  }
  if (j.value("format", "") != "gpce-model") throw std::runtime_error("model file: not a gpce model");
  try {
    InputSpec spec(j["spec"]["lower"].get<std::vector<double>>(),
                   j["spec"]["upper"].get<std::vector<double>>(),
                   j["spec"]["names"].get<std::vector<std::string>>());
    const auto& b = j["basis"];
    MultiIndexSet basis = MultiIndexSet::from_indices(
        b["dim"].get<int>(), b["order"].get<int>(), b["interaction"].get<int>(),
        b["indices"].get<std::vector<MultiIndex>>());
    auto cols = j["coefficients"].get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd coef(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t q = 0; q < cols.size(); ++q) {
      if (cols[q].size() != basis.size())
        throw std::runtime_error("model file: coefficient column " + std::to_string(q) +
                                 " has the wrong length");
      for (std::size_t i = 0; i < cols[q].size(); ++i)
        coef(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) = cols[q][i];
    }
    return GpceModel(std::move(basis), std::move(spec), std::move(coef));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model file: ") + e.what());
  }
}

Eigen::MatrixXd solve_coefficients(const Eigen::MatrixXd& design, const Eigen::MatrixXd& rhs,
                                   const SolverChoice& solver) {
  if (design.rows() != rhs.rows())
    throw std::invalid_argument("fit: observations have " + std::to_string(rhs.rows()) +
                                " rows, samples " + std::to_string(design.rows()));
  if (solver.kind == SolverKind::LeastSquares) return least_squares_pinv(design, rhs);

  LarsSolver lars(design, solver.rule);
  Eigen::MatrixXd coef(design.cols(), rhs.cols());
  const auto n_y = static_cast<long>(rhs.cols());
  std::string error;
#pragma omp parallel for schedule(dynamic) if (n_y > 1 && !omp_in_parallel())
  for (long q = 0; q < n_y; ++q) {
    try {
      coef.col(q) = lars.fit(rhs.col(q));
    } catch (const std::exception& e) {
#pragma omp critical(gpce_fit_error)
      if (error.empty()) error = "QOI " + std::to_string(q) + ": " + e.what();
    }
  }
  if (!error.empty()) throw std::runtime_error(error);
  return coef;
}

GpceModel fit(const SampleSet& samples, const Eigen::MatrixXd& observations,
              const MultiIndexSet& basis, const InputSpec& spec, const SolverChoice& solver) {
  if (observations.rows() != samples.size())
    throw std::invalid_argument("fit: observations have " + std::to_string(observations.rows()) +
                                " rows, samples " + std::to_string(samples.size()));
  GpceMatrix design = assemble_matrix(samples, basis, spec);
  Eigen::MatrixXd rhs = observations;
  if (design.weighted) rhs = samples.weights.asDiagonal() * observations;
  return GpceModel(basis, spec, solve_coefficients(design.values, rhs, solver));
}

NrmsdResult nrmsd(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& reference) {
  if (predicted.rows() != reference.rows() || predicted.cols() != reference.cols())
    throw std::invalid_argument("nrmsd: prediction and reference shapes differ");
  if (reference.rows() == 0) throw std::invalid_argument("nrmsd: empty test set");
  NrmsdResult out;
  double sum = 0.0;
  std::size_t used = 0;
  for (Eigen::Index q = 0; q < reference.cols(); ++q) {
    double range = reference.col(q).maxCoeff() - reference.col(q).minCoeff();
    if (!(range > 0.0)) {
      out.per_qoi.push_back(std::numeric_limits<double>::quiet_NaN());
      out.degenerate.push_back(q);
      continue;
    }
    double rms = std::sqrt((predicted.col(q) - reference.col(q)).squaredNorm() /
                           static_cast<double>(reference.rows()));
    out.per_qoi.push_back(rms / range);
    sum += rms / range;
    ++used;
  }
  if (used == 0) throw std::domain_error("nrmsd: every QOI has zero range on the test set");
  out.mean = sum / static_cast<double>(used);
  return out;
}

NrmsdResult nrmsd(const GpceModel& model, const Evaluator& reference, Eigen::Index n_test,
                  std::uint64_t seed) {
  SampleSet test = random_grid(n_test, model.basis().dim(), seed);
  Eigen::MatrixXd physical = to_physical(model.spec(), test.points);
  return nrmsd(model.predict_unit(test.points), reference(physical));
}

Moments moments(const GpceModel& model) {
  const Eigen::MatrixXd& c = model.coefficients();
  Moments out;
  out.mean = c.row(0).transpose();
  out.std = c.bottomRows(c.rows() - 1).colwise().squaredNorm().transpose().cwiseSqrt();
  return out;
}

Moments reference_moments_mc(const Evaluator& evaluator, const InputSpec& spec, Eigen::Index n,
                             std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("reference_moments_mc: n must be >= 1");
  const int d = spec.dim();
  constexpr Eigen::Index kChunk = 4096;
  Rng rng(seed);
  Eigen::VectorXd mean, m2;
  Eigen::Index count = 0;
  for (Eigen::Index start = 0; start < n; start += kChunk) {
    const Eigen::Index rows = std::min(kChunk, n - start);
    Eigen::MatrixXd unit(rows, d);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (int k = 0; k < d; ++k) unit(i, k) = uniform01(rng);
    Eigen::MatrixXd y = evaluator(to_physical(spec, unit));
    if (count == 0) {
      mean = Eigen::VectorXd::Zero(y.cols());
      m2 = Eigen::VectorXd::Zero(y.cols());
    }
    for (Eigen::Index i = 0; i < rows; ++i) {  // Welford
      ++count;
      Eigen::VectorXd delta = y.row(i).transpose() - mean;
      mean += delta / static_cast<double>(count);
      m2 += delta.cwiseProduct(y.row(i).transpose() - mean);
    }
  }
  Moments out;
  out.mean = mean;
  out.std = count > 1 ? Eigen::VectorXd((m2 / static_cast<double>(count - 1)).cwiseSqrt())
                      : Eigen::VectorXd::Zero(mean.size());
  return out;
}

}  // namespace gpce
