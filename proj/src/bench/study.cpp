#include "gpce/bench.hpp"

#include "gpce/criteria.hpp"
#include "gpce/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace gpce {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double relative_error(double estimate, double reference) {
  double diff = std::abs(estimate - reference);
  return reference != 0.0 ? diff / std::abs(reference) : diff;
}

double mean_relative_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& reference) {
  double sum = 0.0;
  for (Eigen::Index q = 0; q < estimate.size(); ++q) sum += relative_error(estimate[q], reference[q]);
  return sum / static_cast<double>(estimate.size());
}

struct SharedData {
  const TestProblem* problem;
  MultiIndexSet basis;
  Eigen::MatrixXd psi_test;
  Eigen::MatrixXd y_test;
  Moments reference;
};

std::vector<ConvergenceRecord> run_unit(const StudyConfig& config, const SchemeSpec& arm, int rep,
                                        const SharedData& shared) {
  const TestProblem& problem = *shared.problem;
  const std::uint64_t seed =
      derive_seed(config.master_seed, arm.label, static_cast<std::uint64_t>(rep));
  const Eigen::Index max_n = config.grid.back();
  const bool regenerate = is_lhs(arm.scheme);

  SampleSet full;
  Eigen::MatrixXd y_full;
  if (!regenerate) {
    full = generate_design(arm.scheme, max_n, shared.basis, problem.spec, seed, config);
    y_full = problem.evaluate(to_physical(problem.spec, full.points));
  }

  std::vector<ConvergenceRecord> out;
  for (Eigen::Index n : config.grid) {
    ConvergenceRecord rec;
    rec.scheme = arm.label;
    rec.rep = rep;
    rec.n = n;
    try {
      SampleSet samples;
      Eigen::MatrixXd y;
      if (regenerate) {
        samples = generate_design(arm.scheme, n, shared.basis, problem.spec,
                                  derive_seed(seed, "n", static_cast<std::uint64_t>(n)), config);
        y = problem.evaluate(to_physical(problem.spec, samples.points));
      } else {
        samples = full.prefix(n);
        y = y_full.topRows(n);
      }
      GpceMatrix design = assemble_matrix(samples, shared.basis, problem.spec);
      if (design.weighted) y = samples.weights.asDiagonal() * y;
      Eigen::MatrixXd coef = solve_coefficients(design.values, y, arm.solver);
      rec.nrmsd = nrmsd(shared.psi_test * coef, shared.y_test).mean;
      try {
        rec.mu = mutual_coherence(design.values);
      } catch (const std::invalid_argument&) {
        rec.mu = kNaN;
      }
      Eigen::VectorXd mean = coef.row(0).transpose();
      Eigen::VectorXd std =
          coef.bottomRows(coef.rows() - 1).colwise().squaredNorm().transpose().cwiseSqrt();
      rec.mean_err = mean_relative_error(mean, shared.reference.mean);
      rec.std_err = mean_relative_error(std, shared.reference.std);
    } catch (const std::exception&) {
      rec.nrmsd = rec.mu = rec.mean_err = rec.std_err = kNaN;
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace

SchemeSpec parse_scheme_spec(const std::string& text, const SolverChoice& fallback) {
  SchemeSpec spec;
  spec.solver = fallback;
  std::string name = text;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    std::string solver = text.substr(colon + 1);
    if (solver == "l1" || solver == "lars")
      spec.solver.kind = SolverKind::Lars;
    else if (solver == "l2" || solver == "ls")
      spec.solver.kind = SolverKind::LeastSquares;
    else
      throw std::invalid_argument("scheme '" + text + "': unknown solver suffix '" + solver + "'");
  }
  auto scheme = parse_scheme(name);
  if (!scheme) throw std::invalid_argument("unknown scheme '" + name + "'");
  spec.scheme = *scheme;
  spec.label = std::string(scheme_name(*scheme));
  if (colon != std::string::npos) spec.label += ":" + solver_name(spec.solver.kind);
  return spec;
}

void StudyConfig::validate() const {
  if (schemes.empty()) throw std::invalid_argument("study.schemes: at least one scheme required");
  if (grid.empty()) throw std::invalid_argument("grid: at least one sample size required");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw std::invalid_argument("grid: sample sizes must be positive");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw std::invalid_argument("grid: sample sizes must be strictly increasing");
  }
  if (repetitions < 2) throw std::invalid_argument("study.repetitions: must be >= 2");
  if (thresholds.empty()) throw std::invalid_argument("study.thresholds: at least one required");
  for (double t : thresholds)
    if (!(t > 0.0)) throw std::invalid_argument("study.thresholds: must be positive");
  if (n_test < 2) throw std::invalid_argument("study.n_test: must be >= 2");
  if (reference_samples < 2) throw std::invalid_argument("study.reference_samples: must be >= 2");
  if (greedy_pool_factor < 1) throw std::invalid_argument("sampling.greedy_pool_factor: must be >= 1");
  if (!(sc_alpha > 0.0 && sc_alpha <= 1.0))
    throw std::invalid_argument("sampling.sc_alpha: must lie in (0, 1]");
  if (frequencies < 1) throw std::invalid_argument("problem.frequencies: must be >= 1");
  for (std::size_t i = 0; i < schemes.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (schemes[i].label == schemes[j].label)
        throw std::invalid_argument("study.schemes: duplicate entry '" + schemes[i].label + "'");
}

SampleSet generate_design(Scheme scheme, Eigen::Index m, const MultiIndexSet& basis,
                          const InputSpec& spec, std::uint64_t seed, const StudyConfig& config) {
  const int d = spec.dim();
  switch (scheme) {
    case Scheme::Random:
      return random_grid(m, d, seed);
    case Scheme::LhsStandard:
      return lhs_standard(m, d, seed);
    case Scheme::LhsMaximin:
    case Scheme::LhsPhiP: {
      LhsPoolParams params = config.lhs_pool;
      params.criterion = scheme == Scheme::LhsMaximin ? PoolCriterion::Maximin : PoolCriterion::PhiP;
      return lhs_pool_optimal(m, d, seed, params);
    }
    case Scheme::LhsScEse:
      return lhs_sc_ese(m, d, seed, config.sc_alpha, config.ese);
    case Scheme::CoherenceOptimal:
      return coherence_optimal(m, basis, seed, config.chain);
    case Scheme::GreedyMc:
    case Scheme::GreedyMcCc:
    case Scheme::GreedyD:
    case Scheme::GreedyDCoh: {
      GreedyConfig g;
      g.pool_size = static_cast<Eigen::Index>(config.greedy_pool_factor) * m;
      g.target_size = m;
      g.chain = config.chain;
      g.criterion = scheme == Scheme::GreedyMc     ? GreedyCriterion::MutualCoherence
                    : scheme == Scheme::GreedyMcCc ? GreedyCriterion::MutualCoherenceCrossCorrelation
                    : scheme == Scheme::GreedyD    ? GreedyCriterion::DOptimal
                                                   : GreedyCriterion::DCoherence;
      return greedy_l1_optimal(g, basis, spec, seed);
    }
  }
  throw std::logic_error("generate_design: unhandled scheme");
}

StudyResult run_study(const StudyConfig& config, int jobs) {
  TestProblem problem = make_problem(config.problem, config.frequencies);
  return run_study(config, problem, jobs);
}

StudyResult run_study(const StudyConfig& config, const TestProblem& problem, int jobs) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  SharedData shared{&problem, problem.basis(), {}, {}, {}};

  SampleSet test = random_grid(config.n_test, problem.spec.dim(), derive_seed(config.master_seed, "test"));
  shared.psi_test = basis_matrix_unit(test.points, shared.basis);
  shared.y_test = problem.evaluate(to_physical(problem.spec, test.points));
  shared.reference = problem.exact_moments
                         ? *problem.exact_moments
                         : reference_moments_mc(problem.evaluate, problem.spec, config.reference_samples,
                                                derive_seed(config.master_seed, "reference"));

  const auto arms = static_cast<long>(config.schemes.size());
  const long units = arms * config.repetitions;
  std::vector<std::vector<ConvergenceRecord>> slots(static_cast<std::size_t>(units));
  std::string error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
  for (long u = 0; u < units; ++u) {
    const auto& arm = config.schemes[static_cast<std::size_t>(u / config.repetitions)];
    const int rep = static_cast<int>(u % config.repetitions);
    try {
      slots[static_cast<std::size_t>(u)] = run_unit(config, arm, rep, shared);
    } catch (const std::exception& e) {
#pragma omp critical(gpce_study_error)
      if (error.empty()) error = arm.label + " repetition " + std::to_string(rep) + ": " + e.what();
    }
  }
  if (!error.empty()) throw std::runtime_error(error);

  StudyResult result;
  for (auto& slot : slots)
    for (auto& rec : slot) result.records.push_back(std::move(rec));
  result.reference = shared.reference;
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace gpce
