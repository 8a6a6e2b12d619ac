#pragma once

#include "gpce/models.hpp"
#include "gpce/sampling.hpp"
#include "gpce/surrogate.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gpce {

/// One study arm: a sampling scheme and the solver used on it. The label
/// ("random", "random:l2", ...) names the arm in every report.
struct SchemeSpec {
  Scheme scheme = Scheme::Random;
  SolverChoice solver;
  std::string label;
};

/// Parses "name" or "name:l1" / "name:l2"; the suffix overrides `fallback`.
SchemeSpec parse_scheme_spec(const std::string& text, const SolverChoice& fallback);

struct StudyConfig {
  std::string problem = "ishigami";
  int frequencies = kElectrodeReducedFrequencies;
  std::vector<SchemeSpec> schemes;
  std::vector<Eigen::Index> grid;
  int repetitions = 30;
  std::vector<double> thresholds{1e-3, 1e-2, 1e-1};
  SolverChoice solver;
  std::uint64_t master_seed = 1;
  Eigen::Index n_test = 10000;
  Eigen::Index reference_samples = 1000000;  ///< MC moments when no closed form exists
  std::string baseline = "random";

  int greedy_pool_factor = 10;  ///< greedy pool size = factor * largest grid size
  LhsPoolParams lhs_pool;
  EseParams ese;
  double sc_alpha = 0.25;
  ChainParams chain;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Quantities at one (arm, repetition, N). NaN marks a failed fit.
struct ConvergenceRecord {
  std::string scheme;
  int rep = 0;
  Eigen::Index n = 0;
  double nrmsd = 0.0;
  double mu = 0.0;
  double mean_err = 0.0;
  double std_err = 0.0;
};

struct StudyResult {
  std::vector<ConvergenceRecord> records;
  Moments reference;
  double seconds = 0.0;
};

/// Sample set of size m for an arm. Greedy arms select from a pool sized by
/// the config; other arms ignore `pool_size`.
SampleSet generate_design(Scheme scheme, Eigen::Index m, const MultiIndexSet& basis,
                          const InputSpec& spec, std::uint64_t seed, const StudyConfig& config);

/// Runs every (arm, repetition) with `jobs` workers. Output order is arm,
/// repetition, N regardless of scheduling.
StudyResult run_study(const StudyConfig& config, int jobs = 1);
StudyResult run_study(const StudyConfig& config, const TestProblem& problem, int jobs = 1);

struct Crossing {
  std::optional<double> n;  ///< empty when the curve never reaches the threshold
  bool recross = false;     ///< the curve rises above the threshold after crossing
};

/// First N where eps <= threshold, interpolated linearly in (N, log10 eps)
/// between the bracketing grid points. NaN entries are skipped.
Crossing error_crossing(const std::vector<Eigen::Index>& ns, const std::vector<double>& eps,
                        double threshold);

struct RatePoint {
  Eigen::Index n = 0;
  double rate = 0.0;
};

/// Per-N fraction of curves with eps <= threshold. Curves are indexed
/// [rep][grid index]; a NaN entry counts as not converged.
std::vector<RatePoint> success_rate_curve(const std::vector<Eigen::Index>& ns,
                                          const std::vector<std::vector<double>>& curves,
                                          double threshold);

/// Smallest N at which the rate reaches q, linear between grid points.
std::optional<double> n_for_rate(const std::vector<RatePoint>& curve, double q);

/// One-tailed p-value for "a tends to be smaller than b". Exact enumeration
/// when both groups have at most 8 values, otherwise the normal
/// approximation with tie and continuity corrections. +inf is allowed.
double mann_whitney_u_one_tailed(const std::vector<double>& a, const std::vector<double>& b);
double mann_whitney_exact(const std::vector<double>& a, const std::vector<double>& b);
double mann_whitney_normal(const std::vector<double>& a, const std::vector<double>& b);

struct SummaryRow {
  std::string scheme;
  double threshold = 0.0;
  std::optional<double> n_eps_median;
  std::optional<double> n_eps_std;
  std::optional<double> n_sr95;
  std::optional<double> n_sr99;
  double p_value = 1.0;
  std::optional<double> rel_n_eps;
  std::optional<double> rel_n_sr95;
  std::optional<double> rel_n_sr99;
  int recross = 0;  ///< repetitions whose curve re-crossed the threshold
  std::vector<std::optional<double>> crossings;  ///< per repetition
};

struct SuccessRateRow {
  std::string scheme;
  double threshold = 0.0;
  Eigen::Index n = 0;
  double rate = 0.0;
};

struct Summary {
  std::vector<SummaryRow> rows;  ///< threshold-major; baseline arm first, then by label
  std::vector<SuccessRateRow> rates;
};

/// Throws std::invalid_argument when the baseline arm has no records.
Summary summarize(const std::vector<ConvergenceRecord>& records,
                  const std::vector<double>& thresholds, const std::string& baseline = "random");

/// Six significant digits; NaN and empty values render as "-".
std::string format_value(double v);
std::string format_value(const std::optional<double>& v);

void write_records_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records);
void write_summary_csv(std::ostream& out, const Summary& summary);
void write_success_rates_csv(std::ostream& out, const Summary& summary);

}  // namespace gpce
