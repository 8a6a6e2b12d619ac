#pragma once

#include "gpce/basis.hpp"
#include "gpce/surrogate.hpp"

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gpce {

/// sin x1 + a sin^2 x2 + b x3^4 sin x1 with x3 held fixed.
double ishigami(std::span<const double> x, double a = 7.0, double b = 0.1, double x3 = 1.0);

/// sum_{i<d} 100 (x_{i+1} - x_i^2)^2 + (x_i - 1)^2. Throws for d < 2.
double rosenbrock(std::span<const double> x);

/// sum_{i<d} x_i x_{i+1} over consecutive pairs. Throws for d < 2.
double lpp(std::span<const double> x);

/// Randles-circuit parameters in input order.
struct ElectrodeParams {
  double r_s, r_ct, r_d, q_d, alpha_d, q_dl, alpha_dl;

  static ElectrodeParams from(std::span<const double> x);
  static ElectrodeParams mean();
};

/// Lower and upper parameter bounds, in ElectrodeParams order.
const std::array<double, 7>& electrode_lower();
const std::array<double, 7>& electrode_upper();

/// Z = R_s + (Q_dl (j w)^a_dl + 1 / (R_ct + R_d / (1 + R_d Q_d (j w)^a_d)))^-1.
std::complex<double> electrode_impedance(const ElectrodeParams& p, double omega);

/// `count` log-spaced frequencies from 1 Hz to 1 GHz inclusive (Hz).
std::vector<double> electrode_frequencies(int count);

/// [Re Z(w_1..w_n), Im Z(w_1..w_n)] with w = 2 pi f.
std::vector<double> electrode_qoi_vector(const ElectrodeParams& p,
                                         std::span<const double> frequencies_hz);

inline constexpr int kElectrodeFullFrequencies = 1000;
inline constexpr int kElectrodeReducedFrequencies = 64;

/// A registered benchmark model with its input domain and GPCE settings.
struct TestProblem {
  std::string name;
  InputSpec spec;
  int order = 0;
  int interaction = 0;
  Eigen::Index outputs = 1;
  Evaluator evaluate;                     ///< physical points -> outputs
  std::optional<Moments> exact_moments;   ///< closed-form moments when known

  MultiIndexSet basis() const { return MultiIndexSet::build(spec.dim(), order, interaction); }
};

/// "ishigami", "rosenbrock6", "lpp30", "electrode". `frequencies` applies
/// to the electrode model only. Throws std::invalid_argument for unknown names.
TestProblem make_problem(std::string_view name, int frequencies = kElectrodeReducedFrequencies);

std::vector<std::string> problem_names();

}  // namespace gpce
