#include "gpce/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <omp.h>

namespace gpce {

double ishigami(std::span<const double> x, double a, double b, double x3) {
  if (x.size() != 2) throw std::invalid_argument("ishigami: expects two inputs");
  const double s1 = std::sin(x[0]);
  const double s2 = std::sin(x[1]);
  return s1 + a * s2 * s2 + b * x3 * x3 * x3 * x3 * s1;
}

double rosenbrock(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("rosenbrock: needs d >= 2");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double u = x[i + 1] - x[i] * x[i];
    const double v = x[i] - 1.0;
    sum += 100.0 * u * u + v * v;
  }
  return sum;
}

double lpp(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("lpp: needs d >= 2");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) sum += x[i] * x[i + 1];
  return sum;
}

ElectrodeParams ElectrodeParams::from(std::span<const double> x) {
  if (x.size() != 7) throw std::invalid_argument("electrode: expects seven parameters");
  return {x[0], x[1], x[2], x[3], x[4], x[5], x[6]};
}

ElectrodeParams ElectrodeParams::mean() {
  return {500.0, 10e3, 120e3, 4.0e-10, 0.95, 6.0e-7, 0.67};
}

const std::array<double, 7>& electrode_lower() {
  static const std::array<double, 7> v{0.0, 9e3, 108e3, 3.6e-10, 0.855, 5.4e-7, 0.603};
  return v;
}

const std::array<double, 7>& electrode_upper() {
  static const std::array<double, 7> v{1e3, 11e3, 132e3, 4.4e-10, 1.0, 6.6e-7, 0.737};
  return v;
}

std::complex<double> electrode_impedance(const ElectrodeParams& p, double omega) {
  const std::complex<double> jw(0.0, omega);
  const std::complex<double> diffusion = p.r_d / (1.0 + p.r_d * p.q_d * std::pow(jw, p.alpha_d));
  const std::complex<double> admittance = p.q_dl * std::pow(jw, p.alpha_dl) + 1.0 / (p.r_ct + diffusion);
  return p.r_s + 1.0 / admittance;
}

std::vector<double> electrode_frequencies(int count) {
  if (count < 1) throw std::invalid_argument("electrode_frequencies: count must be >= 1");
  std::vector<double> f(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double e = count == 1 ? 0.0 : 9.0 * static_cast<double>(i) / static_cast<double>(count - 1);
    f[static_cast<std::size_t>(i)] = std::pow(10.0, e);
  }
  return f;
}

std::vector<double> electrode_qoi_vector(const ElectrodeParams& p,
                                         std::span<const double> frequencies_hz) {
  const std::size_t n = frequencies_hz.size();
  std::vector<double> out(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> z = electrode_impedance(p, 2.0 * std::numbers::pi * frequencies_hz[i]);
    out[i] = z.real();
    out[n + i] = z.imag();
  }
  return out;
}

namespace {

// Wraps a scalar function of one point into a batch evaluator.
Evaluator rowwise(double (*f)(std::span<const double>)) {
  return [f](const Eigen::MatrixXd& points) {
    Eigen::MatrixXd out(points.rows(), 1);
    std::vector<double> row(static_cast<std::size_t>(points.cols()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      for (Eigen::Index k = 0; k < points.cols(); ++k) row[static_cast<std::size_t>(k)] = points(i, k);
      out(i, 0) = f(row);
    }
    return out;
  };
}

double ishigami_default(std::span<const double> x) { return ishigami(x); }

InputSpec cube(int d, double lo, double hi) {
  return InputSpec(std::vector<double>(static_cast<std::size_t>(d), lo),
                   std::vector<double>(static_cast<std::size_t>(d), hi));
}

}  // namespace

TestProblem make_problem(std::string_view name, int frequencies) {
  TestProblem p;
  p.name = std::string(name);
  if (name == "ishigami") {
    p.spec = InputSpec({-std::numbers::pi, -std::numbers::pi}, {std::numbers::pi, std::numbers::pi},
                       {"x1", "x2"});
    p.order = 12;
    p.interaction = 2;
    p.evaluate = rowwise(ishigami_default);
    // E = a/2, Var = (1 + b)^2 / 2 + a^2 / 8 for x3 = 1.
    const double a = 7.0, b = 0.1;
    Moments m;
    m.mean = Eigen::VectorXd::Constant(1, a / 2.0);
    m.std = Eigen::VectorXd::Constant(1, std::sqrt((1.0 + b) * (1.0 + b) / 2.0 + a * a / 8.0));
    p.exact_moments = m;
  } else if (name == "rosenbrock6") {
    p.spec = cube(6, -1.0, 1.0);
    p.order = 5;
    p.interaction = 2;
    p.evaluate = rowwise(rosenbrock);
  } else if (name == "lpp30") {
    p.spec = cube(30, -1.0, 1.0);
    p.order = 2;
    p.interaction = 2;
    p.evaluate = rowwise(lpp);
    Moments m;
    m.mean = Eigen::VectorXd::Zero(1);
    m.std = Eigen::VectorXd::Constant(1, std::sqrt(29.0) / 3.0);  // 29 products of variance 1/9
    p.exact_moments = m;
  } else if (name == "electrode") {
    const auto& lo = electrode_lower();
    const auto& hi = electrode_upper();
    p.spec = InputSpec(std::vector<double>(lo.begin(), lo.end()), std::vector<double>(hi.begin(), hi.end()),
                       {"R_s", "R_ct", "R_d", "Q_d", "alpha_d", "Q_dl", "alpha_dl"});
    p.order = 5;
    p.interaction = 3;
    std::vector<double> f = electrode_frequencies(frequencies);
    p.outputs = 2 * static_cast<Eigen::Index>(f.size());
    p.evaluate = [f](const Eigen::MatrixXd& points) {
      Eigen::MatrixXd out(points.rows(), 2 * static_cast<Eigen::Index>(f.size()));
      const auto rows = static_cast<long>(points.rows());
#pragma omp parallel for schedule(static) if (rows > 256 && !omp_in_parallel())
      for (long i = 0; i < rows; ++i) {
        double x[7];
        for (int k = 0; k < 7; ++k) x[k] = points(i, k);
        std::vector<double> q = electrode_qoi_vector(ElectrodeParams::from(x), f);
        for (std::size_t j = 0; j < q.size(); ++j) out(i, static_cast<Eigen::Index>(j)) = q[j];
      }
      return out;
    };
  } else {
    throw std::invalid_argument("unknown problem '" + std::string(name) +
                                "' (expected ishigami, rosenbrock6, lpp30 or electrode)");
  }
  return p;
}

std::vector<std::string> problem_names() { return {"ishigami", "rosenbrock6", "lpp30", "electrode"}; }

}  // namespace gpce
