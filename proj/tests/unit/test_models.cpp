#include "gpce/models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gpce;

TEST(Ishigami, Examples) {
  using std::numbers::pi;
  EXPECT_NEAR(ishigami(std::vector<double>{0.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(ishigami(std::vector<double>{pi / 2, pi / 2}), 8.1, 1e-12);
  EXPECT_NEAR(ishigami(std::vector<double>{-pi / 2, 0.0}), -1.1, 1e-12);
}

TEST(Rosenbrock, Examples) {
  EXPECT_DOUBLE_EQ(rosenbrock(std::vector<double>(6, 1.0)), 0.0);
  EXPECT_DOUBLE_EQ(rosenbrock(std::vector<double>(3, 1.0)), 0.0);
  EXPECT_DOUBLE_EQ(rosenbrock(std::vector<double>(6, 0.0)), 5.0);
  EXPECT_DOUBLE_EQ(rosenbrock(std::vector<double>{1.0, 2.0}), 100.0);
  EXPECT_THROW(rosenbrock(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Lpp, Examples) {
  EXPECT_DOUBLE_EQ(lpp(std::vector<double>(30, 0.0)), 0.0);
  EXPECT_DOUBLE_EQ(lpp(std::vector<double>(30, 1.0)), 29.0);
  EXPECT_DOUBLE_EQ(lpp(std::vector<double>{1.0, 2.0, 3.0}), 8.0);
  EXPECT_THROW(lpp(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Electrode, HighFrequencyLimit) {
  auto p = ElectrodeParams::mean();
  auto z = electrode_impedance(p, 1e20);
  EXPECT_NEAR(z.real(), p.r_s, 1e-3 * p.r_s);
  EXPECT_NEAR(z.imag(), 0.0, 1.0);
}

TEST(Electrode, LowFrequencyLimit) {
  auto z = electrode_impedance(ElectrodeParams::mean(), 1e-9);
  EXPECT_NEAR(z.real(), 130.5e3, 1e-3 * 130.5e3);
  EXPECT_LT(std::abs(z.imag()), 1e-2 * 130.5e3);
}

TEST(Electrode, OneHertzIsBelowTheDcLimit) {
  // At 1 Hz the double-layer admittance Q_dl w^a_dl (about 2e-6 S) is already
  // a quarter of 1 / (R_ct + R_d), so Re Z sits well under 130.5 kOhm.
  auto f = electrode_frequencies(kElectrodeReducedFrequencies);
  auto q = electrode_qoi_vector(ElectrodeParams::mean(), f);
  EXPECT_LT(q[0], 130.5e3);
  EXPECT_GT(q[0], 100e3);
}

TEST(Electrode, FrequencyGrid) {
  auto f = electrode_frequencies(kElectrodeFullFrequencies);
  ASSERT_EQ(f.size(), 1000u);
  EXPECT_DOUBLE_EQ(f.front(), 1.0);
  EXPECT_NEAR(f.back(), 1e9, 1e-3);
  for (std::size_t i = 1; i < f.size(); ++i)
    EXPECT_NEAR(std::log10(f[i] / f[i - 1]), 9.0 / 999.0, 1e-12);
  auto q = electrode_qoi_vector(ElectrodeParams::mean(), f);
  EXPECT_EQ(q.size(), 2000u);
}

TEST(Electrode, MeansInsideBounds) {
  auto m = ElectrodeParams::mean();
  double v[7] = {m.r_s, m.r_ct, m.r_d, m.q_d, m.alpha_d, m.q_dl, m.alpha_dl};
  for (int k = 0; k < 7; ++k) {
    EXPECT_GE(v[k], electrode_lower()[static_cast<std::size_t>(k)]);
    EXPECT_LE(v[k], electrode_upper()[static_cast<std::size_t>(k)]);
  }
}

TEST(Problems, Registry) {
  auto ish = make_problem("ishigami");
  EXPECT_EQ(ish.basis().size(), 91u);
  EXPECT_EQ(make_problem("rosenbrock6").basis().size(), 181u);
  EXPECT_EQ(make_problem("lpp30").basis().size(), 496u);
  auto el = make_problem("electrode");
  EXPECT_EQ(el.basis().size(), 596u);
  EXPECT_EQ(el.outputs, 128);
  EXPECT_EQ(make_problem("electrode", kElectrodeFullFrequencies).outputs, 2000);
  EXPECT_THROW(make_problem("branin"), std::invalid_argument);

  Eigen::MatrixXd x(2, 2);
  x << 0.0, 0.0, std::numbers::pi / 2, std::numbers::pi / 2;
  Eigen::MatrixXd y = ish.evaluate(x);
  EXPECT_NEAR(y(1, 0), 8.1, 1e-12);
  ASSERT_TRUE(ish.exact_moments.has_value());
  EXPECT_NEAR(ish.exact_moments->mean[0], 3.5, 1e-15);
  EXPECT_NEAR(ish.exact_moments->std[0], std::sqrt(6.73), 1e-12);

  Eigen::MatrixXd pts = Eigen::MatrixXd::Constant(300, 7, 0.0);
  for (int k = 0; k < 7; ++k) pts.col(k).setConstant(electrode_lower()[static_cast<std::size_t>(k)]);
  Eigen::MatrixXd out = el.evaluate(pts);
  EXPECT_EQ(out.rows(), 300);
  EXPECT_TRUE(out.allFinite());
}
