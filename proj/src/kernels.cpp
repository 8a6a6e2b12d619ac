#include "gpce/kernels.hpp"

#include "gpce/basis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

#include <omp.h>

namespace gpce::kernels {

namespace {

std::atomic<Backend> g_backend{Backend::OpenMP};

// Per-item bodies shared by both backends.

void assemble_row(const Eigen::MatrixXd& unit_points, const MultiIndexSet& basis,
                  double scale, Eigen::Index i, std::vector<double>& table,
                  Eigen::MatrixXd& out) {
  const int d = basis.dim();
  const int stride = basis.max_degree() + 1;
  for (int k = 0; k < d; ++k) {
    double xi = 2.0 * unit_points(i, k) - 1.0;
    legendre_table(basis.max_degree(), xi,
                   std::span<double>(table).subspan(static_cast<std::size_t>(k) * stride, stride));
  }
  for (std::size_t j = 0; j < basis.size(); ++j) {
    double v = scale;
    for (auto [dim, deg] : basis.sparse_term(j)) v *= table[dim * stride + deg];
    out(i, static_cast<Eigen::Index>(j)) = v;
  }
}

struct CoherenceScratch {
  Eigen::VectorXd row;
  Eigen::VectorXd diag;
  Eigen::VectorXd inv_norm;
};

void coherence_item(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& pool,
                    Eigen::Index candidate, double rows_after, bool want_mu,
                    bool want_gamma, CoherenceScratch& s, double& mu_out,
                    double& gamma_out) {
  const Eigen::Index n = gram.rows();
  s.row = pool.row(candidate).transpose();
  const double* r = s.row.data();
  s.diag.resize(n);
  s.inv_norm.resize(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    double g = gram(a, a) + r[a] * r[a];
    s.diag[a] = g;
    s.inv_norm[a] = g > 0.0 ? 1.0 / std::sqrt(g) : 0.0;
  }
  const double* inv = s.inv_norm.data();
  double mu = 0.0;
  double off = 0.0;
  for (Eigen::Index b = 1; b < n; ++b) {
    const double* g = gram.col(b).data();
    const double rb = r[b];
    const double ib = inv[b];
    double col_max = 0.0;
    double col_sum = 0.0;
    for (Eigen::Index a = 0; a < b; ++a) {
      double v = g[a] + r[a] * rb;
      col_sum += v * v;
      double c = std::abs(v) * inv[a];
      col_max = c > col_max ? c : col_max;
    }
    off += col_sum;
    mu = std::max(mu, col_max * ib);
  }
  mu_out = want_mu ? mu : 0.0;
  if (want_gamma) {
    const double inv_rows = 1.0 / rows_after;
    double diag_term = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
      double e = 1.0 - s.diag[a] * inv_rows;
      diag_term += e * e;
    }
    double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    gamma_out = (diag_term + 2.0 * off * inv_rows * inv_rows) / pairs;
  } else {
    gamma_out = 0.0;
  }
}

double projection_item(const Eigen::MatrixXd& basis_rows, const Eigen::MatrixXd& pool,
                       Eigen::Index candidate) {
  Eigen::VectorXd r = pool.row(candidate).transpose();
  double total = r.squaredNorm();
  if (basis_rows.rows() == 0) return total;
  Eigen::VectorXd coeff = basis_rows * r;
  return std::max(0.0, total - coeff.squaredNorm());
}

double leverage_item(const Eigen::MatrixXd& gram_inverse, const Eigen::MatrixXd& pool,
                     Eigen::Index candidate) {
  Eigen::VectorXd r = pool.row(candidate).transpose();
  return r.dot(gram_inverse.selfadjointView<Eigen::Lower>() * r);
}

double distance_item(const Eigen::MatrixXd& points, Eigen::Index i, Eigen::Index j, double t,
                     bool periodic) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < points.cols(); ++k) {
    double delta = std::abs(points(i, k) - points(j, k));
    if (periodic) delta = std::min(delta, 1.0 - delta);
    acc += t == 2.0 ? delta * delta : std::pow(delta, t);
  }
  return t == 2.0 ? std::sqrt(acc) : std::pow(acc, 1.0 / t);
}

}  // namespace

Backend default_backend() { return g_backend.load(); }
void set_default_backend(Backend backend) { g_backend.store(backend); }

void assemble(const Eigen::MatrixXd& unit_points, const MultiIndexSet& basis,
              std::span<const double> row_scale, Eigen::MatrixXd& out, Backend backend) {
  const Eigen::Index m = unit_points.rows();
  out.resize(m, static_cast<Eigen::Index>(basis.size()));
  const std::size_t table_size =
      static_cast<std::size_t>(basis.dim()) * (basis.max_degree() + 1);
  auto scale_of = [&](Eigen::Index i) {
    return row_scale.empty() ? 1.0 : row_scale[static_cast<std::size_t>(i)];
  };
  if (backend == Backend::Serial) {
    std::vector<double> table(table_size);
    for (Eigen::Index i = 0; i < m; ++i)
      assemble_row(unit_points, basis, scale_of(i), i, table, out);
    return;
  }
#pragma omp parallel if (m > 64 && !omp_in_parallel())
  {
    std::vector<double> table(table_size);
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i)
      assemble_row(unit_points, basis, scale_of(i), i, table, out);
  }
}

void score_coherence(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& pool,
                     std::span<const Eigen::Index> candidates, double rows_after,
                     std::span<double> mu, std::span<double> gamma, Backend backend) {
  const auto count = static_cast<std::ptrdiff_t>(candidates.size());
  const bool want_mu = !mu.empty();
  const bool want_gamma = !gamma.empty();
  auto body = [&](std::ptrdiff_t k, CoherenceScratch& s) {
    double m = 0.0;
    double g = 0.0;
    coherence_item(gram, pool, candidates[k], rows_after, want_mu, want_gamma, s, m, g);
    if (want_mu) mu[k] = m;
    if (want_gamma) gamma[k] = g;
  };
  if (backend == Backend::Serial) {
    CoherenceScratch s;
    for (std::ptrdiff_t k = 0; k < count; ++k) body(k, s);
    return;
  }
#pragma omp parallel if (count > 8 && !omp_in_parallel())
  {
    CoherenceScratch s;
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) body(k, s);
  }
}

void score_projection_residual(const Eigen::MatrixXd& basis_rows, const Eigen::MatrixXd& pool,
                               std::span<const Eigen::Index> candidates,
                               std::span<double> out, Backend backend) {
  const auto count = static_cast<std::ptrdiff_t>(candidates.size());
  if (backend == Backend::Serial) {
    for (std::ptrdiff_t k = 0; k < count; ++k)
      out[k] = projection_item(basis_rows, pool, candidates[k]);
    return;
  }
#pragma omp parallel for schedule(static) if (count > 8 && !omp_in_parallel())
  for (std::ptrdiff_t k = 0; k < count; ++k)
    out[k] = projection_item(basis_rows, pool, candidates[k]);
}

void score_leverage(const Eigen::MatrixXd& gram_inverse, const Eigen::MatrixXd& pool,
                    std::span<const Eigen::Index> candidates, std::span<double> out,
                    Backend backend) {
  const auto count = static_cast<std::ptrdiff_t>(candidates.size());
  if (backend == Backend::Serial) {
    for (std::ptrdiff_t k = 0; k < count; ++k)
      out[k] = leverage_item(gram_inverse, pool, candidates[k]);
    return;
  }
#pragma omp parallel for schedule(static) if (count > 8 && !omp_in_parallel())
  for (std::ptrdiff_t k = 0; k < count; ++k)
    out[k] = leverage_item(gram_inverse, pool, candidates[k]);
}

void pairwise_distances(const Eigen::MatrixXd& points, double t, bool periodic,
                        Eigen::MatrixXd& out, Backend backend) {
  const Eigen::Index n = points.rows();
  out.setZero(n, n);
  if (backend == Backend::Serial) {
    for (Eigen::Index j = 1; j < n; ++j)
      for (Eigen::Index i = 0; i < j; ++i)
        out(i, j) = out(j, i) = distance_item(points, i, j, t, periodic);
    return;
  }
#pragma omp parallel for schedule(dynamic, 16) if (n > 64 && !omp_in_parallel())
  for (Eigen::Index j = 1; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      out(i, j) = out(j, i) = distance_item(points, i, j, t, periodic);
}

}  // namespace gpce::kernels
