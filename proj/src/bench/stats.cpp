#include "gpce/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace gpce {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Average ranks (1-based) of the pooled values; +inf values tie at the top.
std::vector<double> midranks(const std::vector<double>& pooled) {
  std::vector<std::size_t> idx(pooled.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pooled[a] < pooled[b]; });
  std::vector<double> ranks(pooled.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && pooled[idx[j]] == pooled[idx[i]]) ++j;
    double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = r;
    i = j;
  }
  return ranks;
}

void check_groups(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney: both samples must be non-empty");
  for (double v : a)
    if (std::isnan(v)) throw std::invalid_argument("mann_whitney: NaN in sample");
  for (double v : b)
    if (std::isnan(v)) throw std::invalid_argument("mann_whitney: NaN in sample");
}

double u_statistic(const std::vector<double>& ranks, std::size_t na) {
  double sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(na), 0.0);
  return sum - 0.5 * static_cast<double>(na) * static_cast<double>(na + 1);
}

std::optional<double> median_of(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  double m = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  if (!std::isfinite(m)) return std::nullopt;
  return m;
}

std::optional<double> ratio(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b || *b == 0.0) return std::nullopt;
  return *a / *b;
}

}  // namespace

Crossing error_crossing(const std::vector<Eigen::Index>& ns, const std::vector<double>& eps,
                        double threshold) {
  if (ns.size() != eps.size()) throw std::invalid_argument("error_crossing: length mismatch");
  Crossing out;
  const double floor = std::numeric_limits<double>::min();
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (std::isnan(eps[i])) continue;
    if (out.n) {
      if (eps[i] > threshold) out.recross = true;
      continue;
    }
    if (eps[i] <= threshold) {
      if (!prev) {
        out.n = static_cast<double>(ns[i]);
      } else {
        const double l0 = std::log10(std::max(eps[*prev], floor));
        const double l1 = std::log10(std::max(eps[i], floor));
        const double t = (std::log10(threshold) - l0) / (l1 - l0);
        const auto n0 = static_cast<double>(ns[*prev]);
        out.n = n0 + t * (static_cast<double>(ns[i]) - n0);
      }
    }
    prev = i;
  }
  return out;
}

std::vector<RatePoint> success_rate_curve(const std::vector<Eigen::Index>& ns,
                                          const std::vector<std::vector<double>>& curves,
                                          double threshold) {
  if (curves.empty()) throw std::invalid_argument("success_rate_curve: no repetitions");
  std::vector<RatePoint> out;
  for (std::size_t g = 0; g < ns.size(); ++g) {
    std::size_t hits = 0;
    for (const auto& c : curves) {
      if (c.size() != ns.size()) throw std::invalid_argument("success_rate_curve: ragged curves");
      if (c[g] <= threshold) ++hits;  // NaN compares false
    }
    out.push_back({ns[g], static_cast<double>(hits) / static_cast<double>(curves.size())});
  }
  return out;
}

std::optional<double> n_for_rate(const std::vector<RatePoint>& curve, double q) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].rate < q) continue;
    if (i == 0) return static_cast<double>(curve[0].n);
    const RatePoint& a = curve[i - 1];
    const RatePoint& b = curve[i];
    const double t = (q - a.rate) / (b.rate - a.rate);
    return static_cast<double>(a.n) + t * static_cast<double>(b.n - a.n);
  }
  return std::nullopt;
}

double mann_whitney_exact(const std::vector<double>& a, const std::vector<double>& b) {
  check_groups(a, b);
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = midranks(pooled);
  const std::size_t n = pooled.size();
  const std::size_t na = a.size();
  if (n > 30) throw std::invalid_argument("mann_whitney_exact: groups too large to enumerate");
  const double observed = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(na), 0.0);
  // Enumerate every subset of size na via Gosper's hack.
  std::uint64_t total = 0;
  std::uint64_t hits = 0;
  std::uint64_t set = (std::uint64_t{1} << na) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (set < limit) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (set & (std::uint64_t{1} << i)) sum += ranks[i];
    ++total;
    if (sum <= observed + 1e-9) ++hits;
    const std::uint64_t c = set & (~set + 1);
    const std::uint64_t r = set + c;
    set = (((r ^ set) >> 2) / c) | r;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

double mann_whitney_normal(const std::vector<double>& a, const std::vector<double>& b) {
  check_groups(a, b);
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = midranks(pooled);
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  const double n = na + nb;
  const double u = u_statistic(ranks, a.size());

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  const double var = na * nb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
  if (!(var > 0.0)) return 1.0;
  const double z = (u - na * nb / 2.0 + 0.5) / std::sqrt(var);
  return std::clamp(0.5 * std::erfc(-z / std::sqrt(2.0)), 0.0, 1.0);
}

double mann_whitney_u_one_tailed(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() <= 8 && b.size() <= 8) return mann_whitney_exact(a, b);
  return mann_whitney_normal(a, b);
}

Summary summarize(const std::vector<ConvergenceRecord>& records,
                  const std::vector<double>& thresholds, const std::string& baseline) {
  // arm -> rep -> (n -> nrmsd); ordered containers make the result independent of record order.
  std::vector<std::string> arms;
  std::map<std::string, std::map<int, std::map<Eigen::Index, double>>> data;
  for (const auto& r : records) {
    if (!data.count(r.scheme)) arms.push_back(r.scheme);
    data[r.scheme][r.rep][r.n] = r.nrmsd;
  }
  std::sort(arms.begin(), arms.end(), [&](const std::string& x, const std::string& y) {
    if (x == baseline || y == baseline) return x == baseline && y != baseline;
    return x < y;
  });
  if (!data.count(baseline))
    throw std::invalid_argument("summarize: baseline scheme '" + baseline + "' has no records");

  Summary out;
  for (double thr : thresholds) {
    std::map<std::string, SummaryRow> rows;
    for (const auto& arm : arms) {
      const auto& reps = data.at(arm);
      std::vector<Eigen::Index> ns;
      for (const auto& [rep, curve] : reps)
        for (const auto& [n, e] : curve)
          if (std::find(ns.begin(), ns.end(), n) == ns.end()) ns.push_back(n);
      std::sort(ns.begin(), ns.end());

      SummaryRow row;
      row.scheme = arm;
      row.threshold = thr;
      std::vector<std::vector<double>> curves;
      std::vector<double> ranked;
      std::vector<double> defined;
      for (const auto& [rep, curve] : reps) {
        std::vector<double> eps;
        for (Eigen::Index n : ns) {
          auto it = curve.find(n);
          eps.push_back(it == curve.end() ? std::numeric_limits<double>::quiet_NaN() : it->second);
        }
        Crossing c = error_crossing(ns, eps, thr);
        row.crossings.push_back(c.n);
        if (c.recross) ++row.recross;
        ranked.push_back(c.n ? *c.n : kInf);
        if (c.n) defined.push_back(*c.n);
        curves.push_back(std::move(eps));
      }
      row.n_eps_median = median_of(ranked);
      if (defined.size() >= 2) {
        double mean = std::accumulate(defined.begin(), defined.end(), 0.0) / static_cast<double>(defined.size());
        double ss = 0.0;
        for (double v : defined) ss += (v - mean) * (v - mean);
        row.n_eps_std = std::sqrt(ss / static_cast<double>(defined.size() - 1));
      }
      std::vector<RatePoint> rates = success_rate_curve(ns, curves, thr);
      row.n_sr95 = n_for_rate(rates, 0.95);
      row.n_sr99 = n_for_rate(rates, 0.99);
      for (const auto& p : rates) out.rates.push_back({arm, thr, p.n, p.rate});
      rows[arm] = std::move(row);
    }
    const SummaryRow& base = rows.at(baseline);
    std::vector<double> base_ranked;
    for (const auto& c : base.crossings) base_ranked.push_back(c ? *c : kInf);
    for (const auto& arm : arms) {
      SummaryRow& row = rows.at(arm);
      if (arm != baseline) {
        std::vector<double> mine;
        for (const auto& c : row.crossings) mine.push_back(c ? *c : kInf);
        row.p_value = mann_whitney_u_one_tailed(mine, base_ranked);
      }
      row.rel_n_eps = ratio(row.n_eps_median, base.n_eps_median);
      row.rel_n_sr95 = ratio(row.n_sr95, base.n_sr95);
      row.rel_n_sr99 = ratio(row.n_sr99, base.n_sr99);
      out.rows.push_back(row);
    }
  }
  return out;
}

}  // namespace gpce
