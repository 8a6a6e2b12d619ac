#include "gpce/bench.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace gpce {

std::string format_value(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_value(const std::optional<double>& v) { return v ? format_value(*v) : "-"; }

void write_records_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records) {
  out << "scheme,rep,n,nrmsd,mu,mean_err,std_err\n";
  for (const auto& r : records)
    out << r.scheme << ',' << r.rep << ',' << r.n << ',' << format_value(r.nrmsd) << ','
        << format_value(r.mu) << ',' << format_value(r.mean_err) << ',' << format_value(r.std_err)
        << '\n';
}

void write_summary_csv(std::ostream& out, const Summary& summary) {
  out << "threshold,grid,n_eps_median,n_eps_std,n_sr95,n_sr99,p_value,rel_n_eps,rel_n_sr95,"
         "rel_n_sr99,recross\n";
  for (const auto& r : summary.rows)
    out << format_value(r.threshold) << ',' << r.scheme << ',' << format_value(r.n_eps_median)
        << ',' << format_value(r.n_eps_std) << ',' << format_value(r.n_sr95) << ','
        << format_value(r.n_sr99) << ',' << format_value(r.p_value) << ','
        << format_value(r.rel_n_eps) << ',' << format_value(r.rel_n_sr95) << ','
        << format_value(r.rel_n_sr99) << ',' << r.recross << '\n';
}

void write_success_rates_csv(std::ostream& out, const Summary& summary) {
  out << "scheme,threshold,n,rate\n";
  for (const auto& r : summary.rates)
    out << r.scheme << ',' << format_value(r.threshold) << ',' << r.n << ',' << format_value(r.rate)
        << '\n';
}

}  // namespace gpce
