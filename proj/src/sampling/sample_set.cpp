#include "gpce/sampling.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>
#include <string>

namespace gpce {

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 10> kSchemeNames{{
    {Scheme::Random, "random"},
    {Scheme::LhsStandard, "lhs-std"},
    {Scheme::LhsMaximin, "lhs-mm"},
    {Scheme::LhsPhiP, "lhs-phip"},
    {Scheme::LhsScEse, "lhs-sc-ese"},
    {Scheme::CoherenceOptimal, "co"},
    {Scheme::GreedyMc, "greedy-mc"},
    {Scheme::GreedyMcCc, "greedy-mc-cc"},
    {Scheme::GreedyD, "greedy-d"},
    {Scheme::GreedyDCoh, "greedy-d-coh"},
}};

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  for (auto [s, name] : kSchemeNames)
    if (s == scheme) return name;
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  std::string key;
  for (char c : name) key.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(c)));
  for (auto [s, n] : kSchemeNames)
    if (n == key) return s;
  return std::nullopt;
}

bool is_lhs(Scheme scheme) {
  return scheme == Scheme::LhsStandard || scheme == Scheme::LhsMaximin ||
         scheme == Scheme::LhsPhiP || scheme == Scheme::LhsScEse;
}

bool is_greedy(Scheme scheme) {
  return scheme == Scheme::GreedyMc || scheme == Scheme::GreedyMcCc ||
         scheme == Scheme::GreedyD || scheme == Scheme::GreedyDCoh;
}

bool needs_basis(Scheme scheme) { return scheme == Scheme::CoherenceOptimal || is_greedy(scheme); }

bool SampleSet::is_weighted() const {
  return weights.size() > 0 && (weights.array() != 1.0).any();
}

SampleSet SampleSet::prefix(Eigen::Index n) const {
  if (n < 0 || n > size()) throw std::out_of_range("SampleSet::prefix: size out of range");
  SampleSet out;
  out.points = points.topRows(n);
  out.weights = weights.head(n);
  out.scheme = scheme;
  out.seed = seed;
  out.acceptance_rate = acceptance_rate;
  if (!order.empty()) out.order.assign(order.begin(), order.begin() + n);
  return out;
}

}  // namespace gpce
