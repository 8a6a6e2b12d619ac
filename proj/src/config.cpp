#include "gpce/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gpce {

// Defined in the generated presets source.
const std::map<std::string, std::string>& bundled_presets();

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"problem", {"name", "frequencies"}},
      {"study", {"schemes", "repetitions", "thresholds", "n_test", "reference_samples", "baseline"}},
      {"grid", {"start", "stop", "step", "values"}},
      {"solver", {"name", "selection", "folds", "knots", "tolerance", "seed"}},
      {"seeds", {"master"}},
      {"sampling",
       {"greedy_pool_factor", "lhs_pool_size", "phi_p", "distance", "sc_alpha", "ese_outer",
        "ese_inner", "burn_in", "thinning", "proposal"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& field, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(field + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& field, const std::string& v) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(field + ": expected an integer, got '" + v + "'");
  }
}

std::uint64_t to_seed(const std::string& field, const std::string& v) {
  try {
    std::size_t used = 0;
    unsigned long long x = std::stoull(v, &used, 0);
    if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(field + ": expected a non-negative integer, got '" + v + "'");
  }
}

Selection parse_selection(const std::string& v) {
  if (v == "cv" || v == "cross-validation") return Selection::CrossValidation;
  if (v == "path-end" || v == "end") return Selection::PathEnd;
  if (v == "knots") return Selection::FixedKnots;
  if (v == "residual") return Selection::ResidualTolerance;
  throw ConfigError("solver.selection: unknown rule '" + v + "' (cv, path-end, knots, residual)");
}

std::string selection_name(Selection s) {
  switch (s) {
    case Selection::CrossValidation: return "cv";
    case Selection::PathEnd: return "path-end";
    case Selection::FixedKnots: return "knots";
    case Selection::ResidualTolerance: return "residual";
  }
  return "cv";
}

}  // namespace

StudyConfig parse_study_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  std::map<std::string, std::string> values;
  for (const auto& [section, body] : tree) {
    auto keys = known_keys().find(section);
    if (keys == known_keys().end()) {
      if (body.empty()) throw ConfigError("config: key '" + section + "' outside any section");
      throw ConfigError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!keys->second.count(key)) throw ConfigError(section + "." + key + ": unknown key");
      values[section + "." + key] = trim(value.get_value<std::string>());
    }
  }
  auto get = [&](const std::string& field) -> const std::string* {
    auto it = values.find(field);
    return it == values.end() ? nullptr : &it->second;
  };

  StudyConfig c;
  if (auto v = get("problem.name")) c.problem = *v;
  if (auto v = get("problem.frequencies")) c.frequencies = static_cast<int>(to_int("problem.frequencies", *v));

  if (auto v = get("solver.name")) {
    if (*v == "l1" || *v == "lars") c.solver.kind = SolverKind::Lars;
    else if (*v == "l2" || *v == "ls") c.solver.kind = SolverKind::LeastSquares;
    else throw ConfigError("solver.name: unknown solver '" + *v + "' (l1, l2)");
  }
  if (auto v = get("solver.selection")) c.solver.rule.kind = parse_selection(*v);
  if (auto v = get("solver.folds")) c.solver.rule.folds = static_cast<int>(to_int("solver.folds", *v));
  if (auto v = get("solver.knots")) c.solver.rule.knots = static_cast<int>(to_int("solver.knots", *v));
  if (auto v = get("solver.tolerance")) c.solver.rule.tolerance = to_double("solver.tolerance", *v);
  if (auto v = get("solver.seed")) c.solver.rule.seed = to_seed("solver.seed", *v);

  if (auto v = get("study.schemes")) {
    for (const auto& item : split_list(*v)) {
      try {
        c.schemes.push_back(parse_scheme_spec(item, c.solver));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("study.schemes: ") + e.what());
      }
    }
  }
  if (auto v = get("study.repetitions")) c.repetitions = static_cast<int>(to_int("study.repetitions", *v));
  if (auto v = get("study.thresholds")) {
    c.thresholds.clear();
    for (const auto& item : split_list(*v)) c.thresholds.push_back(to_double("study.thresholds", item));
  }
  if (auto v = get("study.n_test")) c.n_test = to_int("study.n_test", *v);
  if (auto v = get("study.reference_samples"))
    c.reference_samples = to_int("study.reference_samples", *v);
  if (auto v = get("study.baseline")) c.baseline = *v;

  if (auto v = get("grid.values")) {
    if (get("grid.start") || get("grid.stop") || get("grid.step"))
      throw ConfigError("grid.values: cannot be combined with start/stop/step");
    for (const auto& item : split_list(*v)) c.grid.push_back(to_int("grid.values", item));
  } else if (get("grid.start") || get("grid.stop")) {
    if (!get("grid.start") || !get("grid.stop"))
      throw ConfigError("grid: start and stop must both be given");
    long long start = to_int("grid.start", *get("grid.start"));
    long long stop = to_int("grid.stop", *get("grid.stop"));
    long long step = get("grid.step") ? to_int("grid.step", *get("grid.step")) : 1;
    if (step < 1) throw ConfigError("grid.step: must be >= 1");
    for (long long n = start; n <= stop; n += step) c.grid.push_back(n);
  }

  if (auto v = get("seeds.master")) c.master_seed = to_seed("seeds.master", *v);

  if (auto v = get("sampling.greedy_pool_factor"))
    c.greedy_pool_factor = static_cast<int>(to_int("sampling.greedy_pool_factor", *v));
  if (auto v = get("sampling.lhs_pool_size"))
    c.lhs_pool.n_pool = static_cast<int>(to_int("sampling.lhs_pool_size", *v));
  if (auto v = get("sampling.phi_p")) c.lhs_pool.p_exp = c.ese.p_exp = to_double("sampling.phi_p", *v);
  if (auto v = get("sampling.distance")) {
    if (*v == "euclidean") c.lhs_pool.metric = c.ese.metric = DistanceMetric::Euclidean;
    else if (*v == "periodic") c.lhs_pool.metric = c.ese.metric = DistanceMetric::Periodic;
    else throw ConfigError("sampling.distance: expected euclidean or periodic, got '" + *v + "'");
  }
  if (auto v = get("sampling.sc_alpha")) c.sc_alpha = to_double("sampling.sc_alpha", *v);
  if (auto v = get("sampling.ese_outer")) c.ese.outer_iterations = static_cast<int>(to_int("sampling.ese_outer", *v));
  if (auto v = get("sampling.ese_inner")) c.ese.inner_iterations = static_cast<int>(to_int("sampling.ese_inner", *v));
  if (auto v = get("sampling.burn_in")) c.chain.burn_in = static_cast<int>(to_int("sampling.burn_in", *v));
  if (auto v = get("sampling.thinning")) c.chain.thinning = static_cast<int>(to_int("sampling.thinning", *v));
  if (auto v = get("sampling.proposal")) {
    if (*v == "auto") c.chain.proposal = Proposal::Auto;
    else if (*v == "uniform") c.chain.proposal = Proposal::Uniform;
    else if (*v == "arcsine") c.chain.proposal = Proposal::Arcsine;
    else throw ConfigError("sampling.proposal: expected auto, uniform or arcsine, got '" + *v + "'");
  }

  bool known_problem = false;
  for (const auto& name : problem_names()) known_problem |= name == c.problem;
  if (!known_problem) throw ConfigError("problem.name: unknown problem '" + c.problem + "'");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

StudyConfig load_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_study_config(buf.str());
}

std::string preset_text(std::string_view name) {
  auto it = bundled_presets().find(std::string(name));
  if (it == bundled_presets().end()) throw ConfigError("unknown preset '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : bundled_presets()) out.push_back(name);
  return out;
}

std::string render_study_config(const StudyConfig& c) {
  std::ostringstream out;
  out << "[problem]\nname = " << c.problem << "\n";
  if (c.problem == "electrode") out << "frequencies = " << c.frequencies << "\n";
  out << "\n[study]\nschemes = ";
  for (std::size_t i = 0; i < c.schemes.size(); ++i) out << (i ? ", " : "") << c.schemes[i].label;
  out << "\nrepetitions = " << c.repetitions << "\nthresholds = ";
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) out << (i ? ", " : "") << format_value(c.thresholds[i]);
  out << "\nn_test = " << c.n_test << "\nreference_samples = " << c.reference_samples
      << "\nbaseline = " << c.baseline << "\n\n[grid]\nvalues = ";
  for (std::size_t i = 0; i < c.grid.size(); ++i) out << (i ? ", " : "") << c.grid[i];
  out << "\n\n[solver]\nname = " << solver_name(c.solver.kind)
      << "\nselection = " << selection_name(c.solver.rule.kind) << "\nfolds = " << c.solver.rule.folds
      << "\nknots = " << c.solver.rule.knots << "\ntolerance = " << format_value(c.solver.rule.tolerance)
      << "\nseed = " << c.solver.rule.seed << "\n\n[seeds]\nmaster = " << c.master_seed
      << "\n\n[sampling]\ngreedy_pool_factor = " << c.greedy_pool_factor
      << "\nlhs_pool_size = " << c.lhs_pool.n_pool << "\nphi_p = " << format_value(c.lhs_pool.p_exp)
      << "\ndistance = " << (c.ese.metric == DistanceMetric::Periodic ? "periodic" : "euclidean")
      << "\nsc_alpha = " << format_value(c.sc_alpha) << "\nese_outer = " << c.ese.outer_iterations
      << "\nese_inner = " << c.ese.inner_iterations << "\nburn_in = " << c.chain.burn_in
      << "\nthinning = " << c.chain.thinning << "\nproposal = "
      << (c.chain.proposal == Proposal::Auto ? "auto"
          : c.chain.proposal == Proposal::Uniform ? "uniform" : "arcsine")
      << "\n";
  return out.str();
}

}  // namespace gpce
