// gpce: sampling, fitting and benchmark studies for polynomial chaos surrogates.
//
// Exit codes: 0 success, 1 bad arguments or configuration, 2 runtime failure.

#include "gpce/bench.hpp"
#include "gpce/config.hpp"
#include "gpce/models.hpp"
#include "gpce/rng.hpp"
#include "gpce/sampling.hpp"
#include "gpce/surrogate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#ifndef GPCE_VERSION
#define GPCE_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using namespace gpce;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

// Numeric CSV; a first line that does not parse as numbers is a header.
Eigen::MatrixXd read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;
      throw UsageError(path + ":" + std::to_string(line_no) + ": non-numeric value");
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw UsageError(path + ":" + std::to_string(line_no) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw UsageError(path + ": no points");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  return m;
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

SolverChoice parse_solver(const std::string& name) {
  SolverChoice s;
  if (name == "l1" || name == "lars") s.kind = SolverKind::Lars;
  else if (name == "l2" || name == "ls") s.kind = SolverKind::LeastSquares;
  else throw UsageError("--solver: expected l1 or l2, got '" + name + "'");
  return s;
}

Scheme parse_scheme_flag(const std::string& name) {
  auto s = parse_scheme(name);
  if (!s) throw UsageError("--scheme: unknown scheme '" + name + "'");
  return *s;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string config;
  std::string preset;
  std::string out = "results";
  std::optional<std::uint64_t> seed;
  int jobs = default_jobs();
  std::optional<int> repetitions;
  bool full_electrode = false;
};

int cmd_bench(const BenchArgs& a) {
  StudyConfig config;
  std::string source;
  try {
    if (a.config.empty() == a.preset.empty()) throw UsageError("bench: give exactly one of --config or --preset");
    std::string text = a.config.empty() ? preset_text(a.preset) : read_file(a.config);
    source = a.config.empty() ? "preset:" + a.preset : a.config;
    config = parse_study_config(text);
    if (a.seed) config.master_seed = *a.seed;
    if (a.repetitions) config.repetitions = *a.repetitions;
    if (a.full_electrode) config.frequencies = kElectrodeFullFrequencies;
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const fs::path dir(a.out);
  const fs::path records_path = dir / "records.csv";
  const fs::path summary_path = dir / "summary.csv";
  const fs::path rates_path = dir / "success_rates.csv";
  const fs::path manifest_path = dir / "manifest.json";
  nlohmann::json manifest;
  manifest["tool"] = "gpce";
  manifest["version"] = GPCE_VERSION;
  manifest["config_source"] = source;
  manifest["config"] = render_study_config(config);
  manifest["master_seed"] = config.master_seed;
  manifest["jobs"] = a.jobs;
  manifest["started"] = utc_now();

  std::vector<std::string> written;
  try {
    fs::create_directories(dir);
    StudyResult result = run_study(config, a.jobs);
    {
      std::ofstream out(records_path);
      write_records_csv(out, result.records);
      if (!out) throw std::runtime_error("write failed for " + records_path.string());
    }
    written.push_back(records_path.string());
    Summary summary = summarize(result.records, config.thresholds, config.baseline);
    {
      std::ofstream out(summary_path);
      write_summary_csv(out, summary);
    }
    written.push_back(summary_path.string());
    {
      std::ofstream out(rates_path);
      write_success_rates_csv(out, summary);
    }
    written.push_back(rates_path.string());
    manifest["seconds"] = result.seconds;
    manifest["status"] = "ok";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    manifest["outputs"] = written;
    try {
      write_text(manifest_path, manifest.dump(2) + "\n");
    } catch (const std::exception&) {
    }
    return 2;
  }
  written.push_back(manifest_path.string());
  manifest["finished"] = utc_now();
  manifest["outputs"] = written;
  write_text(manifest_path, manifest.dump(2) + "\n");
  std::cout << "wrote " << written.size() << " files to " << dir.string() << "\n";
  return 0;
}

// ---- sample ----------------------------------------------------------------

struct SampleArgs {
  std::string scheme;
  long m = 0;
  int d = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string problem;
  int order = -1;
  int interaction = -1;
  int pool_factor = 10;
};

int cmd_sample(const SampleArgs& a) {
  Scheme scheme;
  MultiIndexSet basis;
  InputSpec spec;
  std::optional<TestProblem> problem;
  try {
    scheme = parse_scheme_flag(a.scheme);
    if (a.m < 1) throw UsageError("-m: must be >= 1");
    int d = a.d;
    if (!a.problem.empty()) {
      problem = make_problem(a.problem);
      if (d != 0 && d != problem->spec.dim())
        throw UsageError("-d: problem '" + a.problem + "' has dimension " + std::to_string(problem->spec.dim()));
      d = problem->spec.dim();
      spec = problem->spec;
    }
    if (d < 1) throw UsageError("-d: dimension required (or --problem)");
    if (!problem) spec = InputSpec(std::vector<double>(static_cast<std::size_t>(d), 0.0),
                                   std::vector<double>(static_cast<std::size_t>(d), 1.0));
    if (needs_basis(scheme)) {
      int order = a.order >= 0 ? a.order : problem ? problem->order : -1;
      int inter = a.interaction >= 0 ? a.interaction : problem ? problem->interaction : -1;
      if (order < 0 || inter < 0)
        throw UsageError("scheme '" + a.scheme + "' needs a basis: give --problem or --order and --interaction");
      basis = MultiIndexSet::build(d, order, inter);
    } else {
      basis = MultiIndexSet::build(d, 0, 0);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    StudyConfig cfg;
    cfg.greedy_pool_factor = a.pool_factor;
    SampleSet s = generate_design(scheme, a.m, basis, spec, a.seed, cfg);
    Eigen::MatrixXd pts = problem ? to_physical(spec, s.points) : s.points;
    std::ostringstream out;
    for (int k = 0; k < s.dim(); ++k) out << (k ? "," : "") << spec.names()[static_cast<std::size_t>(k)];
    if (s.is_weighted()) out << ",weight";
    if (!s.order.empty()) out << ",order";
    out << "\n";
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      for (int k = 0; k < s.dim(); ++k) out << (k ? "," : "") << full_precision(pts(i, k));
      if (s.is_weighted()) out << "," << full_precision(s.weights[i]);
      if (!s.order.empty()) out << "," << s.order[static_cast<std::size_t>(i)];
      out << "\n";
    }
    if (a.out.empty() || a.out == "-") std::cout << out.str();
    else write_text(a.out, out.str());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

// ---- fit / predict / moments ----------------------------------------------

struct FitArgs {
  std::string problem;
  std::string scheme = "random";
  long m = 0;
  std::string solver = "l1";
  std::uint64_t seed = 1;
  std::string out;
  int frequencies = kElectrodeReducedFrequencies;
};

int cmd_fit(const FitArgs& a) {
  TestProblem problem;
  Scheme scheme;
  SolverChoice solver;
  try {
    problem = make_problem(a.problem, a.frequencies);
    scheme = parse_scheme_flag(a.scheme);
    solver = parse_solver(a.solver);
    if (a.m < 1) throw UsageError("-m: must be >= 1");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    MultiIndexSet basis = problem.basis();
    StudyConfig cfg;
    SampleSet s = generate_design(scheme, a.m, basis, problem.spec, a.seed, cfg);
    Eigen::MatrixXd y = problem.evaluate(to_physical(problem.spec, s.points));
    GpceModel model = fit(s, y, basis, problem.spec, solver);
    if (a.out.empty() || a.out == "-") std::cout << model.to_json() << "\n";
    else write_text(a.out, model.to_json() + "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

GpceModel load_model(const std::string& path) { return GpceModel::from_json(read_file(path)); }

int cmd_predict(const std::string& model_path, const std::string& points_path, const std::string& out_path) {
  GpceModel model;
  Eigen::MatrixXd pts;
  try {
    model = load_model(model_path);
    pts = read_points_csv(points_path);
    if (pts.cols() != model.spec().dim())
      throw UsageError("points have " + std::to_string(pts.cols()) + " columns, model expects " +
                       std::to_string(model.spec().dim()));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  int bad = 0;
  std::vector<double> row(static_cast<std::size_t>(pts.cols()));
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index k = 0; k < pts.cols(); ++k) row[static_cast<std::size_t>(k)] = pts(i, k);
    if (!model.spec().contains(row)) {
      std::cerr << "error: row " << i + 1 << ": point outside the input domain\n";
      ++bad;
    }
  }
  if (bad > 0) return 2;
  try {
    Eigen::MatrixXd y = model.predict(pts);
    std::ostringstream out;
    for (Eigen::Index q = 0; q < y.cols(); ++q) out << (q ? "," : "") << "y" << q;
    out << "\n";
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      for (Eigen::Index q = 0; q < y.cols(); ++q) out << (q ? "," : "") << full_precision(y(i, q));
      out << "\n";
    }
    if (out_path.empty() || out_path == "-") std::cout << out.str();
    else write_text(out_path, out.str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_moments(const std::string& model_path) {
  GpceModel model;
  try {
    model = load_model(model_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  Moments m = moments(model);
  std::cout << "qoi,mean,std\n";
  for (Eigen::Index q = 0; q < m.mean.size(); ++q)
    std::cout << q << "," << full_precision(m.mean[q]) << "," << full_precision(m.std[q]) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gpce: polynomial chaos surrogates and sampling benchmarks"};
  app.set_version_flag("--version", GPCE_VERSION);
  app.require_subcommand(1);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "run a convergence study and write CSV reports");
  b->add_option("--config", bench.config, "INI study description");
  b->add_option("--preset", bench.preset, "bundled study (see 'gpce presets')");
  b->add_option("--out", bench.out, "output directory");
  b->add_option("--seed", bench.seed, "override the master seed");
  b->add_option("--jobs", bench.jobs, "parallel repetitions")->check(CLI::PositiveNumber);
  b->add_option("--repetitions", bench.repetitions, "override the repetition count");
  b->add_flag("--full-electrode", bench.full_electrode, "electrode model with all 1000 frequencies");

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "write one sampling design as CSV");
  s->add_option("--scheme", sample.scheme, "sampling scheme")->required();
  s->add_option("-m,--size", sample.m, "number of points")->required();
  s->add_option("-d,--dim", sample.d, "dimension (implied by --problem)");
  s->add_option("--seed", sample.seed, "random seed");
  s->add_option("--out", sample.out, "output CSV (default stdout)");
  s->add_option("--problem", sample.problem, "registered problem: physical coordinates and basis");
  s->add_option("--order", sample.order, "basis order for coherence-based schemes");
  s->add_option("--interaction", sample.interaction, "interaction order for coherence-based schemes");
  s->add_option("--pool-factor", sample.pool_factor, "greedy pool size as a multiple of m");

  FitArgs fitargs;
  auto* f = app.add_subcommand("fit", "sample a problem, fit a surrogate and save it as JSON");
  f->add_option("--problem", fitargs.problem, "ishigami, rosenbrock6, lpp30 or electrode")->required();
  f->add_option("--scheme", fitargs.scheme, "sampling scheme");
  f->add_option("-m,--size", fitargs.m, "number of samples")->required();
  f->add_option("--solver", fitargs.solver, "l1 (LARS-Lasso) or l2 (pseudo-inverse)");
  f->add_option("--seed", fitargs.seed, "random seed");
  f->add_option("--frequencies", fitargs.frequencies, "electrode frequency count");
  f->add_option("--out", fitargs.out, "model file (default stdout)");

  std::string model_path, points_path, pred_out;
  auto* p = app.add_subcommand("predict", "evaluate a saved surrogate at CSV points");
  p->add_option("--model", model_path, "model JSON")->required();
  p->add_option("--points", points_path, "CSV of physical points")->required();
  p->add_option("--out", pred_out, "output CSV (default stdout)");

  std::string moments_model;
  auto* mo = app.add_subcommand("moments", "print mean and standard deviation per output");
  mo->add_option("--model", moments_model, "model JSON")->required();

  auto* pr = app.add_subcommand("presets", "list bundled study presets");
  std::string show;
  pr->add_option("--show", show, "print one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*b) return cmd_bench(bench);
    if (*s) return cmd_sample(sample);
    if (*f) return cmd_fit(fitargs);
    if (*p) return cmd_predict(model_path, points_path, pred_out);
    if (*mo) return cmd_moments(moments_model);
    if (*pr) {
      if (!show.empty()) {
        std::cout << preset_text(show);
        return 0;
      }
      for (const auto& name : preset_names()) std::cout << name << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
