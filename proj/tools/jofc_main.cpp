// Command-line front end: simulation, AUC(w) sweeps, joint embedding,
// out-of-sample testing, the holdout-bootstrap protocol, the Procrustes
// baseline, and scree-based dimension selection. Every run is driven by the
// flags plus an optional INI config ([subcommand] sections; flags win), and
// every result CSV starts with a comment recording the resolved config hash.
#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <jofc/baseline.hpp>
#include <jofc/csv.hpp>
#include <jofc/experiment.hpp>
#include <jofc/inference.hpp>
#include <jofc/omnibus.hpp>
#include <jofc/oos.hpp>
#include <jofc/rng.hpp>
#include <jofc/simgauss.hpp>
#include <jofc/solver.hpp>

namespace {

using namespace jofc;
namespace fs = std::filesystem;

// Exit contract: 0 success, 1 usage/config error, 2 numerical failure.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Anything thrown while computing (as opposed to while validating or reading
// inputs) is a numerical failure.
template <typename F>
auto numeric_phase(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw NumericError(e.what());
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Canonical resolved-config record: insertion-ordered key=value lines. The
// hash of this string is stamped into every result CSV.
class ResolvedConfig {
 public:
  void add(const std::string& key, const std::string& value) { lines_ += key + "=" + value + "\n"; }
  void add(const std::string& key, double value) { add(key, format_number(value)); }
  void add(const std::string& key, std::int64_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, const std::vector<double>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) joined += ",";
      joined += format_number(values[i]);
    }
    add(key, joined);
  }
  std::string hash() const { return hex64(fnv1a(lines_)); }

 private:
  std::string lines_;
};

// Result CSV: config-hash comment line, header row, then data rows.
class ResultCsv {
 public:
  ResultCsv(const fs::path& path, const std::string& hash, const std::string& header)
      : path_(path), out_(path) {
    if (!out_) throw UsageError("cannot open for writing: " + path.string());
    out_ << "# config_hash=" << hash << "\n" << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }
  ~ResultCsv() {
    out_.flush();
    if (!out_) std::fprintf(stderr, "warning: short write on %s\n", path_.string().c_str());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open for writing: " + path.string());
  out << content;
}

std::string roc_gnuplot(const std::string& csv_name) {
  return "set datafile separator ','\n"
         "set xlabel 'alpha'\n"
         "set ylabel 'beta'\n"
         "set key left top\n"
         "set xrange [0:1]\n"
         "set yrange [0:1]\n"
         "plot '" + csv_name + "' every ::1 using 2:3 with lines title 'ROC', x with lines dashtype 2 title 'chance'\n";
}

// ---------------------------------------------------------------------------
// Shared option bag. Only the options registered on the active subcommand are
// ever read; per-command defaults are resolved at use time.

struct Options {
  // Gaussian generator
  std::int64_t n = 150;
  std::int64_t m = 250;
  std::int64_t p = 5;
  double r = 10.0;
  std::string sigma_form = "isotropic";
  // pipeline
  std::int64_t d = 5;
  double w = 0.925;
  std::vector<double> w_grid;
  std::string policy;  // empty = per-command default
  // run control
  std::int64_t replicates = -1;  // -1 = per-command default
  std::vector<double> alphas = {0.05};
  std::uint64_t seed = 0;
  std::int64_t workers = 0;  // 0 = all processors
  std::string out = ".";
  // file inputs
  std::string delta_path, delta1_path, delta2_path, test1_path, test2_path;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw UsageError(msg);
}

ImputationPolicy parse_policy(const std::string& value, ImputationPolicy command_default) {
  if (value.empty()) return command_default;
  if (value == "ignore") return ImputationPolicy::ignore_missing;
  if (value == "impute") return ImputationPolicy::mean_impute;
  throw UsageError("policy must be 'ignore' or 'impute', got '" + value + "'");
}

const char* policy_name(ImputationPolicy policy) {
  return policy == ImputationPolicy::ignore_missing ? "ignore" : "impute";
}

SigmaForm parse_sigma_form(const std::string& value) {
  if (value == "isotropic") return SigmaForm::isotropic;
  if (value == "random") return SigmaForm::random_psd;
  throw UsageError("sigma-form must be 'isotropic' or 'random', got '" + value + "'");
}

int resolve_workers(std::int64_t workers) {
  if (workers > 0) return static_cast<int>(workers);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

GaussianSettingParams gaussian_params(const Options& opt) {
  require(opt.n >= 1 && opt.m >= 1 && opt.p >= 1, "n, m, and p must be positive");
  require(opt.r > 0.0, "r must be positive");
  GaussianSettingParams params;
  params.n = opt.n;
  params.m = opt.m;
  params.p = opt.p;
  params.r = opt.r;
  params.sigma_form = parse_sigma_form(opt.sigma_form);
  params.sigma_seed = opt.seed;  // one covariance per experiment
  params.seed = opt.seed;
  return params;
}

TrialPipelineSettings pipeline_settings(const Options& opt, ImputationPolicy command_default) {
  require(opt.d >= 1, "d must be positive");
  TrialPipelineSettings settings;
  settings.dim = opt.d;
  settings.policy = parse_policy(opt.policy, command_default);
  return settings;
}

void check_unit_interval(const std::vector<double>& values, const std::string& what) {
  require(!values.empty(), what + " list must not be empty");
  for (double v : values) require(v > 0.0 && v < 1.0, what + " values must lie strictly in (0,1)");
}

void add_gaussian_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--n", opt.n, "Training pairs")->capture_default_str();
  cmd->add_option("--m", opt.m, "Test pairs per hypothesis")->capture_default_str();
  cmd->add_option("--p", opt.p, "Latent dimension")->capture_default_str();
  cmd->add_option("--r", opt.r, "Noise precision: lambda_max(Sigma) = 1/r")->capture_default_str();
  cmd->add_option("--sigma-form", opt.sigma_form, "Covariance form: isotropic|random")
      ->check(CLI::IsMember({"isotropic", "random"}))
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "Base random seed")->capture_default_str();
}

void add_out_option(CLI::App* cmd, Options& opt) {
  cmd->add_option("--out", opt.out, "Output directory")->capture_default_str();
}

fs::path prepare_out_dir(const Options& opt) {
  fs::path dir(opt.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec && fs::is_directory(dir), "cannot create output directory: " + opt.out);
  return dir;
}

DissimilarityMatrix read_delta(const std::string& path) {
  try {
    return read_matrix_csv(path);
  } catch (const Error& e) {
    throw UsageError(std::string("reading ") + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// simulate: draw one trial and dump it as replay CSVs.

int cmd_simulate(const Options& opt) {
  const GaussianSettingParams params = gaussian_params(opt);
  const fs::path dir = prepare_out_dir(opt);
  const Trial trial = numeric_phase([&] { return sample_trial(params); });
  numeric_phase([&] {
    dump_trial_csv(trial, dir.string());
    return 0;
  });
  std::printf("trial written to %s: n=%lld m=%lld p=%lld r=%s seed=%llu\n", dir.string().c_str(),
              static_cast<long long>(opt.n), static_cast<long long>(opt.m),
              static_cast<long long>(opt.p), format_number(opt.r).c_str(),
              static_cast<unsigned long long>(opt.seed));
  return 0;
}

// ---------------------------------------------------------------------------
// sweep: Monte Carlo AUC(w) study in the Gaussian setting.

int cmd_sweep(const Options& opt) {
  const GaussianSettingParams base = gaussian_params(opt);
  const TrialPipelineSettings pipeline = pipeline_settings(opt, ImputationPolicy::ignore_missing);
  const std::int64_t replicates = opt.replicates < 0 ? 50 : opt.replicates;
  require(replicates >= 1, "replicates must be at least 1");
  check_unit_interval(opt.w_grid, "w-grid");
  for (std::size_t i = 1; i < opt.w_grid.size(); ++i)
    require(opt.w_grid[i - 1] < opt.w_grid[i], "w-grid must be strictly increasing");
  check_unit_interval(opt.alphas, "alpha");
  const fs::path dir = prepare_out_dir(opt);

  ResolvedConfig config;
  config.add("cmd", "sweep");
  config.add("n", opt.n);
  config.add("m", opt.m);
  config.add("p", opt.p);
  config.add("r", opt.r);
  config.add("sigma_form", opt.sigma_form);
  config.add("d", opt.d);
  config.add("policy", policy_name(pipeline.policy));
  config.add("w_grid", opt.w_grid);
  config.add("replicates", replicates);
  config.add("alpha", opt.alphas);
  config.add("seed", static_cast<std::int64_t>(opt.seed));
  const std::string hash = config.hash();

  const std::size_t grid_size = opt.w_grid.size();
  const std::size_t alpha_count = opt.alphas.size();
  std::map<double, std::size_t> grid_index;
  for (std::size_t g = 0; g < grid_size; ++g) grid_index[opt.w_grid[g]] = g;

  // power[(g * replicates + rep) * alpha_count + a]; each slot written once,
  // so the result is independent of worker scheduling.
  std::vector<double> power(grid_size * static_cast<std::size_t>(replicates) * alpha_count, 0.0);
  std::atomic<long> cells_done{0};
  const long cells_total = static_cast<long>(grid_size) * static_cast<long>(replicates);

  const SamplePipeline cell = [&](double w, int replicate) {
    GaussianSettingParams params = base;
    params.seed = derive_seed(base.seed, static_cast<std::uint64_t>(replicate));
    const TestStatisticSample sample = run_jofc_trial(sample_trial(params), w, pipeline);
    const std::size_t g = grid_index.at(w);
    for (std::size_t a = 0; a < alpha_count; ++a)
      power[(g * static_cast<std::size_t>(replicates) + static_cast<std::size_t>(replicate)) *
                alpha_count +
            a] = power_at_alpha(sample, opt.alphas[a]);
    const long done = ++cells_done;
    std::fprintf(stderr, "sweep cell %ld/%ld (w=%s replicate=%d)\n", done, cells_total,
                 format_number(w).c_str(), replicate);
    return sample;
  };

  const WSweepResult result = numeric_phase([&] {
    return sweep_w(opt.w_grid, static_cast<int>(replicates), cell, resolve_workers(opt.workers));
  });

  {
    ResultCsv csv(dir / "auc_by_replicate.csv", hash, "w,replicate,auc");
    for (std::size_t g = 0; g < grid_size; ++g)
      for (std::int64_t rep = 0; rep < replicates; ++rep)
        csv.row({format_number(result.grid[g]), std::to_string(rep),
                 format_number(result.auc_by_replicate[g][static_cast<std::size_t>(rep)])});
  }
  {
    ResultCsv csv(dir / "auc_summary.csv", hash, "w,auc_mean,auc_se");
    for (std::size_t g = 0; g < grid_size; ++g)
      csv.row({format_number(result.grid[g]), format_number(result.auc_mean[g]),
               format_number(result.auc_se[g])});
  }
  {
    ResultCsv csv(dir / "power_by_alpha.csv", hash, "series,x,y");
    for (std::size_t a = 0; a < alpha_count; ++a)
      for (std::size_t g = 0; g < grid_size; ++g) {
        double mean = 0.0;
        for (std::int64_t rep = 0; rep < replicates; ++rep)
          mean += power[(g * static_cast<std::size_t>(replicates) + static_cast<std::size_t>(rep)) *
                            alpha_count +
                        a];
        mean /= static_cast<double>(replicates);
        csv.row({"alpha=" + format_number(opt.alphas[a]), format_number(result.grid[g]),
                 format_number(mean)});
      }
  }
  {
    ResultCsv csv(dir / "wstar_histogram.csv", hash, "w,count");
    for (std::size_t g = 0; g < grid_size; ++g)
      csv.row({format_number(result.grid[g]), std::to_string(result.per_replicate_argmax[g])});
  }
  write_text_file(dir / "sweep.gp",
                  "set datafile separator ','\n"
                  "set xlabel 'w'\n"
                  "set ylabel 'mean AUC'\n"
                  "set key left bottom\n"
                  "plot 'auc_summary.csv' every ::1 using 1:2 with linespoints title 'AUC(w)'\n");
  std::printf("w_star_estimate=%s\n", format_number(result.w_star_estimate).c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// embed: joint omnibus embedding of two conditions, or plain MDS of one.

int cmd_embed(const Options& opt) {
  const bool single = !opt.delta_path.empty();
  const bool joint = !opt.delta1_path.empty() || !opt.delta2_path.empty();
  require(single != joint, "embed needs either --delta, or both --delta1 and --delta2");
  if (joint)
    require(!opt.delta1_path.empty() && !opt.delta2_path.empty(),
            "embed needs both --delta1 and --delta2");
  require(opt.d >= 1, "d must be positive");
  const fs::path dir = prepare_out_dir(opt);

  ResolvedConfig config;
  config.add("cmd", "embed");
  config.add("d", opt.d);
  if (single) {
    config.add("delta", opt.delta_path);
  } else {
    require(opt.w > 0.0 && opt.w < 1.0, "w must lie strictly in (0,1)");
    config.add("delta1", opt.delta1_path);
    config.add("delta2", opt.delta2_path);
    config.add("w", opt.w);
    config.add("policy", policy_name(parse_policy(opt.policy, ImputationPolicy::mean_impute)));
  }
  const std::string hash = config.hash();

  Configuration points;
  std::vector<std::pair<std::int64_t, int>> labels;  // (object, condition)
  double final_stress = 0.0;
  int iterations = 0;
  bool converged = false;

  if (single) {
    const DissimilarityMatrix delta = read_delta(opt.delta_path);
    const SolveResult fit = numeric_phase(
        [&] { return smacof(delta, WeightMatrix::uniform(delta.size()), opt.d); });
    points = fit.configuration;
    for (Eigen::Index i = 0; i < delta.size(); ++i) labels.emplace_back(i, 1);
    final_stress = fit.stress_trace.back();
    iterations = fit.iterations;
    converged = fit.converged;
  } else {
    const DissimilarityMatrix d1 = read_delta(opt.delta1_path);
    const DissimilarityMatrix d2 = read_delta(opt.delta2_path);
    require(d1.size() == d2.size(), "the two conditions must have the same number of objects");
    OmnibusOptions options;
    options.policy = parse_policy(opt.policy, ImputationPolicy::mean_impute);
    options.auto_normalize = true;
    const SolveResult fit = numeric_phase([&] {
      const OmnibusProblem problem = build_omnibus(d1, d2, opt.w, options);
      return smacof(problem.m, problem.weights, opt.d);
    });
    points = fit.configuration;
    BlockIndex index;
    index.n = d1.size();
    for (Eigen::Index row = 0; row < index.rows(); ++row)
      labels.emplace_back(index.object_of(row), index.condition_of(row));
    final_stress = fit.stress_trace.back();
    iterations = fit.iterations;
    converged = fit.converged;
  }

  std::string header = "object,condition";
  for (std::int64_t k = 0; k < opt.d; ++k) header += ",c" + std::to_string(k);
  ResultCsv csv(dir / "configuration.csv", hash, header);
  for (Eigen::Index row = 0; row < points.n_points(); ++row) {
    std::vector<std::string> cells = {std::to_string(labels[static_cast<std::size_t>(row)].first),
                                      std::to_string(labels[static_cast<std::size_t>(row)].second)};
    for (Eigen::Index k = 0; k < points.dim(); ++k)
      cells.push_back(format_number(points.points(row, k)));
    csv.row(cells);
  }
  std::printf("final_stress=%s iterations=%d converged=%d\n", format_number(final_stress).c_str(),
              iterations, converged ? 1 : 0);
  return 0;
}

// ---------------------------------------------------------------------------
// oos and baseline share their input modes: a generated Gaussian trial, or
// dissimilarity CSVs with optional test-profile tables (absent tables mean
// self-testing every training object).

struct LoadedPairs {
  bool hypothesis_labels = false;  // true when matched/unmatched lists exist
  Trial trial;                     // Gaussian mode
  DissimilarityMatrix d1, d2;      // file mode
  std::vector<Vector> profiles1, profiles2;
  std::string profile_label;  // "test" or "self"
};

LoadedPairs load_pairs(const Options& opt, ResolvedConfig& config) {
  LoadedPairs loaded;
  const bool file_mode = !opt.delta1_path.empty() || !opt.delta2_path.empty();
  if (!file_mode) {
    require(opt.test1_path.empty() && opt.test2_path.empty(),
            "--test1/--test2 require --delta1 and --delta2");
    const GaussianSettingParams params = gaussian_params(opt);
    config.add("source", "gaussian");
    config.add("n", opt.n);
    config.add("m", opt.m);
    config.add("p", opt.p);
    config.add("r", opt.r);
    config.add("sigma_form", opt.sigma_form);
    config.add("seed", static_cast<std::int64_t>(opt.seed));
    loaded.hypothesis_labels = true;
    loaded.trial = numeric_phase([&] { return sample_trial(params); });
    loaded.d1 = loaded.trial.delta1;
    loaded.d2 = loaded.trial.delta2;
    return loaded;
  }

  require(!opt.delta1_path.empty() && !opt.delta2_path.empty(),
          "file mode needs both --delta1 and --delta2");
  config.add("source", "files");
  config.add("delta1", opt.delta1_path);
  config.add("delta2", opt.delta2_path);
  loaded.d1 = read_delta(opt.delta1_path);
  loaded.d2 = read_delta(opt.delta2_path);
  require(loaded.d1.size() == loaded.d2.size(),
          "the two conditions must have the same number of objects");
  const Eigen::Index n = loaded.d1.size();

  require(opt.test1_path.empty() == opt.test2_path.empty(),
          "--test1 and --test2 must be given together");
  if (!opt.test1_path.empty()) {
    config.add("test1", opt.test1_path);
    config.add("test2", opt.test2_path);
    Matrix t1, t2;
    try {
      t1 = read_table_csv(opt.test1_path);
      t2 = read_table_csv(opt.test2_path);
    } catch (const Error& e) {
      throw UsageError(std::string("reading test profiles: ") + e.what());
    }
    require(t1.rows() == t2.rows(), "--test1 and --test2 must have the same number of rows");
    require(t1.cols() == n && t2.cols() == n,
            "test profiles must have one column per training object");
    for (Eigen::Index i = 0; i < t1.rows(); ++i) {
      loaded.profiles1.push_back(t1.row(i).transpose());
      loaded.profiles2.push_back(t2.row(i).transpose());
    }
    loaded.profile_label = "test";
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      loaded.profiles1.push_back(loaded.d1.entries.row(i).transpose());
      loaded.profiles2.push_back(loaded.d2.entries.row(i).transpose());
    }
    loaded.profile_label = "self";
  }
  return loaded;
}

void write_tau_and_roc(const fs::path& dir, const std::string& hash, const LoadedPairs& loaded,
                       const TestStatisticSample& sample, const std::vector<double>& file_taus,
                       const std::string& series) {
  if (loaded.hypothesis_labels) {
    ResultCsv csv(dir / "tau.csv", hash, "hypothesis,index,tau");
    for (std::size_t i = 0; i < sample.matched.size(); ++i)
      csv.row({"matched", std::to_string(i), format_number(sample.matched[i])});
    for (std::size_t i = 0; i < sample.unmatched.size(); ++i)
      csv.row({"unmatched", std::to_string(i), format_number(sample.unmatched[i])});
    const std::vector<RocPoint> roc = roc_curve(sample);
    ResultCsv roc_csv(dir / "roc.csv", hash, "series,x,y");
    for (const RocPoint& point : roc)
      roc_csv.row({series, format_number(point.alpha), format_number(point.beta)});
    write_text_file(dir / (series + ".gp"), roc_gnuplot("roc.csv"));
    std::printf("auc=%s\n", format_number(empirical_auc(sample)).c_str());
  } else {
    ResultCsv csv(dir / "tau.csv", hash, "hypothesis,index,tau");
    for (std::size_t i = 0; i < file_taus.size(); ++i)
      csv.row({loaded.profile_label, std::to_string(i), format_number(file_taus[i])});
    std::printf("pairs=%zu\n", file_taus.size());
  }
}

int cmd_oos(const Options& opt) {
  require(opt.w > 0.0 && opt.w < 1.0, "w must lie strictly in (0,1)");
  const TrialPipelineSettings pipeline = pipeline_settings(opt, ImputationPolicy::mean_impute);
  const fs::path dir = prepare_out_dir(opt);

  ResolvedConfig config;
  config.add("cmd", "oos");
  config.add("d", opt.d);
  config.add("w", opt.w);
  config.add("policy", policy_name(pipeline.policy));
  LoadedPairs loaded = load_pairs(opt, config);
  const std::string hash = config.hash();

  TestStatisticSample sample;
  std::vector<double> file_taus;
  if (loaded.hypothesis_labels) {
    sample = numeric_phase([&] { return run_jofc_trial(loaded.trial, opt.w, pipeline); });
  } else {
    file_taus = numeric_phase([&] {
      OmnibusOptions options;
      options.policy = pipeline.policy;
      options.auto_normalize = true;
      const OmnibusProblem problem = build_omnibus(loaded.d1, loaded.d2, opt.w, options);
      const Configuration insample =
          smacof(problem.m, problem.weights, pipeline.dim, pipeline.insample_solver).configuration;
      std::vector<double> taus;
      for (std::size_t i = 0; i < loaded.profiles1.size(); ++i)
        taus.push_back(oos_embed(insample,
                                 augment_for_oos(problem, loaded.profiles1[i], loaded.profiles2[i]),
                                 pipeline.oos)
                           .tau);
      return taus;
    });
  }
  write_tau_and_roc(dir, hash, loaded, sample, file_taus, "jofc");
  return 0;
}

int cmd_baseline(const Options& opt) {
  const TrialPipelineSettings pipeline = pipeline_settings(opt, ImputationPolicy::mean_impute);
  const fs::path dir = prepare_out_dir(opt);

  ResolvedConfig config;
  config.add("cmd", "baseline");
  config.add("d", opt.d);
  LoadedPairs loaded = load_pairs(opt, config);
  const std::string hash = config.hash();

  TestStatisticSample sample;
  std::vector<double> file_taus;
  if (loaded.hypothesis_labels) {
    sample = numeric_phase([&] { return run_prm_trial(loaded.trial, pipeline); });
  } else {
    file_taus = numeric_phase([&] {
      const double f1 = masked_frobenius_norm(loaded.d1);
      const double f2 = masked_frobenius_norm(loaded.d2);
      OosSettings fit_settings = pipeline.oos;
      fit_settings.solver = pipeline.insample_solver;
      const PrmModel model = fit_prm(normalize_frobenius(loaded.d1), normalize_frobenius(loaded.d2),
                                     pipeline.dim, fit_settings);
      std::vector<double> taus;
      for (std::size_t i = 0; i < loaded.profiles1.size(); ++i)
        taus.push_back(
            prm_test(model, loaded.profiles1[i] / f1, loaded.profiles2[i] / f2, pipeline.oos).tau);
      return taus;
    });
  }
  write_tau_and_roc(dir, hash, loaded, sample, file_taus, "prm");
  return 0;
}

// ---------------------------------------------------------------------------
// holdout: the leave-two-out bootstrap protocol on real dissimilarity files.

int cmd_holdout(const Options& opt) {
  require(!opt.delta1_path.empty() && !opt.delta2_path.empty(),
          "holdout needs --delta1 and --delta2");
  require(opt.w > 0.0 && opt.w < 1.0, "w must lie strictly in (0,1)");
  check_unit_interval(opt.alphas, "alpha");
  const std::int64_t replicates = opt.replicates < 0 ? 200 : opt.replicates;
  require(replicates >= 1, "replicates must be at least 1");
  const DissimilarityMatrix d1 = read_delta(opt.delta1_path);
  const DissimilarityMatrix d2 = read_delta(opt.delta2_path);
  require(d1.size() == d2.size(), "the two conditions must have the same number of objects");
  require(d1.size() >= 4, "holdout needs at least 4 objects");
  const fs::path dir = prepare_out_dir(opt);

  HoldoutSpec spec;
  spec.w = opt.w;
  spec.replicates = static_cast<int>(replicates);
  spec.seed = opt.seed;
  spec.alphas = opt.alphas;
  spec.pipeline = holdout_pipeline_defaults();
  spec.pipeline.dim = opt.d;
  spec.pipeline.policy = parse_policy(opt.policy, ImputationPolicy::mean_impute);
  spec.workers = resolve_workers(opt.workers);

  ResolvedConfig config;
  config.add("cmd", "holdout");
  config.add("delta1", opt.delta1_path);
  config.add("delta2", opt.delta2_path);
  config.add("d", opt.d);
  config.add("w", opt.w);
  config.add("policy", policy_name(spec.pipeline.policy));
  config.add("replicates", replicates);
  config.add("alpha", opt.alphas);
  config.add("seed", static_cast<std::int64_t>(opt.seed));
  const std::string hash = config.hash();

  const HoldoutResult result = numeric_phase([&] { return run_holdout(d1, d2, spec); });

  {
    ResultCsv csv(dir / "taus.csv", hash, "replicate,matched_tau,unmatched_tau");
    for (std::size_t i = 0; i < result.taus.matched.size(); ++i)
      csv.row({std::to_string(i), format_number(result.taus.matched[i]),
               format_number(result.taus.unmatched[i])});
  }
  {
    ResultCsv csv(dir / "roc.csv", hash, "series,x,y");
    for (const RocPoint& point : result.roc)
      csv.row({"holdout", format_number(point.alpha), format_number(point.beta)});
  }
  {
    ResultCsv csv(dir / "holdout_summary.csv", hash, "alpha,critical_value,size,power,auc");
    for (const AlphaRow& row : result.by_alpha)
      csv.row({format_number(row.alpha), format_number(row.critical_value),
               format_number(row.size), format_number(row.power), format_number(result.auc)});
  }
  write_text_file(dir / "holdout.gp", roc_gnuplot("roc.csv"));
  std::printf("auc=%s\n", format_number(result.auc).c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// dimselect: scree elbow on the double-centered spectrum.

int cmd_dimselect(const Options& opt) {
  require(!opt.delta_path.empty(), "dimselect needs --delta");
  const DissimilarityMatrix delta = read_delta(opt.delta_path);
  const fs::path dir = prepare_out_dir(opt);
  const Eigen::Index chosen = numeric_phase([&] {
    return select_dimension_elbow(double_centered_spectrum(delta));
  });
  write_text_file(dir / "chosen_dimension.txt", std::to_string(chosen) + "\n");
  std::printf("chosen_dimension=%lld\n", static_cast<long long>(chosen));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint embedding of two dissimilarity conditions with a fidelity/"
               "commensurability tradeoff: simulation, AUC(w) sweeps, out-of-sample match "
               "testing, holdout bootstrap, Procrustes baseline, dimension selection."};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file ([subcommand] sections; flags override it)");

  Options opt;

  CLI::App* simulate = app.add_subcommand("simulate", "Draw one Gaussian trial and dump its CSVs");
  add_gaussian_options(simulate, opt);
  add_out_option(simulate, opt);

  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo AUC(w) sweep in the Gaussian setting");
  add_gaussian_options(sweep, opt);
  add_out_option(sweep, opt);
  sweep->add_option("--d", opt.d, "Embedding dimension")->capture_default_str();
  sweep->add_option("--w-grid", opt.w_grid, "Tradeoff grid, strictly increasing in (0,1)")
      ->delimiter(',')
      ->default_str("0.1,0.4,0.5,0.8,0.85,0.9,0.91,0.92,0.925,0.93,0.94,0.95,0.96,0.99,0.999");
  sweep->add_option("--replicates", opt.replicates, "Monte Carlo replicates")->default_str("50");
  sweep->add_option("--alpha", opt.alphas, "Type I error rates for power curves")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--workers", opt.workers, "Worker threads (0 = all processors)")
      ->capture_default_str();
  sweep->add_option("--policy", opt.policy, "Separability handling: ignore|impute (default ignore)")
      ->check(CLI::IsMember({"ignore", "impute"}));

  CLI::App* embed = app.add_subcommand("embed", "Embed one condition (plain MDS) or two (joint)");
  embed->add_option("--delta", opt.delta_path, "Single dissimilarity CSV")
      ->check(CLI::ExistingFile);
  embed->add_option("--delta1", opt.delta1_path, "Condition-1 dissimilarity CSV")
      ->check(CLI::ExistingFile);
  embed->add_option("--delta2", opt.delta2_path, "Condition-2 dissimilarity CSV")
      ->check(CLI::ExistingFile);
  embed->add_option("--d", opt.d, "Embedding dimension")->capture_default_str();
  embed->add_option("--w", opt.w, "Tradeoff weight in (0,1)")->capture_default_str();
  embed->add_option("--policy", opt.policy, "Separability handling: ignore|impute (default impute)")
      ->check(CLI::IsMember({"ignore", "impute"}));
  add_out_option(embed, opt);

  CLI::App* oos = app.add_subcommand(
      "oos", "Embed test pairs out of sample and report tau (Gaussian trial or CSV inputs)");
  add_gaussian_options(oos, opt);
  oos->add_option("--delta1", opt.delta1_path, "Condition-1 dissimilarity CSV")
      ->check(CLI::ExistingFile);
  oos->add_option("--delta2", opt.delta2_path, "Condition-2 dissimilarity CSV")
      ->check(CLI::ExistingFile);
  oos->add_option("--test1", opt.test1_path, "Condition-1 test profiles, one row per pair")
      ->check(CLI::ExistingFile);
  oos->add_option("--test2", opt.test2_path, "Condition-2 test profiles, one row per pair")
      ->check(CLI::ExistingFile);
  oos->add_option("--d", opt.d, "Embedding dimension")->capture_default_str();
  oos->add_option("--w", opt.w, "Tradeoff weight in (0,1)")->capture_default_str();
  oos->add_option("--policy", opt.policy, "Separability handling: ignore|impute (default impute)")
      ->check(CLI::IsMember({"ignore", "impute"}));
  add_out_option(oos, opt);

  CLI::App* holdout = app.add_subcommand(
      "holdout", "Leave-two-out bootstrap match test on two dissimilarity CSVs");
  holdout->add_option("--delta1", opt.delta1_path, "Condition-1 dissimilarity CSV")
      ->check(CLI::ExistingFile);
  holdout->add_option("--delta2", opt.delta2_path, "Condition-2 dissimilarity CSV")
      ->check(CLI::ExistingFile);
  holdout->add_option("--d", opt.d, "Embedding dimension")->capture_default_str();
  holdout->add_option("--w", opt.w, "Tradeoff weight in (0,1)")->capture_default_str();
  holdout->add_option("--replicates", opt.replicates, "Holdout replicates")->default_str("200");
  holdout->add_option("--alpha", opt.alphas, "Type I error rates")
      ->delimiter(',')
      ->capture_default_str();
  holdout->add_option("--seed", opt.seed, "Base random seed")->capture_default_str();
  holdout->add_option("--workers", opt.workers, "Worker threads (0 = all processors)")
      ->capture_default_str();
  holdout
      ->add_option("--policy", opt.policy, "Separability handling: ignore|impute (default impute)")
      ->check(CLI::IsMember({"ignore", "impute"}));
  add_out_option(holdout, opt);

  CLI::App* baseline = app.add_subcommand(
      "baseline", "Procrustes-matching baseline (Gaussian trial or CSV inputs)");
  add_gaussian_options(baseline, opt);
  baseline->add_option("--delta1", opt.delta1_path, "Condition-1 dissimilarity CSV")
      ->check(CLI::ExistingFile);
  baseline->add_option("--delta2", opt.delta2_path, "Condition-2 dissimilarity CSV")
      ->check(CLI::ExistingFile);
  baseline->add_option("--test1", opt.test1_path, "Condition-1 test profiles, one row per pair")
      ->check(CLI::ExistingFile);
  baseline->add_option("--test2", opt.test2_path, "Condition-2 test profiles, one row per pair")
      ->check(CLI::ExistingFile);
  baseline->add_option("--d", opt.d, "Embedding dimension")->capture_default_str();
  add_out_option(baseline, opt);

  CLI::App* dimselect =
      app.add_subcommand("dimselect", "Scree-elbow embedding dimension from one CSV");
  dimselect->add_option("--delta", opt.delta_path, "Dissimilarity CSV")->check(CLI::ExistingFile);
  add_out_option(dimselect, opt);

  for (CLI::App* sub : {simulate, sweep, embed, oos, holdout, baseline, dimselect}) {
    sub->configurable(true);
    // Lets `jofc <cmd> --config file` reach the main app's --config option.
    sub->fallthrough(true);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  // Defaults CLI11 cannot express directly (shown via default_str above).
  if (sweep->parsed() && opt.w_grid.empty())
    opt.w_grid = {0.1, 0.4, 0.5, 0.8, 0.85, 0.9, 0.91, 0.92, 0.925, 0.93, 0.94, 0.95, 0.96, 0.99, 0.999};

  try {
    if (simulate->parsed()) return cmd_simulate(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (embed->parsed()) return cmd_embed(opt);
    if (oos->parsed()) return cmd_oos(opt);
    if (holdout->parsed()) return cmd_holdout(opt);
    if (baseline->parsed()) return cmd_baseline(opt);
    if (dimselect->parsed()) return cmd_dimselect(opt);
    std::fprintf(stderr, "no subcommand selected\n");
    return 1;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected failure: %s\n", e.what());
    return 2;
  }
}
