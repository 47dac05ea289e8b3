#pragma once

#include <cstdint>
#include <vector>

#include "jofc/baseline.hpp"
#include "jofc/inference.hpp"
#include "jofc/omnibus.hpp"
#include "jofc/oos.hpp"
#include "jofc/simgauss.hpp"

namespace jofc {

/// Settings shared by a full embed-and-test pass over one trial.
/// The two policies share one objective (separability entries carry zero
/// weight either way); they differ in what the spectral initialization sees.
/// Under ignore_missing the init fills masked cross-condition entries with a
/// constant, so at weak coupling (low w) the solver often settles in a local
/// minimum where the two condition blocks are misaligned; mean_impute gives
/// the init per-entry cross targets and reaches the aligned minimum at every
/// w. The default keeps the separability entries unimputed.
struct TrialPipelineSettings {
  Eigen::Index dim = 5;
  ImputationPolicy policy = ImputationPolicy::ignore_missing;
  double separability_weight = 0.0;
  SolverSettings insample_solver;  // joint or per-condition training embedding
  OosSettings oos;                 // test-point solves
};

/// Joint pipeline on one trial at tradeoff w: build the omnibus, embed it,
/// then embed every matched and unmatched test pair out of sample and record
/// the tau statistics.
TestStatisticSample run_jofc_trial(const Trial& trial, double w,
                                   const TrialPipelineSettings& settings = {});

/// Procrustes-matching pipeline on the same trial. No tradeoff parameter:
/// each condition is embedded separately and aligned on the training pairs.
TestStatisticSample run_prm_trial(const Trial& trial,
                                  const TrialPipelineSettings& settings = {});

struct GaussianSweepSpec {
  /// gaussian.seed is the base seed; replicate k draws its trial from
  /// derive_seed(seed, k), identically at every w (paired design).
  GaussianSettingParams gaussian;
  TrialPipelineSettings pipeline;
  std::vector<double> w_grid;
  int replicates = 50;
  int workers = 1;
};

/// Monte Carlo AUC(w) sweep in the Gaussian setting.
WSweepResult run_gaussian_sweep(const GaussianSweepSpec& spec);

/// Per-replicate AUC of the Procrustes baseline over the same replicate
/// seeds as run_gaussian_sweep, for paired comparisons. w_grid is ignored.
struct BaselineSweepResult {
  std::vector<double> auc_by_replicate;
  double auc_mean = 0.0;
  double auc_se = 0.0;
};
BaselineSweepResult run_prm_sweep(const GaussianSweepSpec& spec);

/// Pipeline defaults for the holdout protocol. Each replicate embeds the
/// data once, so a misaligned local minimum cannot average out; the imputed
/// initialization avoids that failure without changing the objective.
inline TrialPipelineSettings holdout_pipeline_defaults() {
  TrialPipelineSettings settings;
  settings.policy = ImputationPolicy::mean_impute;
  return settings;
}

struct HoldoutSpec {
  /// Default tradeoff is the advocated optimum from the Gaussian study.
  double w = 0.925;
  int replicates = 200;
  std::uint64_t seed = 0;
  std::vector<double> alphas = {0.05};
  TrialPipelineSettings pipeline = holdout_pipeline_defaults();
  int workers = 1;
};

struct AlphaRow {
  double alpha = 0.0;
  double critical_value = 0.0;
  double size = 0.0;   // fraction of matched statistics above the critical value
  double power = 0.0;  // fraction of unmatched statistics above it
};

struct HoldoutResult {
  TestStatisticSample taus;  // one matched and one unmatched statistic per replicate
  std::vector<RocPoint> roc;
  double auc = 0.0;
  std::vector<AlphaRow> by_alpha;
};

/// Leave-two-out bootstrap on a matched pair of complete dissimilarity
/// matrices. Each replicate removes two matched row pairs, embeds the
/// remaining omnibus, and tests the held-out matched pair against the
/// crossed unmatched pair built from one row of each. Resampling rows
/// instead would duplicate observations and create zero dissimilarities, so
/// rows are held out, never resampled.
HoldoutResult run_holdout(const DissimilarityMatrix& delta1, const DissimilarityMatrix& delta2,
                          const HoldoutSpec& spec);

}  // namespace jofc
