#include "jofc/experiment.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "jofc/parallel.hpp"
#include "jofc/rng.hpp"

namespace jofc {

TestStatisticSample run_jofc_trial(const Trial& trial, double w,
                                   const TrialPipelineSettings& settings) {
  OmnibusOptions options;
  options.policy = settings.policy;
  options.auto_normalize = true;
  options.separability_weight = settings.separability_weight;
  const OmnibusProblem problem = build_omnibus(trial.delta1, trial.delta2, w, options);
  const Configuration insample =
      smacof(problem.m, problem.weights, settings.dim, settings.insample_solver).configuration;

  TestStatisticSample sample;
  sample.matched.reserve(trial.matched.size());
  sample.unmatched.reserve(trial.unmatched.size());
  for (const TestPair& pair : trial.matched)
    sample.matched.push_back(
        oos_embed(insample, augment_for_oos(problem, pair.d1, pair.d2), settings.oos).tau);
  for (const TestPair& pair : trial.unmatched)
    sample.unmatched.push_back(
        oos_embed(insample, augment_for_oos(problem, pair.d1, pair.d2), settings.oos).tau);
  return sample;
}

TestStatisticSample run_prm_trial(const Trial& trial, const TrialPipelineSettings& settings) {
  const double f1 = masked_frobenius_norm(trial.delta1);
  const double f2 = masked_frobenius_norm(trial.delta2);
  OosSettings fit_settings = settings.oos;
  fit_settings.solver = settings.insample_solver;
  const PrmModel model = fit_prm(normalize_frobenius(trial.delta1),
                                 normalize_frobenius(trial.delta2), settings.dim, fit_settings);

  TestStatisticSample sample;
  sample.matched.reserve(trial.matched.size());
  sample.unmatched.reserve(trial.unmatched.size());
  for (const TestPair& pair : trial.matched)
    sample.matched.push_back(prm_test(model, pair.d1 / f1, pair.d2 / f2, settings.oos).tau);
  for (const TestPair& pair : trial.unmatched)
    sample.unmatched.push_back(prm_test(model, pair.d1 / f1, pair.d2 / f2, settings.oos).tau);
  return sample;
}

WSweepResult run_gaussian_sweep(const GaussianSweepSpec& spec) {
  const GaussianSettingParams base = spec.gaussian;
  const TrialPipelineSettings pipeline = spec.pipeline;
  const SamplePipeline fn = [base, pipeline](double w, int replicate) {
    GaussianSettingParams params = base;
    params.seed = derive_seed(base.seed, static_cast<std::uint64_t>(replicate));
    return run_jofc_trial(sample_trial(params), w, pipeline);
  };
  return sweep_w(spec.w_grid, spec.replicates, fn, spec.workers);
}

BaselineSweepResult run_prm_sweep(const GaussianSweepSpec& spec) {
  if (spec.replicates < 1) throw EmptySampleError("need at least one replicate");
  BaselineSweepResult result;
  result.auc_by_replicate.resize(static_cast<std::size_t>(spec.replicates), 0.0);
  parallel_for(static_cast<std::size_t>(spec.replicates),
               static_cast<unsigned>(std::max(spec.workers, 1)), [&](std::size_t rep) {
                 try {
                   GaussianSettingParams params = spec.gaussian;
                   params.seed = derive_seed(spec.gaussian.seed, rep);
                   result.auc_by_replicate[rep] =
                       empirical_auc(run_prm_trial(sample_trial(params), spec.pipeline));
                 } catch (const std::exception& e) {
                   throw Error("baseline sweep failed at replicate=" + std::to_string(rep) +
                               ": " + e.what());
                 }
               });
  double mean = 0.0;
  for (double v : result.auc_by_replicate) mean += v;
  mean /= static_cast<double>(spec.replicates);
  double var = 0.0;
  for (double v : result.auc_by_replicate) var += (v - mean) * (v - mean);
  result.auc_mean = mean;
  result.auc_se = spec.replicates > 1
                      ? std::sqrt(var / static_cast<double>(spec.replicates - 1) /
                                  static_cast<double>(spec.replicates))
                      : 0.0;
  return result;
}

namespace {

DissimilarityMatrix drop_two(const DissimilarityMatrix& d, const std::vector<Eigen::Index>& keep) {
  const Eigen::Index k = static_cast<Eigen::Index>(keep.size());
  Matrix sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = d.entries(keep[i], keep[j]);
  return DissimilarityMatrix::complete(std::move(sub));
}

Vector row_profile(const DissimilarityMatrix& d, Eigen::Index row,
                   const std::vector<Eigen::Index>& keep) {
  Vector out(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    out[static_cast<Eigen::Index>(j)] = d.entries(row, keep[j]);
  return out;
}

}  // namespace

HoldoutResult run_holdout(const DissimilarityMatrix& delta1, const DissimilarityMatrix& delta2,
                          const HoldoutSpec& spec) {
  const Eigen::Index n = delta1.size();
  if (delta2.size() != n)
    throw SizeMismatchError("conditions must have the same number of objects");
  if (n < 4)
    throw TooFewValuesError(
        "holdout needs at least 4 objects: two held-out pairs plus an embeddable remainder");
  if (delta1.missing.any() || delta2.missing.any())
    throw Error("holdout requires complete dissimilarity matrices");
  if (spec.replicates < 1) throw EmptySampleError("need at least one replicate");
  for (double alpha : spec.alphas)
    if (!(alpha > 0.0) || !(alpha < 1.0))
      throw AlphaOutOfRangeError("alpha must lie in (0, 1)");

  HoldoutResult result;
  result.taus.matched.resize(static_cast<std::size_t>(spec.replicates), 0.0);
  result.taus.unmatched.resize(static_cast<std::size_t>(spec.replicates), 0.0);

  parallel_for(static_cast<std::size_t>(spec.replicates),
               static_cast<unsigned>(std::max(spec.workers, 1)), [&](std::size_t rep) {
                 try {
                   Rng rng(derive_seed(spec.seed, rep));
                   const Eigen::Index a = static_cast<Eigen::Index>(
                       rng.below(static_cast<std::uint64_t>(n)));
                   Eigen::Index b = static_cast<Eigen::Index>(
                       rng.below(static_cast<std::uint64_t>(n - 1)));
                   if (b >= a) ++b;

                   std::vector<Eigen::Index> keep;
                   keep.reserve(static_cast<std::size_t>(n - 2));
                   for (Eigen::Index i = 0; i < n; ++i)
                     if (i != a && i != b) keep.push_back(i);

                   OmnibusOptions options;
                   options.policy = spec.pipeline.policy;
                   options.auto_normalize = true;
                   options.separability_weight = spec.pipeline.separability_weight;
                   const OmnibusProblem problem =
                       build_omnibus(drop_two(delta1, keep), drop_two(delta2, keep), spec.w, options);
                   const Configuration insample =
                       smacof(problem.m, problem.weights, spec.pipeline.dim,
                              spec.pipeline.insample_solver)
                           .configuration;

                   // Matched test: object a seen in both conditions. Unmatched
                   // test: object a's condition-1 row against object b's
                   // condition-2 row.
                   const Vector m1 = row_profile(delta1, a, keep);
                   const Vector m2 = row_profile(delta2, a, keep);
                   const Vector u2 = row_profile(delta2, b, keep);
                   result.taus.matched[rep] =
                       oos_embed(insample, augment_for_oos(problem, m1, m2), spec.pipeline.oos).tau;
                   result.taus.unmatched[rep] =
                       oos_embed(insample, augment_for_oos(problem, m1, u2), spec.pipeline.oos).tau;
                 } catch (const std::exception& e) {
                   throw Error("holdout failed at replicate=" + std::to_string(rep) + ": " +
                               e.what());
                 }
               });

  result.roc = roc_curve(result.taus);
  result.auc = empirical_auc(result.taus);
  for (double alpha : spec.alphas) {
    AlphaRow row;
    row.alpha = alpha;
    row.critical_value = bootstrap_critical_value(result.taus.matched, alpha);
    double above = 0.0;
    for (double v : result.taus.matched)
      if (v > row.critical_value) above += 1.0;
    row.size = above / static_cast<double>(spec.replicates);
    row.power = power_at_alpha(result.taus, alpha);
    result.by_alpha.push_back(row);
  }
  return result;
}

}  // namespace jofc
