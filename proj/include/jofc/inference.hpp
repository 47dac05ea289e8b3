#pragma once

#include <functional>
#include <vector>

#include "jofc/core.hpp"

namespace jofc {

/// Test statistics collected under both hypotheses. The matched list plays
/// the role of the null distribution; large values reject.
struct TestStatisticSample {
  std::vector<double> matched;
  std::vector<double> unmatched;
};

struct RocPoint {
  double alpha = 0.0;  // false positive rate: matched statistics above threshold
  double beta = 0.0;   // detection rate: unmatched statistics above threshold
};

/// Empirical ROC traced by sweeping the threshold over every distinct pooled
/// value, highest first, with a final (1,1) endpoint. Both coordinates are
/// non-decreasing along the curve.
std::vector<RocPoint> roc_curve(const TestStatisticSample& sample);

/// Concordance probability P(unmatched > matched) with ties counted half.
/// Equals the trapezoidal area under roc_curve.
double empirical_auc(const TestStatisticSample& sample);

/// Fraction of unmatched statistics strictly above the empirical (1-alpha)
/// quantile of the matched statistics.
double power_at_alpha(const TestStatisticSample& sample, double alpha);

/// Empirical (1-alpha) quantile of a null statistic sample.
double bootstrap_critical_value(const std::vector<double>& matched_taus, double alpha);

/// Right-continuous empirical inverse CDF: smallest order statistic whose CDF
/// value exceeds p. The quantile convention shared by power_at_alpha and
/// bootstrap_critical_value.
double empirical_quantile_exceed(std::vector<double> values, double p);

struct WSweepResult {
  std::vector<double> grid;
  std::vector<std::vector<double>> auc_by_replicate;  // [grid index][replicate]
  std::vector<double> auc_mean;
  std::vector<double> auc_se;
  double w_star_estimate = 0.0;
  std::vector<int> per_replicate_argmax;  // histogram aligned with grid
};

/// Produces the statistic sample for one (w, replicate) cell. The pipeline
/// must derive all randomness from the replicate index alone so that every w
/// sees the same data (paired design).
using SamplePipeline = std::function<TestStatisticSample(double w, int replicate)>;

/// Evaluates AUC over a w grid with paired replicates. Cells run in parallel;
/// aggregation reads results in index order, so output is independent of
/// scheduling. Ties in either argmax break toward smaller w.
WSweepResult sweep_w(const std::vector<double>& grid, int replicates,
                     const SamplePipeline& pipeline, int workers = 1);

}  // namespace jofc
