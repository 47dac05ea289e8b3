#include "jofc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jofc/parallel.hpp"

namespace jofc {

namespace {

void check_values(const std::vector<double>& values, const char* label) {
  if (values.empty()) throw EmptySampleError(std::string("empty ") + label + " sample");
  for (double v : values) {
    if (!std::isfinite(v)) throw NonFiniteInputError(std::string("non-finite ") + label + " statistic");
    if (v < 0.0) throw NegativeEntryError(std::string("negative ") + label + " statistic");
  }
}

double fraction_above(const std::vector<double>& values, double threshold) {
  std::size_t count = 0;
  for (double v : values)
    if (v > threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(values.size());
}

}  // namespace

std::vector<RocPoint> roc_curve(const TestStatisticSample& sample) {
  check_values(sample.matched, "matched");
  check_values(sample.unmatched, "unmatched");

  std::vector<double> thresholds;
  thresholds.reserve(sample.matched.size() + sample.unmatched.size());
  thresholds.insert(thresholds.end(), sample.matched.begin(), sample.matched.end());
  thresholds.insert(thresholds.end(), sample.unmatched.begin(), sample.unmatched.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<double>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<RocPoint> curve;
  curve.reserve(thresholds.size() + 1);
  for (double t : thresholds)
    curve.push_back({fraction_above(sample.matched, t), fraction_above(sample.unmatched, t)});
  curve.push_back({1.0, 1.0});
  return curve;
}

double empirical_auc(const TestStatisticSample& sample) {
  check_values(sample.matched, "matched");
  check_values(sample.unmatched, "unmatched");
  double concordant = 0.0;
  for (double u : sample.unmatched)
    for (double m : sample.matched) {
      if (u > m)
        concordant += 1.0;
      else if (u == m)
        concordant += 0.5;
    }
  return concordant /
         (static_cast<double>(sample.matched.size()) * static_cast<double>(sample.unmatched.size()));
}

double empirical_quantile_exceed(std::vector<double> values, double p) {
  if (values.empty()) throw EmptySampleError("empty sample");
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  // Smallest k with k/n > p, as an order-statistic index.
  std::ptrdiff_t k = static_cast<std::ptrdiff_t>(std::floor(p * static_cast<double>(n))) + 1;
  k = std::clamp<std::ptrdiff_t>(k, 1, n);
  std::nth_element(values.begin(), values.begin() + (k - 1), values.end());
  return values[static_cast<std::size_t>(k - 1)];
}

double power_at_alpha(const TestStatisticSample& sample, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw AlphaOutOfRangeError("alpha must lie in [0,1]");
  check_values(sample.matched, "matched");
  check_values(sample.unmatched, "unmatched");
  const double threshold = empirical_quantile_exceed(sample.matched, 1.0 - alpha);
  return fraction_above(sample.unmatched, threshold);
}

double bootstrap_critical_value(const std::vector<double>& matched_taus, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw AlphaOutOfRangeError("alpha must lie in (0,1)");
  check_values(matched_taus, "matched");
  return empirical_quantile_exceed(matched_taus, 1.0 - alpha);
}

WSweepResult sweep_w(const std::vector<double>& grid, int replicates,
                     const SamplePipeline& pipeline, int workers) {
  if (grid.empty()) throw Error("empty w grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0))
      throw WOutOfRangeError("grid values must lie strictly between 0 and 1");
    if (i > 0 && grid[i] <= grid[i - 1]) throw Error("w grid must be strictly increasing");
  }
  if (replicates < 1) throw Error("need at least one replicate");

  WSweepResult result;
  result.grid = grid;
  result.auc_by_replicate.assign(grid.size(),
                                 std::vector<double>(static_cast<std::size_t>(replicates), 0.0));

  const std::size_t cells = grid.size() * static_cast<std::size_t>(replicates);
  parallel_for(cells, workers, [&](std::size_t cell) {
    const std::size_t wi = cell / static_cast<std::size_t>(replicates);
    const int rep = static_cast<int>(cell % static_cast<std::size_t>(replicates));
    try {
      result.auc_by_replicate[wi][static_cast<std::size_t>(rep)] =
          empirical_auc(pipeline(grid[wi], rep));
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "sweep failed at w=" << grid[wi] << ", replicate=" << rep << ": " << e.what();
      throw Error(msg.str());
    }
  });

  result.auc_mean.resize(grid.size());
  result.auc_se.resize(grid.size());
  for (std::size_t wi = 0; wi < grid.size(); ++wi) {
    const auto& col = result.auc_by_replicate[wi];
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= static_cast<double>(col.size());
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    result.auc_mean[wi] = mean;
    result.auc_se[wi] =
        col.size() > 1 ? std::sqrt(var / static_cast<double>(col.size() - 1) /
                                   static_cast<double>(col.size()))
                       : 0.0;
  }

  std::size_t best = 0;
  for (std::size_t wi = 1; wi < grid.size(); ++wi)
    if (result.auc_mean[wi] > result.auc_mean[best]) best = wi;
  result.w_star_estimate = grid[best];

  result.per_replicate_argmax.assign(grid.size(), 0);
  for (int rep = 0; rep < replicates; ++rep) {
    std::size_t arg = 0;
    for (std::size_t wi = 1; wi < grid.size(); ++wi)
      if (result.auc_by_replicate[wi][static_cast<std::size_t>(rep)] >
          result.auc_by_replicate[arg][static_cast<std::size_t>(rep)])
        arg = wi;
    ++result.per_replicate_argmax[arg];
  }
  return result;
}

}  // namespace jofc
