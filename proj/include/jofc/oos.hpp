#pragma once

#include "jofc/omnibus.hpp"
#include "jofc/solver.hpp"

namespace jofc {

struct OosSettings {
  SolverSettings solver;
  /// Total restricted solves per embedding: one from the barycenter start
  /// plus multistarts-1 jittered starts. Best final stress wins, ties going
  /// to the earlier start.
  int multistarts = 5;
  std::uint64_t jitter_seed = 0;
  /// After the restricted solve, re-minimize over all rows jointly. The
  /// in-sample rows then move, so fixity no longer holds; off by default.
  bool joint_refinement = false;
};

struct OosResult {
  Vector y1;
  Vector y2;
  double tau = 0.0;
  std::vector<double> stress_trace;  // winning start; refinement appended if enabled
  Matrix configuration;              // full configuration including the new rows
};

/// Embeds the augmented problem's two new points against the fixed in-sample
/// configuration by minimizing restricted weighted raw stress, and reports
/// tau, the distance between them.
OosResult oos_embed(const Configuration& insample, const OmnibusProblem& augmented,
                    const OosSettings& settings = {});

/// Distance between the embedded pair.
double test_statistic(const OosResult& result);

/// Embeds one new point into a fixed set of anchor points given its target
/// dissimilarities and per-anchor weights. Same multistart scheme as
/// oos_embed. Used by the Procrustes baseline.
struct SinglePointResult {
  Vector point;
  double stress = 0.0;
  std::vector<double> stress_trace;
};
SinglePointResult embed_single_point(const Matrix& anchors, const Vector& targets,
                                     const Vector& weights, const OosSettings& settings = {});

}  // namespace jofc
