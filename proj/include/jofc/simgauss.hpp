#pragma once

#include <string>
#include <vector>

#include "jofc/core.hpp"

namespace jofc {

enum class SigmaForm { isotropic, random_psd };

/// Latent-object Gaussian generator: objects alpha_i ~ N(0, I_p), condition
/// measurements x_ik ~ N(alpha_i, Sigma) with lambda_max(Sigma) = 1/r. Larger
/// r means less measurement noise and an easier matching problem.
struct GaussianSettingParams {
  Eigen::Index n = 150;  // training pairs
  Eigen::Index m = 250;  // test pairs per hypothesis
  Eigen::Index p = 5;    // ambient dimension
  double r = 10.0;
  SigmaForm sigma_form = SigmaForm::isotropic;
  std::uint64_t sigma_seed = 0;  // spectrum/basis draw for random_psd
  std::uint64_t seed = 0;        // trial stream
};

/// Measurement covariance with maximum eigenvalue exactly 1/r.
Matrix make_sigma(Eigen::Index p, double r, SigmaForm form, std::uint64_t seed);

/// One test pair: distances from the two test measurements to all n training
/// measurements in their respective conditions.
struct TestPair {
  Vector d1;
  Vector d2;
};

struct Trial {
  DissimilarityMatrix delta1;
  DissimilarityMatrix delta2;
  std::vector<TestPair> matched;
  std::vector<TestPair> unmatched;
  // Raw measurements, kept for moment diagnostics: rows are objects/tests.
  Matrix training1, training2;
  Matrix matched1, matched2;
  Matrix unmatched1, unmatched2;
};

/// Draws a full trial from a single stream seeded by params.seed. Draw order
/// is part of the contract (phases A..E, see the implementation) so that
/// replays and paired designs are stable across code changes elsewhere.
Trial sample_trial(const GaussianSettingParams& params);

/// Writes delta1.csv, delta2.csv, matched_1.csv, matched_2.csv,
/// unmatched_1.csv, unmatched_2.csv into dir (test profiles one row per pair).
void dump_trial_csv(const Trial& trial, const std::string& dir);

}  // namespace jofc
