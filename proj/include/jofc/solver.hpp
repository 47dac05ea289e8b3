#pragma once

#include <cstdint>
#include <vector>

#include "jofc/core.hpp"

namespace jofc {

struct SolverSettings {
  int max_iterations = 1000;
  double relative_tolerance = 1e-7;  // on relative stress decrease
  enum class Init { classical_mds, given, random };
  Init init = Init::classical_mds;
  std::uint64_t random_seed = 0;  // for Init::random
  // Distances at or below this are treated as zero in the majorizer (the
  // corresponding coefficient is set to 0, the subgradient choice).
  double zero_distance_epsilon = 0.0;
};

struct SolveResult {
  Configuration configuration;
  std::vector<double> stress_trace;  // stress of the initial and each iterate
  int iterations = 0;
  bool converged = false;
};

/// Weighted raw stress: sum over i<j of w_ij (d(x_i,x_j) - delta_ij)^2.
/// Masked entries must carry zero weight.
double raw_stress(const Configuration& x, const DissimilarityMatrix& delta, const WeightMatrix& w);

/// One Guttman-transform majorization step; never increases raw stress.
/// The returned configuration is column-centered.
Configuration guttman_step(const Configuration& x, const DissimilarityMatrix& delta,
                           const WeightMatrix& w, double zero_distance_epsilon = 0.0);

/// Iterates the Guttman transform from the chosen initialization until the
/// relative stress decrease falls at or below the tolerance.
SolveResult smacof(const DissimilarityMatrix& delta, const WeightMatrix& w, Eigen::Index dim,
                   const SolverSettings& settings = {}, const Configuration* initial = nullptr);

/// Torgerson double-centering initialization. Missing entries are filled with
/// the mean available off-diagonal value, for initialization only. Negative
/// eigenvalues are truncated to zero.
Configuration classical_mds_init(const DissimilarityMatrix& delta, Eigen::Index dim);

/// Eigenvalues of the double-centered squared-dissimilarity matrix, in
/// descending order. Feed to select_dimension_elbow for a scree-based choice.
std::vector<double> double_centered_spectrum(const DissimilarityMatrix& delta);

/// Scree elbow by two-group Gaussian profile log-likelihood: returns the split
/// index (1-based dimension) maximizing it, ties broken toward the smaller
/// dimension. Requires at least 2 values.
Eigen::Index select_dimension_elbow(const std::vector<double>& eigenvalues);

// --- Restricted (anchored) solve -------------------------------------------
// Only the listed rows move; the rest of x0 are fixed anchors. Used for
// out-of-sample embedding. The trace records the restricted stress, i.e. the
// stress terms involving at least one free row.

struct RestrictedResult {
  Matrix points;  // full configuration, anchor rows bitwise equal to x0
  std::vector<double> stress_trace;
  int iterations = 0;
  bool converged = false;
};

double restricted_stress(const Matrix& x, const DissimilarityMatrix& delta, const WeightMatrix& w,
                         const std::vector<Eigen::Index>& free_rows);

RestrictedResult restricted_smacof(const Matrix& x0, const DissimilarityMatrix& delta,
                                   const WeightMatrix& w, const std::vector<Eigen::Index>& free_rows,
                                   const SolverSettings& settings = {});

}  // namespace jofc
