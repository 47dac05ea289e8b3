#pragma once

#include "jofc/core.hpp"

namespace jofc {

/// Handling of the unavailable cross-condition entries between distinct
/// objects (the separability class).
enum class ImputationPolicy {
  ignore_missing,  // leave them masked with weight 0
  mean_impute,     // fill with the mean of the two within-condition values
};

/// Maps (object, condition) pairs to rows of the joint matrix and back.
/// Rows 0..n-1 are condition 1, rows n..2n-1 condition 2; an augmented
/// problem appends one row per condition for the point under test, addressed
/// as object index n.
struct BlockIndex {
  Eigen::Index n = 0;
  bool augmented = false;

  Eigen::Index rows() const { return 2 * n + (augmented ? 2 : 0); }

  Eigen::Index row(Eigen::Index object, int condition) const {
    if (condition < 1 || condition > 2) throw SizeMismatchError("condition must be 1 or 2");
    if (object < 0 || object > n || (object == n && !augmented))
      throw SizeMismatchError("object index out of range");
    if (object == n) return 2 * n + (condition - 1);
    return object + (condition == 2 ? n : 0);
  }

  Eigen::Index object_of(Eigen::Index r) const {
    if (r < 0 || r >= rows()) throw SizeMismatchError("row index out of range");
    if (r >= 2 * n) return n;
    return r < n ? r : r - n;
  }

  int condition_of(Eigen::Index r) const {
    if (r < 0 || r >= rows()) throw SizeMismatchError("row index out of range");
    if (r >= 2 * n) return r == 2 * n ? 1 : 2;
    return r < n ? 1 : 2;
  }
};

/// The joint embedding problem: dissimilarity target matrix, weights
/// implementing the fidelity/commensurability tradeoff, and the scale factors
/// that were divided out of each condition's input.
struct OmnibusProblem {
  DissimilarityMatrix m;
  WeightMatrix weights;
  BlockIndex index;
  double w = 0.5;
  ImputationPolicy policy = ImputationPolicy::ignore_missing;
  double normalization1 = 1.0;  // divisor applied to condition-1 dissimilarities
  double normalization2 = 1.0;
};

struct OmnibusOptions {
  ImputationPolicy policy = ImputationPolicy::ignore_missing;
  /// Divide each input by its Frobenius norm and remember the factors.
  bool auto_normalize = false;
  /// Weight given to mean-imputed separability entries. Zero reproduces the
  /// reference objective; nonzero values are experimental.
  double separability_weight = 0.0;
};

/// Assembles the 2n x 2n joint problem. Matched cross-condition pairs get
/// target 0 and weight w; within-condition pairs keep their dissimilarities
/// with weight 1-w; cross-condition pairs of distinct objects follow the
/// imputation policy.
OmnibusProblem build_omnibus(const DissimilarityMatrix& d1, const DissimilarityMatrix& d2,
                             double w, const OmnibusOptions& options = {});

/// Appends the test pair's dissimilarity profiles as two extra rows. The
/// profiles are divided by the problem's stored normalization factors. The
/// in-sample blocks are copied unchanged, the new points see their own
/// condition with weight 1-w, and the entry between the two new points is
/// unavailable with weight 0.
OmnibusProblem augment_for_oos(const OmnibusProblem& problem, const Vector& d1, const Vector& d2);

struct StressComponents {
  double fidelity = 0.0;
  double commensurability = 0.0;
  double separability = 0.0;
  double total() const { return fidelity + commensurability + separability; }
};

/// Splits the weighted raw stress by pair class: same condition (fidelity),
/// same object across conditions (commensurability), distinct objects across
/// conditions (separability).
StressComponents stress_components(const Configuration& x, const OmnibusProblem& problem);

/// Mean squared distortion of condition k's dissimilarities in the joint
/// configuration, averaged over the C(n,2) object pairs.
double fidelity_error(const Configuration& x, const DissimilarityMatrix& delta_k, int condition);

/// Mean squared distance between matched points, averaged over the n objects.
double commensurability_error(const Configuration& x);

}  // namespace jofc
