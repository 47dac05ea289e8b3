#pragma once

#include <Eigen/Dense>

#include "jofc/errors.hpp"

namespace jofc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Square symmetric hollow nonnegative dissimilarity matrix with an optional
/// mask of unavailable entries. Immutable by convention once built.
struct DissimilarityMatrix {
  Matrix entries;       // n x n; masked slots hold 0 and must not be read
  BoolMatrix missing;   // n x n, symmetric, false on the diagonal

  Eigen::Index size() const { return entries.rows(); }
  bool is_missing(Eigen::Index i, Eigen::Index j) const { return missing(i, j); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries(i, j); }

  static DissimilarityMatrix complete(Matrix m);
  static DissimilarityMatrix with_mask(Matrix m, BoolMatrix mask);
};

/// Symmetric hollow nonnegative weight matrix for the raw stress criterion.
struct WeightMatrix {
  Matrix entries;

  Eigen::Index size() const { return entries.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries(i, j); }

  static WeightMatrix uniform(Eigen::Index n, double value = 1.0);

  /// True when the graph of strictly positive weights is connected.
  bool positive_graph_connected() const;
};

/// Embedded point configuration. Canonical form is column-centered; raw
/// stress is translation invariant so centering fixes the representative.
struct Configuration {
  Matrix points;  // n_points x d

  Eigen::Index n_points() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

/// Subtracts each column mean in place.
void center_columns(Matrix& m);

/// Pairwise Euclidean distances between the rows of x.
Matrix pairwise_distances(const Matrix& x);

/// Validates a raw square matrix as a dissimilarity matrix. Entries (a,b) and
/// (b,a) differing by at most `symmetrize_tol * max(1, |a|, |b|)` are averaged;
/// larger gaps raise AsymmetryError. All-true diagonal must be zero within the
/// same tolerance and the mask must be symmetric.
DissimilarityMatrix validate_dissimilarity(const Matrix& raw, double symmetrize_tol = 1e-9);
DissimilarityMatrix validate_dissimilarity(const Matrix& raw, const BoolMatrix& mask,
                                           double symmetrize_tol = 1e-9);

/// Frobenius norm over available entries only.
double masked_frobenius_norm(const DissimilarityMatrix& d);

/// Scales so the (mask-aware) Frobenius norm is 1. Throws AllZeroError when
/// every available entry is zero.
DissimilarityMatrix normalize_frobenius(const DissimilarityMatrix& d);

/// Dissimilarity matrix of Euclidean distances between the rows of points.
DissimilarityMatrix euclidean_dissimilarity(const Matrix& points);

}  // namespace jofc
