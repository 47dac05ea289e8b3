#pragma once

#include "jofc/oos.hpp"
#include "jofc/solver.hpp"

namespace jofc {

/// Least-squares orthogonal alignment a -> scale * Q (a - source_center) +
/// target_center. Q ranges over the full orthogonal group; embeddings carry
/// arbitrary chirality, so reflections are legitimate.
struct ProcrustesMap {
  Matrix rotation;
  Vector source_center;
  Vector target_center;
  double scale = 1.0;
  double residual = 0.0;  // sum of squared gaps at the fitted points

  Vector operator()(const Vector& a) const;
  Matrix apply_rows(const Matrix& a) const;
};

/// Fits the map minimizing sum_i ||map(a_i) - b_i||^2, via the SVD of the
/// centered cross-covariance. Uniform scale is fitted only when allow_scale
/// is set; the default assumes both point sets come from matrices already
/// normalized to unit Frobenius norm.
ProcrustesMap fit_procrustes(const Matrix& a, const Matrix& b, bool allow_scale = false);

/// Procrustes-matching baseline: embed each condition separately with
/// uniform-weight raw-stress MDS, then align space 1 onto space 2 using the
/// matched training pairs.
struct PrmModel {
  Configuration embedding1;
  Configuration embedding2;
  ProcrustesMap alignment;  // space 1 -> space 2
};

PrmModel fit_prm(const DissimilarityMatrix& delta1, const DissimilarityMatrix& delta2,
                 Eigen::Index dim, const OosSettings& settings = {}, bool allow_scale = false);

struct PrmResult {
  Vector y1_mapped;  // condition-1 test point carried into space 2
  Vector y2;
  double tau = 0.0;
};

/// Embeds one test profile per condition as a single new point against that
/// condition's embedding, maps the first into the second space, and reports
/// the distance between them.
PrmResult prm_test(const PrmModel& model, const Vector& d1, const Vector& d2,
                   const OosSettings& settings = {});

/// One-shot convenience: fit_prm then a single test pair.
PrmResult prm_pipeline(const DissimilarityMatrix& delta1, const DissimilarityMatrix& delta2,
                       const Vector& d1, const Vector& d2, Eigen::Index dim,
                       const OosSettings& settings = {});

}  // namespace jofc
