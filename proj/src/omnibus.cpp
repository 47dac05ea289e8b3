#include "jofc/omnibus.hpp"

#include <cmath>

namespace jofc {

namespace {

void set_sym(Matrix& m, Eigen::Index i, Eigen::Index j, double v) {
  m(i, j) = v;
  m(j, i) = v;
}

void set_sym(BoolMatrix& m, Eigen::Index i, Eigen::Index j, bool v) {
  m(i, j) = v;
  m(j, i) = v;
}

}  // namespace

OmnibusProblem build_omnibus(const DissimilarityMatrix& d1, const DissimilarityMatrix& d2,
                             double w, const OmnibusOptions& options) {
  const Eigen::Index n = d1.size();
  if (d2.size() != n) throw SizeMismatchError("conditions have different object counts");
  if (n < 1) throw SizeMismatchError("need at least one object");
  if (!(w > 0.0 && w < 1.0)) throw WOutOfRangeError("w must lie strictly between 0 and 1");

  OmnibusProblem p;
  p.w = w;
  p.policy = options.policy;
  p.index = BlockIndex{n, false};

  DissimilarityMatrix a = d1;
  DissimilarityMatrix b = d2;
  if (options.auto_normalize) {
    p.normalization1 = masked_frobenius_norm(d1);
    p.normalization2 = masked_frobenius_norm(d2);
    a = normalize_frobenius(d1);
    b = normalize_frobenius(d2);
  }

  const Eigen::Index size = 2 * n;
  Matrix m = Matrix::Zero(size, size);
  BoolMatrix missing = BoolMatrix::Constant(size, size, false);
  Matrix weights = Matrix::Zero(size, size);

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // Within-condition blocks carry the inputs; a masked input entry keeps
      // weight 0 so it never enters the objective.
      if (a.is_missing(i, j)) {
        set_sym(missing, i, j, true);
      } else {
        set_sym(m, i, j, a(i, j));
        set_sym(weights, i, j, 1.0 - w);
      }
      if (b.is_missing(i, j)) {
        set_sym(missing, n + i, n + j, true);
      } else {
        set_sym(m, n + i, n + j, b(i, j));
        set_sym(weights, n + i, n + j, 1.0 - w);
      }
      // Cross-condition, distinct objects: the separability class.
      bool fill = options.policy == ImputationPolicy::mean_impute && !a.is_missing(i, j) &&
                  !b.is_missing(i, j);
      if (fill) {
        const double imputed = 0.5 * (a(i, j) + b(i, j));
        set_sym(m, i, n + j, imputed);
        set_sym(m, j, n + i, imputed);
        set_sym(weights, i, n + j, options.separability_weight);
        set_sym(weights, j, n + i, options.separability_weight);
      } else {
        set_sym(missing, i, n + j, true);
        set_sym(missing, j, n + i, true);
      }
    }
    // Matched pair: target 0, weight w.
    set_sym(m, i, n + i, 0.0);
    set_sym(weights, i, n + i, w);
  }

  p.m = DissimilarityMatrix{std::move(m), std::move(missing)};
  p.weights = WeightMatrix{std::move(weights)};
  return p;
}

OmnibusProblem augment_for_oos(const OmnibusProblem& problem, const Vector& d1, const Vector& d2) {
  const Eigen::Index n = problem.index.n;
  if (problem.index.augmented) throw SizeMismatchError("problem is already augmented");
  if (d1.size() != n || d2.size() != n)
    throw LengthMismatchError("test profiles must have one entry per in-sample object");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(d1[i]) || !std::isfinite(d2[i]))
      throw NonFiniteInputError("non-finite test dissimilarity");
    if (d1[i] < 0.0 || d2[i] < 0.0) throw NegativeEntryError("negative test dissimilarity");
  }

  const Eigen::Index size = 2 * n + 2;
  Matrix m = Matrix::Zero(size, size);
  BoolMatrix missing = BoolMatrix::Constant(size, size, false);
  Matrix weights = Matrix::Zero(size, size);
  m.topLeftCorner(2 * n, 2 * n) = problem.m.entries;
  missing.topLeftCorner(2 * n, 2 * n) = problem.m.missing;
  weights.topLeftCorner(2 * n, 2 * n) = problem.weights.entries;

  const Eigen::Index r1 = 2 * n;      // new point, condition 1
  const Eigen::Index r2 = 2 * n + 1;  // new point, condition 2
  for (Eigen::Index j = 0; j < n; ++j) {
    set_sym(m, r1, j, d1[j] / problem.normalization1);
    set_sym(weights, r1, j, 1.0 - problem.w);
    set_sym(missing, r1, n + j, true);

    set_sym(m, r2, n + j, d2[j] / problem.normalization2);
    set_sym(weights, r2, n + j, 1.0 - problem.w);
    set_sym(missing, r2, j, true);
  }
  // The pair under test: unavailable by construction, weight 0, so the two
  // embeddings are tied only through the in-sample points.
  set_sym(missing, r1, r2, true);

  OmnibusProblem out = problem;
  out.index.augmented = true;
  out.m = DissimilarityMatrix{std::move(m), std::move(missing)};
  out.weights = WeightMatrix{std::move(weights)};
  return out;
}

StressComponents stress_components(const Configuration& x, const OmnibusProblem& problem) {
  const Eigen::Index size = problem.index.rows();
  if (x.n_points() != size) throw SizeMismatchError("configuration does not match the problem");
  StressComponents out;
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = i + 1; j < size; ++j) {
      const double wij = problem.weights(i, j);
      if (wij == 0.0) continue;
      if (problem.m.is_missing(i, j))
        throw PositiveWeightOnMissingError("positive weight on a missing entry");
      const double d = (x.points.row(i) - x.points.row(j)).norm();
      const double r = d - problem.m(i, j);
      const double term = wij * r * r;
      const bool same_condition = problem.index.condition_of(i) == problem.index.condition_of(j);
      const bool same_object = problem.index.object_of(i) == problem.index.object_of(j);
      if (same_condition)
        out.fidelity += term;
      else if (same_object)
        out.commensurability += term;
      else
        out.separability += term;
    }
  }
  return out;
}

double fidelity_error(const Configuration& x, const DissimilarityMatrix& delta_k, int condition) {
  if (condition != 1 && condition != 2) throw SizeMismatchError("condition must be 1 or 2");
  const Eigen::Index n = delta_k.size();
  if (x.n_points() != 2 * n) throw SizeMismatchError("configuration must have 2n rows");
  if (n < 2) throw SizeMismatchError("need at least two objects");
  const Eigen::Index offset = condition == 2 ? n : 0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (delta_k.is_missing(i, j)) continue;
      const double d = (x.points.row(offset + i) - x.points.row(offset + j)).norm();
      const double r = d - delta_k(i, j);
      sum += r * r;
    }
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double commensurability_error(const Configuration& x) {
  if (x.n_points() % 2 != 0) throw SizeMismatchError("configuration must have 2n rows");
  const Eigen::Index n = x.n_points() / 2;
  if (n < 1) throw SizeMismatchError("need at least one object");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    sum += (x.points.row(i) - x.points.row(n + i)).squaredNorm();
  return sum / static_cast<double>(n);
}

}  // namespace jofc
