#include "jofc/oos.hpp"

#include <algorithm>
#include <cmath>

#include "jofc/rng.hpp"

namespace jofc {

namespace {

// Weighted barycenter of the anchors this row is tied to, with weights
// decaying in the target dissimilarity: nearby anchors pull harder. Cheap,
// deterministic, and always inside the anchors' convex hull.
Vector barycenter_start(const Matrix& x, const DissimilarityMatrix& m, const WeightMatrix& w,
                        Eigen::Index row) {
  std::vector<double> targets;
  std::vector<Eigen::Index> anchors;
  for (Eigen::Index j = 0; j < m.size(); ++j) {
    if (j == row || w(row, j) == 0.0) continue;
    anchors.push_back(j);
    targets.push_back(m(row, j));
  }
  if (anchors.empty()) throw DisconnectedFreePointError("new point has no positive weights");

  std::vector<double> sorted = targets;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double guard =
      1e-12 * (1.0 + *std::max_element(targets.begin(), targets.end()));

  Vector y = Vector::Zero(x.cols());
  double total = 0.0;
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    const double u = 1.0 / (targets[a] + median + guard);
    y += u * x.row(anchors[a]).transpose();
    total += u;
  }
  return y / total;
}

// Per-coordinate jitter scale tied to the spread of the existing points.
double jitter_scale(const Matrix& insample) {
  return 0.25 * std::sqrt(insample.squaredNorm() /
                          static_cast<double>(std::max<Eigen::Index>(insample.rows(), 1)));
}

// One jitter stream per (free row, start): the same row gets the same jitter
// whether it is solved jointly with the other new point or alone.
Vector jitter(std::uint64_t seed, Eigen::Index row, int start, Eigen::Index d, double scale) {
  Rng rng(derive_seed(derive_seed(seed, static_cast<std::uint64_t>(row)),
                      static_cast<std::uint64_t>(start)));
  Vector v(d);
  for (Eigen::Index k = 0; k < d; ++k) v[k] = scale * rng.normal();
  return v;
}

struct MultistartOutcome {
  Matrix points;
  double stress = 0.0;
  std::vector<double> trace;
};

MultistartOutcome multistart_restricted(const Matrix& x0, const DissimilarityMatrix& m,
                                        const WeightMatrix& w,
                                        const std::vector<Eigen::Index>& free_rows,
                                        const OosSettings& settings, double scale) {
  const int starts = std::max(settings.multistarts, 1);
  MultistartOutcome best;
  bool have = false;
  for (int s = 0; s < starts; ++s) {
    Matrix start = x0;
    if (s > 0)
      for (Eigen::Index f : free_rows)
        start.row(f) += jitter(settings.jitter_seed, f, s, x0.cols(), scale).transpose();
    RestrictedResult r = restricted_smacof(start, m, w, free_rows, settings.solver);
    const double final_stress = r.stress_trace.back();
    if (!have || final_stress < best.stress) {
      best.points = std::move(r.points);
      best.stress = final_stress;
      best.trace = std::move(r.stress_trace);
      have = true;
    }
  }
  return best;
}

}  // namespace

OosResult oos_embed(const Configuration& insample, const OmnibusProblem& augmented,
                    const OosSettings& settings) {
  if (!augmented.index.augmented)
    throw SizeMismatchError("problem has no out-of-sample rows; call augment_for_oos first");
  const Eigen::Index n2 = 2 * augmented.index.n;
  if (insample.n_points() != n2)
    throw SizeMismatchError("in-sample configuration does not match the problem");
  if (!insample.points.allFinite()) throw NonFiniteInputError("non-finite configuration");
  const Eigen::Index d = insample.dim();
  const Eigen::Index r1 = n2;
  const Eigen::Index r2 = n2 + 1;

  Matrix x0(n2 + 2, d);
  x0.topRows(n2) = insample.points;
  x0.row(r1) = barycenter_start(x0, augmented.m, augmented.weights, r1).transpose();
  x0.row(r2) = barycenter_start(x0, augmented.m, augmented.weights, r2).transpose();

  const double scale = jitter_scale(insample.points);
  MultistartOutcome best =
      multistart_restricted(x0, augmented.m, augmented.weights, {r1, r2}, settings, scale);

  OosResult out;
  out.configuration = std::move(best.points);
  out.stress_trace = std::move(best.trace);

  if (settings.joint_refinement) {
    const Configuration init{out.configuration};
    SolveResult refined = smacof(augmented.m, augmented.weights, d, settings.solver, &init);
    out.configuration = std::move(refined.configuration.points);
    out.stress_trace.insert(out.stress_trace.end(), refined.stress_trace.begin(),
                            refined.stress_trace.end());
  }

  out.y1 = out.configuration.row(r1).transpose();
  out.y2 = out.configuration.row(r2).transpose();
  out.tau = (out.y1 - out.y2).norm();
  return out;
}

double test_statistic(const OosResult& result) { return (result.y1 - result.y2).norm(); }

SinglePointResult embed_single_point(const Matrix& anchors, const Vector& targets,
                                     const Vector& weights, const OosSettings& settings) {
  const Eigen::Index n = anchors.rows();
  if (targets.size() != n || weights.size() != n)
    throw LengthMismatchError("need one target and one weight per anchor");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(targets[i]) || !std::isfinite(weights[i]))
      throw NonFiniteInputError("non-finite target or weight");
    if (targets[i] < 0.0) throw NegativeEntryError("negative target dissimilarity");
    if (weights[i] < 0.0) throw Error("negative weight");
  }

  const Eigen::Index size = n + 1;
  Matrix m = Matrix::Zero(size, size);
  BoolMatrix missing = BoolMatrix::Constant(size, size, false);
  Matrix w = Matrix::Zero(size, size);
  // Anchor-anchor entries never enter a restricted solve over the last row;
  // mark them unavailable so no accidental weight can reach them.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) missing(i, j) = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, n) = m(n, i) = targets[i];
    w(i, n) = w(n, i) = weights[i];
  }
  const DissimilarityMatrix dm{std::move(m), std::move(missing)};
  const WeightMatrix wm{std::move(w)};

  Matrix x0(size, anchors.cols());
  x0.topRows(n) = anchors;
  x0.row(n) = barycenter_start(x0, dm, wm, n).transpose();

  MultistartOutcome best =
      multistart_restricted(x0, dm, wm, {n}, settings, jitter_scale(anchors));

  SinglePointResult out;
  out.point = best.points.row(n).transpose();
  out.stress = best.stress;
  out.stress_trace = std::move(best.trace);
  return out;
}

}  // namespace jofc
