#include "jofc/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "jofc/rng.hpp"

namespace jofc {

namespace {

struct Edge {
  Eigen::Index i, j;
  double weight;
  double target;
};

// Collects the positive-weight upper-triangle pairs once; iteration cost then
// scales with the number of active terms rather than n^2 when W is sparse.
std::vector<Edge> collect_edges(const DissimilarityMatrix& delta, const WeightMatrix& w) {
  const Eigen::Index n = delta.size();
  if (w.size() != n) throw SizeMismatchError("weight matrix size does not match dissimilarities");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double wij = w(i, j);
      if (wij == 0.0) continue;
      if (wij < 0.0) throw Error("negative weight");
      if (delta.is_missing(i, j))
        throw PositiveWeightOnMissingError("positive weight on a missing dissimilarity");
      edges.push_back({i, j, wij, delta(i, j)});
    }
  }
  return edges;
}

double stress_over_edges(const Matrix& x, const std::vector<Edge>& edges) {
  double s = 0.0;
  for (const Edge& e : edges) {
    const double d = (x.row(e.i) - x.row(e.j)).norm();
    const double r = d - e.target;
    s += e.weight * r * r;
  }
  return s;
}

// Moore-Penrose pseudo-inverse of the symmetric PSD weight Laplacian.
Matrix laplacian_pinv(const Matrix& v) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(v);
  if (es.info() != Eigen::Success) throw NoProgressError("eigendecomposition failed");
  const Vector& lambda = es.eigenvalues();
  const double cutoff = lambda.cwiseAbs().maxCoeff() * 1e-12;
  Vector inv = Vector::Zero(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
    if (lambda[k] > cutoff) inv[k] = 1.0 / lambda[k];
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Matrix weight_laplacian(const WeightMatrix& w) {
  const Eigen::Index n = w.size();
  Matrix v = -w.entries;
  v.diagonal().setZero();
  for (Eigen::Index i = 0; i < n; ++i) v(i, i) = -v.row(i).sum();
  return v;
}

// B(Z) Z accumulated over edges: row i receives sum_j (w delta / d)(z_i - z_j).
Matrix majorizer_product(const Matrix& z, const std::vector<Edge>& edges, double zero_eps) {
  Matrix bz = Matrix::Zero(z.rows(), z.cols());
  for (const Edge& e : edges) {
    const auto diff = z.row(e.i) - z.row(e.j);
    const double d = diff.norm();
    if (d <= zero_eps) continue;
    const double c = e.weight * e.target / d;
    bz.row(e.i) += c * diff;
    bz.row(e.j) -= c * diff;
  }
  return bz;
}

Matrix initial_configuration(const DissimilarityMatrix& delta, Eigen::Index dim,
                             const SolverSettings& settings, const Configuration* initial) {
  // A supplied starting configuration always wins over the init policy.
  if (initial != nullptr) {
    if (initial->n_points() != delta.size() || initial->dim() != dim)
      throw SizeMismatchError("initial configuration has the wrong shape");
    Matrix x = initial->points;
    center_columns(x);
    return x;
  }
  switch (settings.init) {
    case SolverSettings::Init::given:
      throw Error("init=given requires an initial configuration");
    case SolverSettings::Init::random: {
      Rng rng(settings.random_seed);
      Matrix x(delta.size(), dim);
      for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal();
      center_columns(x);
      return x;
    }
    case SolverSettings::Init::classical_mds:
    default:
      return classical_mds_init(delta, dim).points;
  }
}

}  // namespace

double raw_stress(const Configuration& x, const DissimilarityMatrix& delta, const WeightMatrix& w) {
  if (x.n_points() != delta.size())
    throw SizeMismatchError("configuration size does not match dissimilarities");
  const auto edges = collect_edges(delta, w);
  return stress_over_edges(x.points, edges);
}

Configuration guttman_step(const Configuration& x, const DissimilarityMatrix& delta,
                           const WeightMatrix& w, double zero_distance_epsilon) {
  if (x.n_points() != delta.size())
    throw SizeMismatchError("configuration size does not match dissimilarities");
  if (!w.positive_graph_connected())
    throw DisconnectedWeightsError("positive-weight graph is not connected");
  const auto edges = collect_edges(delta, w);
  const Matrix pinv = laplacian_pinv(weight_laplacian(w));
  Matrix next = pinv * majorizer_product(x.points, edges, zero_distance_epsilon);
  center_columns(next);
  return Configuration{std::move(next)};
}

SolveResult smacof(const DissimilarityMatrix& delta, const WeightMatrix& w, Eigen::Index dim,
                   const SolverSettings& settings, const Configuration* initial) {
  if (dim < 1) throw Error("embedding dimension must be at least 1");
  if (!w.positive_graph_connected())
    throw DisconnectedWeightsError("positive-weight graph is not connected");
  const auto edges = collect_edges(delta, w);
  const Matrix pinv = laplacian_pinv(weight_laplacian(w));

  Matrix x = initial_configuration(delta, dim, settings, initial);
  SolveResult result;
  double stress = stress_over_edges(x, edges);
  if (!std::isfinite(stress)) throw NoProgressError("non-finite stress at initialization");
  result.stress_trace.push_back(stress);

  for (int it = 0; it < settings.max_iterations; ++it) {
    if (stress == 0.0) {
      result.converged = true;
      break;
    }
    Matrix next = pinv * majorizer_product(x, edges, settings.zero_distance_epsilon);
    center_columns(next);
    const double next_stress = stress_over_edges(next, edges);
    if (!std::isfinite(next_stress)) throw NoProgressError("non-finite stress during iteration");
    x.swap(next);
    result.stress_trace.push_back(next_stress);
    ++result.iterations;
    const double decrease = stress - next_stress;
    const double prev = stress;
    stress = next_stress;
    if (decrease <= settings.relative_tolerance * prev) {
      result.converged = true;
      break;
    }
  }
  result.configuration = Configuration{std::move(x)};
  return result;
}

Configuration classical_mds_init(const DissimilarityMatrix& delta, Eigen::Index dim) {
  const Eigen::Index n = delta.size();
  Matrix d2(n, n);
  // Mean-impute masked entries for initialization only.
  double mean = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && !delta.is_missing(i, j)) {
        mean += delta(i, j);
        ++count;
      }
  if (count > 0) mean /= static_cast<double>(count);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = (i == j) ? 0.0 : (delta.is_missing(i, j) ? mean : delta(i, j));
      d2(i, j) = v * v;
    }

  // B = -1/2 J D^2 J with J the centering projector.
  Matrix b = d2;
  const Vector row_mean = b.rowwise().mean();
  const double grand_mean = row_mean.mean();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      b(i, j) = -0.5 * (d2(i, j) - row_mean[i] - row_mean[j] + grand_mean);

  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  if (es.info() != Eigen::Success) throw NoProgressError("eigendecomposition failed");
  // Eigen returns eigenvalues ascending; take the top `dim` from the back.
  Matrix x = Matrix::Zero(n, dim);
  for (Eigen::Index k = 0; k < dim && k < n; ++k) {
    const Eigen::Index idx = n - 1 - k;
    const double lambda = es.eigenvalues()[idx];
    if (lambda > 0.0) x.col(k) = es.eigenvectors().col(idx) * std::sqrt(lambda);
  }
  center_columns(x);
  return Configuration{std::move(x)};
}

std::vector<double> double_centered_spectrum(const DissimilarityMatrix& delta) {
  const Eigen::Index n = delta.size();
  Matrix d2(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = delta.is_missing(i, j) ? 0.0 : delta(i, j);
      d2(i, j) = v * v;
    }
  Matrix b = d2;
  const Vector row_mean = b.rowwise().mean();
  const double grand_mean = row_mean.mean();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      b(i, j) = -0.5 * (d2(i, j) - row_mean[i] - row_mean[j] + grand_mean);
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  if (es.info() != Eigen::Success) throw NoProgressError("eigendecomposition failed");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = es.eigenvalues()[n - 1 - k];
  return out;
}

Eigen::Index select_dimension_elbow(const std::vector<double>& eigenvalues) {
  if (eigenvalues.size() < 2) throw TooFewValuesError("need at least 2 eigenvalues");
  std::vector<double> vals = eigenvalues;
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  const std::size_t p = vals.size();

  // Two-group Gaussian profile log-likelihood with a pooled variance; the
  // split with zero residual gets +infinity so degenerate screes resolve to
  // the smallest split.
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_q = 1;
  for (std::size_t q = 1; q < p; ++q) {
    double mu1 = 0.0, mu2 = 0.0;
    for (std::size_t i = 0; i < q; ++i) mu1 += vals[i];
    for (std::size_t i = q; i < p; ++i) mu2 += vals[i];
    mu1 /= static_cast<double>(q);
    mu2 /= static_cast<double>(p - q);
    double rss = 0.0;
    for (std::size_t i = 0; i < q; ++i) rss += (vals[i] - mu1) * (vals[i] - mu1);
    for (std::size_t i = q; i < p; ++i) rss += (vals[i] - mu2) * (vals[i] - mu2);
    double loglik;
    if (rss <= 0.0) {
      loglik = std::numeric_limits<double>::infinity();
    } else {
      const double sigma2 = rss / static_cast<double>(p);
      loglik = -0.5 * static_cast<double>(p) * (std::log(2.0 * 3.14159265358979323846 * sigma2) + 1.0);
    }
    if (loglik > best) {
      best = loglik;
      best_q = q;
    }
  }
  return static_cast<Eigen::Index>(best_q);
}

// --- Restricted solve -------------------------------------------------------

namespace {

struct FreeBlock {
  std::vector<Eigen::Index> free_rows;
  std::vector<char> is_free;                       // size n
  std::vector<std::vector<Edge>> neighbors;        // per free row: edges (i=free row)
  Matrix vff;                                      // |F| x |F| weight Laplacian block
  Matrix anchor_pull;                              // |F| x d contribution of anchors
};

FreeBlock build_free_block(const Matrix& x0, const DissimilarityMatrix& delta,
                           const WeightMatrix& w, const std::vector<Eigen::Index>& free_rows) {
  const Eigen::Index n = delta.size();
  if (x0.rows() != n) throw SizeMismatchError("configuration size does not match dissimilarities");
  if (w.size() != n) throw SizeMismatchError("weight matrix size does not match dissimilarities");
  if (free_rows.empty()) throw Error("no free rows");
  FreeBlock fb;
  fb.free_rows = free_rows;
  fb.is_free.assign(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> position(static_cast<std::size_t>(n), -1);
  for (std::size_t a = 0; a < free_rows.size(); ++a) {
    const Eigen::Index f = free_rows[a];
    if (f < 0 || f >= n) throw SizeMismatchError("free row out of range");
    if (fb.is_free[static_cast<std::size_t>(f)]) throw Error("duplicate free row");
    fb.is_free[static_cast<std::size_t>(f)] = 1;
    position[static_cast<std::size_t>(f)] = static_cast<Eigen::Index>(a);
  }

  const std::size_t nf = free_rows.size();
  fb.vff = Matrix::Zero(static_cast<Eigen::Index>(nf), static_cast<Eigen::Index>(nf));
  fb.neighbors.resize(nf);
  fb.anchor_pull = Matrix::Zero(static_cast<Eigen::Index>(nf), x0.cols());
  for (std::size_t a = 0; a < nf; ++a) {
    const Eigen::Index f = free_rows[a];
    double degree = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == f) continue;
      const double wij = w(f, j);
      if (wij == 0.0) continue;
      if (wij < 0.0) throw Error("negative weight");
      if (delta.is_missing(f, j))
        throw PositiveWeightOnMissingError("positive weight on a missing dissimilarity");
      degree += wij;
      fb.neighbors[a].push_back({f, j, wij, delta(f, j)});
      if (fb.is_free[static_cast<std::size_t>(j)]) {
        fb.vff(static_cast<Eigen::Index>(a), position[static_cast<std::size_t>(j)]) = -wij;
      } else {
        fb.anchor_pull.row(static_cast<Eigen::Index>(a)) += wij * x0.row(j);
      }
    }
    if (degree <= 0.0)
      throw DisconnectedFreePointError("free point has no positive weights");
    fb.vff(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = degree;
  }
  return fb;
}

double stress_of_free_block(const Matrix& x, const FreeBlock& fb) {
  double s = 0.0;
  for (std::size_t a = 0; a < fb.free_rows.size(); ++a) {
    for (const Edge& e : fb.neighbors[a]) {
      // Count free-free pairs once (when i < j), anchor pairs always.
      if (fb.is_free[static_cast<std::size_t>(e.j)] && e.j < e.i) continue;
      const double d = (x.row(e.i) - x.row(e.j)).norm();
      const double r = d - e.target;
      s += e.weight * r * r;
    }
  }
  return s;
}

}  // namespace

double restricted_stress(const Matrix& x, const DissimilarityMatrix& delta, const WeightMatrix& w,
                         const std::vector<Eigen::Index>& free_rows) {
  const FreeBlock fb = build_free_block(x, delta, w, free_rows);
  return stress_of_free_block(x, fb);
}

RestrictedResult restricted_smacof(const Matrix& x0, const DissimilarityMatrix& delta,
                                   const WeightMatrix& w, const std::vector<Eigen::Index>& free_rows,
                                   const SolverSettings& settings) {
  if (!x0.allFinite()) throw NonFiniteInputError("non-finite configuration");
  const FreeBlock fb = build_free_block(x0, delta, w, free_rows);
  const std::size_t nf = fb.free_rows.size();
  const Eigen::Index d = x0.cols();

  Eigen::LDLT<Matrix> factor(fb.vff);
  // A free sub-block whose points connect only to each other is a singular
  // Laplacian: nothing ties it to the anchors.
  if (factor.info() != Eigen::Success ||
      factor.vectorD().minCoeff() <= fb.vff.diagonal().maxCoeff() * 1e-14)
    throw DisconnectedFreePointError("free block is not anchored");

  RestrictedResult result;
  result.points = x0;
  double stress = stress_of_free_block(result.points, fb);
  if (!std::isfinite(stress)) throw NoProgressError("non-finite restricted stress");
  result.stress_trace.push_back(stress);

  Matrix rhs(static_cast<Eigen::Index>(nf), d);
  for (int it = 0; it < settings.max_iterations; ++it) {
    if (stress == 0.0) {
      result.converged = true;
      break;
    }
    rhs = fb.anchor_pull;
    for (std::size_t a = 0; a < nf; ++a) {
      for (const Edge& e : fb.neighbors[a]) {
        const auto diff = result.points.row(e.i) - result.points.row(e.j);
        const double dist = diff.norm();
        if (dist <= settings.zero_distance_epsilon) continue;
        rhs.row(static_cast<Eigen::Index>(a)) += (e.weight * e.target / dist) * diff;
      }
    }
    const Matrix y = factor.solve(rhs);
    for (std::size_t a = 0; a < nf; ++a)
      result.points.row(fb.free_rows[a]) = y.row(static_cast<Eigen::Index>(a));
    const double next_stress = stress_of_free_block(result.points, fb);
    if (!std::isfinite(next_stress)) throw NoProgressError("non-finite restricted stress");
    result.stress_trace.push_back(next_stress);
    ++result.iterations;
    const double decrease = stress - next_stress;
    const double prev = stress;
    stress = next_stress;
    if (decrease <= settings.relative_tolerance * std::max(prev, 0.0)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace jofc
