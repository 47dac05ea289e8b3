#include "jofc/core.hpp"

#include <cmath>
#include <vector>

namespace jofc {

DissimilarityMatrix DissimilarityMatrix::complete(Matrix m) {
  const Eigen::Index n = m.rows();
  return DissimilarityMatrix{std::move(m), BoolMatrix::Constant(n, n, false)};
}

DissimilarityMatrix DissimilarityMatrix::with_mask(Matrix m, BoolMatrix mask) {
  return DissimilarityMatrix{std::move(m), std::move(mask)};
}

WeightMatrix WeightMatrix::uniform(Eigen::Index n, double value) {
  Matrix w = Matrix::Constant(n, n, value);
  w.diagonal().setZero();
  return WeightMatrix{std::move(w)};
}

bool WeightMatrix::positive_graph_connected() const {
  const Eigen::Index n = entries.rows();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> stack{0};
  seen[0] = 1;
  Eigen::Index reached = 1;
  while (!stack.empty()) {
    const Eigen::Index i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!seen[static_cast<std::size_t>(j)] && entries(i, j) > 0.0) {
        seen[static_cast<std::size_t>(j)] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == n;
}

void center_columns(Matrix& m) {
  if (m.rows() == 0) return;
  m.rowwise() -= m.colwise().mean();
}

Matrix pairwise_distances(const Matrix& x) {
  const Eigen::Index n = x.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (x.row(i) - x.row(j)).norm();
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

DissimilarityMatrix validate_dissimilarity(const Matrix& raw, double symmetrize_tol) {
  const Eigen::Index n = raw.rows();
  return validate_dissimilarity(raw, BoolMatrix::Constant(n, n, false), symmetrize_tol);
}

DissimilarityMatrix validate_dissimilarity(const Matrix& raw, const BoolMatrix& mask,
                                           double symmetrize_tol) {
  const Eigen::Index n = raw.rows();
  if (raw.cols() != n) throw NonSquareError("dissimilarity matrix must be square");
  if (mask.rows() != n || mask.cols() != n)
    throw SizeMismatchError("mask size does not match matrix size");

  Matrix out = Matrix::Zero(n, n);
  BoolMatrix out_mask = BoolMatrix::Constant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (mask(i, i)) throw NonZeroDiagonalError("diagonal entries must be available");
    const double d = raw(i, i);
    if (!std::isfinite(d) || std::abs(d) > symmetrize_tol)
      throw NonZeroDiagonalError("diagonal entry is not zero");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (mask(i, j) != mask(j, i)) throw AsymmetryError("mask is not symmetric");
      if (mask(i, j)) {
        out_mask(i, j) = out_mask(j, i) = true;
        continue;
      }
      const double a = raw(i, j);
      const double b = raw(j, i);
      if (!std::isfinite(a) || !std::isfinite(b))
        throw NonFiniteInputError("non-finite dissimilarity entry");
      const double scale = std::max({1.0, std::abs(a), std::abs(b)});
      if (std::abs(a - b) > symmetrize_tol * scale)
        throw AsymmetryError("entries differ beyond the symmetrization tolerance");
      const double v = 0.5 * (a + b);
      if (v < 0.0) throw NegativeEntryError("negative dissimilarity entry");
      out(i, j) = out(j, i) = v;
    }
  }
  return DissimilarityMatrix{std::move(out), std::move(out_mask)};
}

double masked_frobenius_norm(const DissimilarityMatrix& d) {
  const Eigen::Index n = d.size();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!d.missing(i, j)) sum += d.entries(i, j) * d.entries(i, j);
  return std::sqrt(sum);
}

DissimilarityMatrix normalize_frobenius(const DissimilarityMatrix& d) {
  const double norm = masked_frobenius_norm(d);
  if (norm == 0.0) throw AllZeroError("cannot normalize an all-zero dissimilarity matrix");
  DissimilarityMatrix out = d;
  out.entries /= norm;
  return out;
}

DissimilarityMatrix euclidean_dissimilarity(const Matrix& points) {
  if (!points.allFinite()) throw NonFiniteInputError("non-finite coordinates");
  return DissimilarityMatrix::complete(pairwise_distances(points));
}

}  // namespace jofc
