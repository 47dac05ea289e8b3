#include "jofc/baseline.hpp"

#include <Eigen/SVD>

namespace jofc {

Vector ProcrustesMap::operator()(const Vector& a) const {
  return scale * (rotation * (a - source_center)) + target_center;
}

Matrix ProcrustesMap::apply_rows(const Matrix& a) const {
  Matrix out = (a.rowwise() - source_center.transpose()) * rotation.transpose();
  out *= scale;
  out.rowwise() += target_center.transpose();
  return out;
}

ProcrustesMap fit_procrustes(const Matrix& a, const Matrix& b, bool allow_scale) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw SizeMismatchError("point sets must have matching shapes");
  if (a.rows() < 2) throw SizeMismatchError("need at least two point pairs");
  if (!a.allFinite() || !b.allFinite()) throw NonFiniteInputError("non-finite points");

  ProcrustesMap map;
  map.source_center = a.colwise().mean().transpose();
  map.target_center = b.colwise().mean().transpose();
  const Matrix ac = a.rowwise() - map.source_center.transpose();
  const Matrix bc = b.rowwise() - map.target_center.transpose();
  if (ac.norm() == 0.0 || bc.norm() == 0.0)
    throw DegenerateInputError("all points identical");

  // Q maximizing trace(Q M) over orthogonal Q, M the cross-covariance.
  const Matrix m = ac.transpose() * bc;
  const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  map.rotation = svd.matrixV() * svd.matrixU().transpose();

  if (allow_scale) {
    const double cross = svd.singularValues().sum();
    if (cross > 0.0) map.scale = cross / ac.squaredNorm();
  }
  map.residual = (map.scale * (ac * map.rotation.transpose()) - bc).squaredNorm();
  return map;
}

PrmModel fit_prm(const DissimilarityMatrix& delta1, const DissimilarityMatrix& delta2,
                 Eigen::Index dim, const OosSettings& settings, bool allow_scale) {
  if (delta1.size() != delta2.size())
    throw SizeMismatchError("conditions must have the same number of objects");
  const WeightMatrix w = WeightMatrix::uniform(delta1.size());
  PrmModel model;
  model.embedding1 = smacof(delta1, w, dim, settings.solver).configuration;
  model.embedding2 = smacof(delta2, w, dim, settings.solver).configuration;
  model.alignment =
      fit_procrustes(model.embedding1.points, model.embedding2.points, allow_scale);
  return model;
}

PrmResult prm_test(const PrmModel& model, const Vector& d1, const Vector& d2,
                   const OosSettings& settings) {
  const Vector ones = Vector::Ones(model.embedding1.n_points());
  const SinglePointResult p1 =
      embed_single_point(model.embedding1.points, d1, ones, settings);
  const SinglePointResult p2 =
      embed_single_point(model.embedding2.points, d2, ones, settings);
  PrmResult out;
  out.y1_mapped = model.alignment(p1.point);
  out.y2 = p2.point;
  out.tau = (out.y1_mapped - out.y2).norm();
  return out;
}

PrmResult prm_pipeline(const DissimilarityMatrix& delta1, const DissimilarityMatrix& delta2,
                       const Vector& d1, const Vector& d2, Eigen::Index dim,
                       const OosSettings& settings) {
  return prm_test(fit_prm(delta1, delta2, dim, settings), d1, d2, settings);
}

}  // namespace jofc
