#include "jofc/simgauss.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <filesystem>

#include "jofc/csv.hpp"
#include "jofc/rng.hpp"

namespace jofc {

Matrix make_sigma(Eigen::Index p, double r, SigmaForm form, std::uint64_t seed) {
  if (p < 1) throw SizeMismatchError("dimension must be at least 1");
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidRError("r must be positive and finite");
  const double top = 1.0 / r;
  if (form == SigmaForm::isotropic) return top * Matrix::Identity(p, p);

  Rng rng(seed);
  // Random orthogonal basis from the QR of a Gaussian matrix, with the sign
  // convention R_ii > 0 so the basis is a deterministic function of the draw.
  Matrix g(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) g(i, j) = rng.normal();
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < p; ++i)
    if (rmat(i, i) < 0.0) q.col(i) = -q.col(i);

  Vector spectrum(p);
  spectrum[0] = top;
  for (Eigen::Index i = 1; i < p; ++i) spectrum[i] = top * (1.0 - rng.uniform());  // in (0, 1/r]
  return q * spectrum.asDiagonal() * q.transpose();
}

namespace {

Matrix cholesky_factor(const Matrix& sigma) {
  const Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw DegenerateInputError("covariance is not positive definite");
  return llt.matrixL();
}

Vector standard_normal(Rng& rng, Eigen::Index p) {
  Vector z(p);
  for (Eigen::Index k = 0; k < p; ++k) z[k] = rng.normal();
  return z;
}

Vector profile(const Eigen::RowVectorXd& x, const Matrix& training) {
  Vector d(training.rows());
  for (Eigen::Index j = 0; j < training.rows(); ++j) d[j] = (x - training.row(j)).norm();
  return d;
}

}  // namespace

Trial sample_trial(const GaussianSettingParams& params) {
  if (params.n < 1 || params.m < 1) throw SizeMismatchError("need n >= 1 and m >= 1");
  const Matrix sigma = make_sigma(params.p, params.r, params.sigma_form, params.sigma_seed);
  const Matrix chol = cholesky_factor(sigma);
  Rng rng(params.seed);
  const Eigen::Index n = params.n, m = params.m, p = params.p;

  // Phase A: latent objects alpha_i, i ascending.
  Matrix alpha(n, p);
  for (Eigen::Index i = 0; i < n; ++i) alpha.row(i) = standard_normal(rng, p).transpose();

  Trial t;
  // Phase B: condition-1 training measurements, i ascending.
  t.training1.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    t.training1.row(i) = alpha.row(i) + (chol * standard_normal(rng, p)).transpose();
  // Phase C: condition-2 training measurements, i ascending.
  t.training2.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    t.training2.row(i) = alpha.row(i) + (chol * standard_normal(rng, p)).transpose();

  t.delta1 = euclidean_dissimilarity(t.training1);
  t.delta2 = euclidean_dissimilarity(t.training2);

  // Phase D: matched tests; per test one fresh object measured twice.
  t.matched1.resize(m, p);
  t.matched2.resize(m, p);
  t.matched.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vector a = standard_normal(rng, p);
    t.matched1.row(i) = (a + chol * standard_normal(rng, p)).transpose();
    t.matched2.row(i) = (a + chol * standard_normal(rng, p)).transpose();
    t.matched.push_back({profile(t.matched1.row(i), t.training1),
                         profile(t.matched2.row(i), t.training2)});
  }

  // Phase E: unmatched tests; two fresh objects, one measured per condition.
  t.unmatched1.resize(m, p);
  t.unmatched2.resize(m, p);
  t.unmatched.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vector a = standard_normal(rng, p);
    const Vector b = standard_normal(rng, p);
    t.unmatched1.row(i) = (a + chol * standard_normal(rng, p)).transpose();
    t.unmatched2.row(i) = (b + chol * standard_normal(rng, p)).transpose();
    t.unmatched.push_back({profile(t.unmatched1.row(i), t.training1),
                           profile(t.unmatched2.row(i), t.training2)});
  }
  return t;
}

void dump_trial_csv(const Trial& trial, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto path = [&dir](const char* name) {
    return (std::filesystem::path(dir) / name).string();
  };
  write_matrix_csv(trial.delta1, path("delta1.csv"));
  write_matrix_csv(trial.delta2, path("delta2.csv"));

  const auto stack = [](const std::vector<TestPair>& pairs, bool first) {
    Matrix out(static_cast<Eigen::Index>(pairs.size()),
               pairs.empty() ? 0 : (first ? pairs[0].d1.size() : pairs[0].d2.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i)
      out.row(static_cast<Eigen::Index>(i)) =
          (first ? pairs[i].d1 : pairs[i].d2).transpose();
    return out;
  };
  write_table_csv(stack(trial.matched, true), path("matched_1.csv"));
  write_table_csv(stack(trial.matched, false), path("matched_2.csv"));
  write_table_csv(stack(trial.unmatched, true), path("unmatched_1.csv"));
  write_table_csv(stack(trial.unmatched, false), path("unmatched_2.csv"));
}

}  // namespace jofc
