#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <jofc/omnibus.hpp>
#include <jofc/rng.hpp>
#include <jofc/solver.hpp>

#include "test_support.hpp"

using namespace jofc;

namespace {

DissimilarityMatrix two_by_two() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return DissimilarityMatrix::complete(m);
}

}  // namespace

TEST_CASE("block index round trips rows and (object, condition) pairs") {
  const BlockIndex idx{4, true};
  REQUIRE(idx.rows() == 10);
  for (Eigen::Index r = 0; r < idx.rows(); ++r)
    CHECK(idx.row(idx.object_of(r), idx.condition_of(r)) == r);
  CHECK(idx.row(0, 1) == 0);
  CHECK(idx.row(0, 2) == 4);
  CHECK(idx.row(4, 1) == 8);
  CHECK(idx.row(4, 2) == 9);
  CHECK_THROWS_AS(idx.row(5, 1), SizeMismatchError);
  CHECK_THROWS_AS((BlockIndex{4, false}.row(4, 1)), SizeMismatchError);
}

TEST_CASE("single-object problem is one matched pair with target zero") {
  const DissimilarityMatrix z = DissimilarityMatrix::complete(Matrix::Zero(1, 1));
  const OmnibusProblem p = build_omnibus(z, z, 0.3);
  REQUIRE(p.m.size() == 2);
  CHECK(p.m(0, 1) == 0.0);
  CHECK_FALSE(p.m.is_missing(0, 1));
  CHECK(p.weights(0, 1) == 0.3);
}

TEST_CASE("mean imputation fills the cross block with averaged dissimilarities") {
  const OmnibusProblem p = build_omnibus(two_by_two(), two_by_two(), 0.5,
                                         {ImputationPolicy::mean_impute, false, 0.0});
  // Cross block rows 0..1 x cols 2..3: matched diagonal 0, imputed (1+1)/2.
  CHECK(p.m(0, 2) == 0.0);
  CHECK(p.m(1, 3) == 0.0);
  CHECK(p.m(0, 3) == 1.0);
  CHECK(p.m(1, 2) == 1.0);
  CHECK_FALSE(p.m.is_missing(0, 3));
  // Default separability weight stays zero even when values are filled.
  CHECK(p.weights(0, 3) == 0.0);
}

TEST_CASE("balanced tradeoff gives every available pair the same weight") {
  const OmnibusProblem p = build_omnibus(two_by_two(), two_by_two(), 0.5);
  const Eigen::Index size = p.m.size();
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = i + 1; j < size; ++j) {
      if (p.m.is_missing(i, j)) continue;
      CHECK(p.weights(i, j) == 0.5);
    }
}

TEST_CASE("weights take only the values 0, w, and 1-w") {
  Rng rng(101);
  for (double w : {0.1, 0.37, 0.9}) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(6));
    const auto d1 = DissimilarityMatrix::complete(test_support::random_dissimilarity(rng, n));
    const auto d2 = DissimilarityMatrix::complete(test_support::random_dissimilarity(rng, n));
    const OmnibusProblem p = build_omnibus(d1, d2, w);
    for (Eigen::Index i = 0; i < p.m.size(); ++i)
      for (Eigen::Index j = 0; j < p.m.size(); ++j) {
        const double v = p.weights(i, j);
        CHECK((v == 0.0 || v == w || v == 1.0 - w));
      }
  }
}

TEST_CASE("the positive-weight graph of a built problem is connected") {
  Rng rng(103);
  for (double w : {0.05, 0.5, 0.99}) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(7));
    const auto d1 = DissimilarityMatrix::complete(test_support::random_dissimilarity(rng, n));
    const auto d2 = DissimilarityMatrix::complete(test_support::random_dissimilarity(rng, n));
    CHECK(build_omnibus(d1, d2, w).weights.positive_graph_connected());
  }
}

TEST_CASE("tradeoff parameter must lie strictly inside the unit interval") {
  const auto d = two_by_two();
  CHECK_THROWS_AS(build_omnibus(d, d, 0.0), WOutOfRangeError);
  CHECK_THROWS_AS(build_omnibus(d, d, 1.0), WOutOfRangeError);
  CHECK_THROWS_AS(build_omnibus(d, d, -0.2), WOutOfRangeError);
}

TEST_CASE("condition sizes must agree") {
  const auto d3 = DissimilarityMatrix::complete(Matrix::Zero(3, 3));
  CHECK_THROWS_AS(build_omnibus(two_by_two(), d3, 0.5), SizeMismatchError);
}

TEST_CASE("auto normalization stores the factors and scales both blocks") {
  Matrix m = Matrix::Constant(4, 4, 1.0);
  m.diagonal().setZero();
  const auto d = DissimilarityMatrix::complete(m);
  OmnibusOptions opt;
  opt.auto_normalize = true;
  const OmnibusProblem p = build_omnibus(d, d, 0.5, opt);
  CHECK(p.normalization1 == doctest::Approx(std::sqrt(12.0)).epsilon(1e-14));
  CHECK(p.m(0, 1) == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-14));
  CHECK(p.m(4, 5) == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-14));
}

TEST_CASE("augmentation reproduces the documented 4x4 layout for n=1") {
  const DissimilarityMatrix z = DissimilarityMatrix::complete(Matrix::Zero(1, 1));
  const OmnibusProblem base = build_omnibus(z, z, 0.4);
  Vector d1(1), d2(1);
  d1 << 0.5;
  d2 << 0.7;
  const OmnibusProblem p = augment_for_oos(base, d1, d2);
  REQUIRE(p.m.size() == 4);
  REQUIRE(p.index.augmented);

  // Row order: object 0 in each condition, then the new point in each.
  CHECK(p.m(0, 1) == 0.0);
  CHECK(p.weights(0, 1) == 0.4);
  CHECK(p.m(0, 2) == 0.5);
  CHECK(p.weights(0, 2) == doctest::Approx(0.6));
  CHECK(p.m.is_missing(0, 3));
  CHECK(p.weights(0, 3) == 0.0);
  CHECK(p.m.is_missing(1, 2));
  CHECK(p.m(1, 3) == 0.7);
  CHECK(p.weights(1, 3) == doctest::Approx(0.6));
  CHECK(p.m.is_missing(2, 3));
  CHECK(p.weights(2, 3) == 0.0);
}

TEST_CASE("augmentation divides the test profiles by the stored factors") {
  Matrix m = Matrix::Constant(3, 3, 2.0);
  m.diagonal().setZero();
  const auto d = DissimilarityMatrix::complete(m);
  OmnibusOptions opt;
  opt.auto_normalize = true;
  const OmnibusProblem base = build_omnibus(d, d, 0.5, opt);
  Vector prof(3);
  prof << 2.0, 2.0, 2.0;
  const OmnibusProblem p = augment_for_oos(base, prof, prof);
  CHECK(p.m(6, 0) == doctest::Approx(2.0 / p.normalization1).epsilon(1e-14));
}

TEST_CASE("augmentation leaves the in-sample blocks bitwise unchanged") {
  Rng rng(107);
  const Eigen::Index n = 5;
  const auto d1 = DissimilarityMatrix::complete(test_support::random_dissimilarity(rng, n));
  const auto d2 = DissimilarityMatrix::complete(test_support::random_dissimilarity(rng, n));
  const OmnibusProblem base = build_omnibus(d1, d2, 0.7);
  Vector p1(n), p2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p1[i] = rng.uniform();
    p2[i] = rng.uniform();
  }
  const OmnibusProblem aug = augment_for_oos(base, p1, p2);
  CHECK(aug.m.entries.topLeftCorner(2 * n, 2 * n) == base.m.entries);
  CHECK(aug.weights.entries.topLeftCorner(2 * n, 2 * n) == base.weights.entries);
  CHECK((aug.m.missing.topLeftCorner(2 * n, 2 * n) == base.m.missing).all());
}

TEST_CASE("augmentation validates the test profiles") {
  const OmnibusProblem base = build_omnibus(two_by_two(), two_by_two(), 0.5);
  Vector good(2), shortv(1), neg(2);
  good << 0.1, 0.2;
  shortv << 0.1;
  neg << -0.1, 0.2;
  CHECK_THROWS_AS(augment_for_oos(base, shortv, good), LengthMismatchError);
  CHECK_THROWS_AS(augment_for_oos(base, good, neg), NegativeEntryError);
  CHECK_NOTHROW(augment_for_oos(base, good, good));
}

TEST_CASE("stress components sum to the raw stress") {
  Rng rng(109);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::Index n = 3;
    const auto d1 = DissimilarityMatrix::complete(test_support::random_dissimilarity(rng, n));
    const auto d2 = DissimilarityMatrix::complete(test_support::random_dissimilarity(rng, n));
    const OmnibusProblem p = build_omnibus(d1, d2, 0.3);
    const Configuration x{test_support::random_points(rng, 2 * n, 2)};
    const StressComponents c = stress_components(x, p);
    const double total = raw_stress(x, p.m, p.weights);
    CHECK(std::abs(c.total() - total) <= 1e-10 * (1.0 + total));
    CHECK(c.separability == 0.0);
  }
}

TEST_CASE("coincident matched pairs have zero commensurability stress") {
  const OmnibusProblem p = build_omnibus(two_by_two(), two_by_two(), 0.5);
  Matrix pts(4, 2);
  pts << 0, 0, 2, 0, 0, 0, 2, 0;  // condition-2 copy sits on condition 1
  const StressComponents c = stress_components(Configuration{pts}, p);
  CHECK(c.commensurability == 0.0);
  CHECK(c.fidelity > 0.0);
}

TEST_CASE("fidelity error matches a hand-summed formula") {
  Rng rng(113);
  const Eigen::Index n = 3;
  const auto d1 = DissimilarityMatrix::complete(test_support::random_dissimilarity(rng, n));
  const Matrix pts = test_support::random_points(rng, 2 * n, 2);
  const Configuration x{pts};
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (pts.row(i) - pts.row(j)).norm();
      sum += (d - d1(i, j)) * (d - d1(i, j));
    }
  CHECK(fidelity_error(x, d1, 1) == doctest::Approx(sum / 3.0).epsilon(1e-13));

  double sum2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (pts.row(n + i) - pts.row(n + j)).norm();
      sum2 += (d - d1(i, j)) * (d - d1(i, j));
    }
  CHECK(fidelity_error(x, d1, 2) == doctest::Approx(sum2 / 3.0).epsilon(1e-13));
}

TEST_CASE("fidelity error is zero for an isometric embedding") {
  Rng rng(127);
  const Matrix pts = test_support::random_points(rng, 4, 2);
  const DissimilarityMatrix d = euclidean_dissimilarity(pts);
  Matrix joint(8, 2);
  joint << pts, pts;
  CHECK(fidelity_error(Configuration{joint}, d, 1) <= 1e-20);
  CHECK(fidelity_error(Configuration{joint}, d, 2) <= 1e-20);
}

TEST_CASE("commensurability error averages squared matched distances") {
  Matrix pts(4, 1);
  pts << 0, 1, 2, 1;  // matched distances 2 and 0
  CHECK(commensurability_error(Configuration{pts}) == doctest::Approx(2.0).epsilon(1e-14));
  Matrix same(4, 1);
  same << 0, 1, 0, 1;
  CHECK(commensurability_error(Configuration{same}) == 0.0);
}
