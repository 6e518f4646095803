#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

#include "dgm/preprocess.hpp"
#include "test_support.hpp"

using namespace dgm;
namespace ts = dgm::test;

namespace {

// Reference basis via eigendecomposition of the sample covariance — an
// independent route from the SVD used by pca_fit.
Matrix covariance_basis(const Matrix& frames, Index d_out) {
  const Vector mean = frames.colwise().mean();
  const Matrix centered = frames.rowwise() - mean.transpose();
  const Matrix cov = centered.transpose() * centered /
                     static_cast<double>(frames.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  Matrix basis(frames.cols(), d_out);
  for (Index c = 0; c < d_out; ++c) {
    // SelfAdjointEigenSolver sorts ascending; take from the top.
    basis.col(c) = es.eigenvectors().col(frames.cols() - 1 - c);
    Index argmax = 0;
    basis.col(c).cwiseAbs().maxCoeff(&argmax);
    if (basis(argmax, c) < 0.0) basis.col(c) = -basis.col(c);
  }
  return basis;
}

}  // namespace

TEST_CASE("pca_fit recovers an exact low-dimensional subspace") {
  ts::Rng rng(3);
  const Matrix embed = ts::random_matrix(rng, 10, 2);
  const Matrix z = ts::random_matrix(rng, 100, 2);
  const Matrix frames = z * embed.transpose();  // 100 x 10, rank 2

  const PcaModel model = pca_fit(frames, 2);
  CHECK((model.basis.transpose() * model.basis - Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-8);
  for (Index i = 0; i < frames.rows(); ++i) {
    const Vector x = frames.row(i).transpose();
    const Vector reconstructed =
        model.mean + model.basis * (model.basis.transpose() * (x - model.mean));
    CHECK((reconstructed - x).norm() <= 1e-8);
  }
}

TEST_CASE("full-dimensional pca preserves pairwise distances") {
  ts::Rng rng(4);
  const Matrix frames = ts::random_matrix(rng, 40, 6);
  const PcaModel model = pca_fit(frames, 6);
  for (Index i = 0; i + 1 < frames.rows(); ++i) {
    const Vector pi = pca_apply(model, frames.row(i).transpose());
    const Vector pj = pca_apply(model, frames.row(i + 1).transpose());
    const double original =
        (frames.row(i) - frames.row(i + 1)).norm();
    CHECK((pi - pj).norm() == doctest::Approx(original).epsilon(1e-8));
  }
}

TEST_CASE("pca basis matches a covariance-eigendecomposition oracle") {
  const Matrix frames = ts::rows({{2.0, 0.5, 1.0},
                                  {-1.0, 1.5, 0.0},
                                  {0.5, -2.0, 3.0},
                                  {4.0, 1.0, -1.0},
                                  {-3.0, 0.5, 2.0}});
  const PcaModel model = pca_fit(frames, 3);
  const Matrix expected = covariance_basis(frames, 3);
  CHECK((model.basis - expected).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("pca_fit error cases") {
  ts::Rng rng(5);
  const Matrix frames = ts::random_matrix(rng, 1, 4);
  CHECK_THROWS_AS(static_cast<void>(pca_fit(frames, 1)), Error);  // too few samples

  const Matrix embed = ts::random_matrix(rng, 10, 2);
  const Matrix z = ts::random_matrix(rng, 50, 2);
  CHECK_THROWS_WITH_AS(static_cast<void>(pca_fit(z * embed.transpose(), 3)),
                       doctest::Contains("rank"), Error);

  CHECK_THROWS_AS(static_cast<void>(pca_fit(ts::random_matrix(rng, 5, 4), 5)),
                  Error);  // d_out > min(N, d_raw)
}

TEST_CASE("pca_apply centering, alignment, and contraction") {
  ts::Rng rng(6);
  const Matrix frames = ts::random_matrix(rng, 30, 5);
  const PcaModel model = pca_fit(frames, 3);

  CHECK(pca_apply(model, model.mean).norm() <= 1e-12);

  const Vector aligned = model.mean + model.basis.col(0);
  const Vector image = pca_apply(model, aligned);
  CHECK((image - ts::vec({1.0, 0.0, 0.0})).norm() <= 1e-10);

  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = ts::random_matrix(rng, 5, 1);
    CHECK(pca_apply(model, x).norm() <=
          (x - model.mean).norm() + 1e-10);
  }

  CHECK_THROWS_AS(static_cast<void>(pca_apply(model, ts::vec({1.0, 2.0}))),
                  Error);
}

TEST_CASE("pca_apply preserves inner products on the retained subspace") {
  ts::Rng rng(7);
  const Matrix frames = ts::random_matrix(rng, 40, 6);
  const PcaModel model = pca_fit(frames, 4);
  for (int trial = 0; trial < 10; ++trial) {
    // Points inside the affine span of the basis.
    const Vector u = model.mean + model.basis * ts::random_matrix(rng, 4, 1);
    const Vector v = model.mean + model.basis * ts::random_matrix(rng, 4, 1);
    const double original = (u - model.mean).dot(v - model.mean);
    const double projected = pca_apply(model, u).dot(pca_apply(model, v));
    CHECK(projected == doctest::Approx(original).epsilon(1e-8));
  }
}

TEST_CASE("max_pool examples") {
  const Tracklet t = ts::tracklet({{1.0, 5.0}, {3.0, 2.0}});
  const Tracklet pooled = max_pool(t, 2);
  CHECK(pooled.num_frames() == 1);
  CHECK(pooled.frames()(0, 0) == 3.0);
  CHECK(pooled.frames()(0, 1) == 5.0);

  const Tracklet same = max_pool(t, 1);
  CHECK(same.frames() == t.frames());

  ts::Rng rng(8);
  const Tracklet long_t = ts::random_tracklet(rng, 25, 3);
  CHECK(max_pool(long_t, 10).num_frames() == 3);
  // Final partial window pools the remaining 5 frames.
  const Vector last =
      long_t.frames().bottomRows(5).colwise().maxCoeff().transpose();
  CHECK((max_pool(long_t, 10).frames().row(2).transpose() - last).norm() == 0.0);
}

TEST_CASE("max_pool with window >= length is idempotent") {
  ts::Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Tracklet t = ts::random_tracklet(rng, 7, 4);
    const Tracklet once = max_pool(t, 7);
    const Tracklet twice = max_pool(once, 7);
    CHECK(once.num_frames() == 1);
    CHECK(once.frames() == twice.frames());
  }
}

TEST_CASE("mean_representative examples and permutation invariance") {
  CHECK((mean_representative(ts::tracklet({{0.0, 0.0}, {2.0, 2.0}})) -
         ts::vec({1.0, 1.0}))
            .norm() == 0.0);
  const Tracklet single = ts::tracklet({{4.0, -1.0}});
  CHECK((mean_representative(single) - ts::vec({4.0, -1.0})).norm() == 0.0);
  const Tracklet constant = ts::tracklet({{2.5, 0.5}, {2.5, 0.5}, {2.5, 0.5}});
  CHECK((mean_representative(constant) - ts::vec({2.5, 0.5})).norm() == 0.0);

  ts::Rng rng(10);
  const Tracklet t = ts::random_tracklet(rng, 6, 3);
  Matrix shuffled = t.frames();
  std::vector<Index> perm(6);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  for (Index i = 0; i < 6; ++i) shuffled.row(i) = t.frames().row(perm[i]);
  const Vector a = mean_representative(t);
  const Vector b = mean_representative(Tracklet(shuffled));
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
}
