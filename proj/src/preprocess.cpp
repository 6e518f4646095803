#include "dgm/preprocess.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace dgm {

PcaModel pca_fit(const Matrix& frames, Index d_out) {
  const Index n = frames.rows();
  const Index d_raw = frames.cols();
  if (n < 2) {
    raise(ErrorCode::TooFewSamples,
          "pca_fit needs at least 2 samples, got " + std::to_string(n));
  }
  if (d_out < 1 || d_out > std::min(n, d_raw)) {
    raise(ErrorCode::TooFewSamples,
          "d_out must lie in [1, min(N, d_raw)] = [1, " +
              std::to_string(std::min(n, d_raw)) + "], got " +
              std::to_string(d_out));
  }
  if (!frames.allFinite()) {
    raise(ErrorCode::DimensionMismatch, "pca_fit input contains NaN/Inf");
  }

  PcaModel model;
  model.mean = frames.colwise().mean();
  Matrix centered = frames.rowwise() - model.mean.transpose();

  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double rank_tol = static_cast<double>(std::max(n, d_raw)) *
                          std::numeric_limits<double>::epsilon() *
                          sv.maxCoeff();
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > rank_tol) ++rank;
  if (rank < d_out) {
    raise(ErrorCode::RankDeficient,
          "data rank " + std::to_string(rank) + " < requested d_out " +
              std::to_string(d_out));
  }

  model.basis = svd.matrixV().leftCols(d_out);
  // Deterministic sign: flip each column so its largest-magnitude entry is
  // positive (first such entry wins on ties).
  for (Index c = 0; c < d_out; ++c) {
    Index argmax = 0;
    model.basis.col(c).cwiseAbs().maxCoeff(&argmax);
    if (model.basis(argmax, c) < 0.0) model.basis.col(c) = -model.basis.col(c);
  }
  return model;
}

Vector pca_apply(const PcaModel& model, const Vector& frame) {
  if (frame.size() != model.mean.size()) {
    raise(ErrorCode::DimensionMismatch,
          "frame dimension " + std::to_string(frame.size()) +
              " != model dimension " + std::to_string(model.mean.size()));
  }
  return model.basis.transpose() * (frame - model.mean);
}

Tracklet pca_apply(const PcaModel& model, const Tracklet& tracklet) {
  if (tracklet.dim() != model.mean.size()) {
    raise(ErrorCode::DimensionMismatch,
          "tracklet dimension " + std::to_string(tracklet.dim()) +
              " != model dimension " + std::to_string(model.mean.size()));
  }
  Matrix projected = (tracklet.frames().rowwise() - model.mean.transpose()) *
                     model.basis;
  return Tracklet(std::move(projected), tracklet.person_id());
}

Tracklet max_pool(const Tracklet& tracklet, Index window) {
  if (window < 1) {
    raise(ErrorCode::ConfigInvalid, "pool window must be >= 1");
  }
  const Index n = tracklet.num_frames();
  const Index out = (n + window - 1) / window;
  Matrix pooled(out, tracklet.dim());
  for (Index b = 0; b < out; ++b) {
    const Index lo = b * window;
    const Index len = std::min(window, n - lo);
    pooled.row(b) = tracklet.frames().middleRows(lo, len).colwise().maxCoeff();
  }
  return Tracklet(std::move(pooled), tracklet.person_id());
}

Vector mean_representative(const Tracklet& tracklet) {
  return tracklet.frames().colwise().mean();
}

}  // namespace dgm
