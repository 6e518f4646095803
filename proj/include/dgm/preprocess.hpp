#pragma once

#include "dgm/types.hpp"

namespace dgm {

/// Linear projection fitted on mean-centered frames. Basis columns are
/// orthonormal, ordered by descending explained variance, and sign-normalized
/// so each column's largest-magnitude entry is positive.
struct PcaModel {
  Vector mean;   // d_raw
  Matrix basis;  // d_raw x d_out
};

/// Fits a PCA model on `frames` (one frame per row). Requires at least two
/// samples and d_out <= min(N, d_raw); throws RankDeficient when the data
/// carries fewer than d_out nonzero singular values.
PcaModel pca_fit(const Matrix& frames, Index d_out);

/// Projects a single frame: basis^T (frame - mean).
Vector pca_apply(const PcaModel& model, const Vector& frame);

/// Projects every frame of a tracklet, keeping the person id.
Tracklet pca_apply(const PcaModel& model, const Tracklet& tracklet);

/// Element-wise maxima over consecutive windows of `window` frames; the
/// final partial window is pooled as-is. Output length = ceil(len / window).
Tracklet max_pool(const Tracklet& tracklet, Index window);

/// Arithmetic mean over a tracklet's frames.
Vector mean_representative(const Tracklet& tracklet);

}  // namespace dgm
