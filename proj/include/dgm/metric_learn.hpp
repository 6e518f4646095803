#pragma once

#include <vector>

#include "dgm/types.hpp"

namespace dgm {

/// Labeled representative differences feeding the metric loss. Stored
/// struct-of-arrays: row p of `diffs` pairs with labels(p) and weights(p).
struct TrainingPairs {
  Matrix diffs;    // P x d, rows are rep_a(i) - rep_b(j)
  Vector labels;   // P entries in {-1} U (0, 1]
  Vector weights;  // P positive class-balancing weights
  double c0 = 0.0;

  Index size() const { return diffs.rows(); }
};

/// Mean representative distance between the two cameras under the current
/// metric, clamped to a small positive floor; the loss margin bias.
double camera_bias_c0(const CameraGraph& a, const CameraGraph& b,
                      const Metric& metric);

/// Collects the nonzero soft-label cells into training pairs.
/// Throws NoPositives when no labeled cell remains.
TrainingPairs make_training_pairs(const CameraGraph& a, const CameraGraph& b,
                                  const SoftLabelMatrix& labels, double c0);

/// Per-pair loss log(1 + exp(l * (diff^T M diff - c0))), overflow-safe.
/// Accepts a raw matrix so optimizer intermediates (which may leave the PSD
/// cone) and finite-difference probes evaluate the same expression.
double pair_loss(const Matrix& m, const Vector& diff, double label, double c0);

/// Weighted sum of pair losses.
double total_loss(const Matrix& m, const TrainingPairs& pairs);

/// Gradient of total_loss in M: sum_p w_p l_p sigma(l_p (D_p - c0)) d_p d_p^T.
Matrix loss_gradient(const Matrix& m, const TrainingPairs& pairs);

/// Frobenius-nearest PSD matrix: symmetrize, eigendecompose, clamp negative
/// eigenvalues to zero.
Metric psd_project(const Matrix& sym);

struct ApgResult {
  Metric metric;
  std::vector<double> loss_history;  // loss_history.front() == loss at m0
};

/// Accelerated proximal gradient on the PSD cone with backtracking line
/// search and momentum restart on overshoot. The recorded loss history is
/// non-increasing and the result never exceeds the starting loss.
ApgResult apg_optimize(const TrainingPairs& pairs, const Metric& m0,
                       int max_steps, double tol);

}  // namespace dgm
