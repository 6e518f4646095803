#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dgm/types.hpp"

namespace dgm {

/// Quadratic form (u - v)^T M (u - v) on arbitrary Eigen expressions.
/// Clamped at zero; a valid PSD metric can only dip below by roundoff.
template <typename M, typename U, typename V>
double mahalanobis(const Eigen::MatrixBase<M>& metric,
                   const Eigen::MatrixBase<U>& u,
                   const Eigen::MatrixBase<V>& v) {
  const Vector diff = u - v;
  return std::max(0.0, diff.dot(metric * diff));
}

double mahalanobis(const Metric& metric, const Vector& u, const Vector& v);

/// log(1 + e^z) in overflow-safe form: max(z, 0) + log1p(e^{-|z|}).
inline double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

/// Mean Mahalanobis distance over all frame pairs of two tracklets.
double sequence_cost(const Metric& metric, const Tracklet& t_i,
                     const Tracklet& t_j);

/// Same-camera k-nearest-neighbor set of one tracklet's representative.
/// Members are the k closest other indices; ties go to the lower index.
struct NeighborSet {
  Index owner = 0;
  std::vector<Index> members;
};

std::vector<NeighborSet> knn_neighborhoods(const CameraGraph& graph,
                                           const Metric& metric, Index k);

/// Mean cross-camera distance over all pairs of neighbor representatives.
/// Throws EmptyNeighborhood when either set is empty.
double neighborhood_cost(const Metric& metric, const NeighborSet& nbr_i,
                         const NeighborSet& nbr_j, const Matrix& reps_a,
                         const Matrix& reps_b);

/// Combined m x n assignment costs:
///   C(i,j) = softplus(C_S(i,j) + lambda * C_N(i,j))
/// with the neighborhood term dropping to zero for single-tracklet cameras.
CostMatrix assignment_costs(const CameraGraph& a, const CameraGraph& b,
                            const Metric& metric, double lambda, Index k);

}  // namespace dgm
