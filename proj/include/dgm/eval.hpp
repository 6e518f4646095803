#pragma once

#include <vector>

#include "dgm/types.hpp"

namespace dgm {

/// Ground-truth pairing: per camera-A tracklet, the matching camera-B index
/// or kNoMatch when the person never appears in camera B.
using TruthPairing = std::vector<Index>;
inline constexpr Index kNoMatch = -1;

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
};

/// Precision / recall / F-score of the non-dummy predictions against the
/// truth pairing. Degenerate denominators report zero.
PrfScores label_prf(const Assignment& assignment, const TruthPairing& truth);

/// Cumulated matching characteristics: CMC[k] is the fraction of queries
/// whose correct gallery entry ranks within the top k+1 by ascending
/// distance, ties broken by lower gallery index.
Vector cmc(const Matrix& dist, const std::vector<Index>& truth_col);

/// Mean average precision over queries with one or more relevant entries.
double mean_ap(const Matrix& dist,
               const std::vector<std::vector<Index>>& relevant);

enum class SetDistanceMode { Mean, MinRegularized };

/// Set-to-set test distance: mean of all frame-pair distances, or the
/// regularized minimum min + alpha * mean.
double test_set_distance(const Metric& metric, const Tracklet& set_a,
                         const Tracklet& set_b, SetDistanceMode mode,
                         double alpha = 0.5);

struct OverlapStats {
  double same_id_rate = 0.0;
  double diff_id_rate = 0.0;
};

/// Fraction of cross-camera pairs whose k-nearest-neighbor sets (camera-A
/// neighborhoods mapped through the truth pairing) intersect, reported
/// separately for true pairs and for all non-matching pairs.
OverlapStats knn_overlap_stats(const CameraGraph& a, const CameraGraph& b,
                               const Metric& metric, Index k,
                               const TruthPairing& truth);

}  // namespace dgm
