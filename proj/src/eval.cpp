#include "dgm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "dgm/cost_graph.hpp"

namespace dgm {

PrfScores label_prf(const Assignment& assignment, const TruthPairing& truth) {
  if (static_cast<Index>(truth.size()) != assignment.rows()) {
    raise(ErrorCode::DimensionMismatch,
          "truth pairing length does not match assignment rows");
  }
  Index predicted = 0;
  Index correct = 0;
  Index truth_pairs = 0;
  for (Index i = 0; i < assignment.rows(); ++i) {
    const Index t = truth[static_cast<std::size_t>(i)];
    if (t != kNoMatch) ++truth_pairs;
    if (!assignment.is_dummy(i)) {
      ++predicted;
      if (assignment.target(i) == t) ++correct;
    }
  }
  PrfScores scores;
  scores.precision =
      predicted > 0 ? static_cast<double>(correct) / predicted : 0.0;
  scores.recall =
      truth_pairs > 0 ? static_cast<double>(correct) / truth_pairs : 0.0;
  const double pr = scores.precision + scores.recall;
  scores.f_score = pr > 0.0 ? 2.0 * scores.precision * scores.recall / pr : 0.0;
  return scores;
}

Vector cmc(const Matrix& dist, const std::vector<Index>& truth_col) {
  const Index q = dist.rows();
  const Index g = dist.cols();
  if (static_cast<Index>(truth_col.size()) != q) {
    raise(ErrorCode::DimensionMismatch, "one truth column per query required");
  }
  Vector curve = Vector::Zero(g);
  std::vector<Index> order(static_cast<std::size_t>(g));
  for (Index i = 0; i < q; ++i) {
    const Index correct = truth_col[static_cast<std::size_t>(i)];
    if (correct < 0 || correct >= g) {
      raise(ErrorCode::InvalidAssignment,
            "truth column " + std::to_string(correct) + " out of range");
    }
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index x, Index y) {
      if (dist(i, x) != dist(i, y)) return dist(i, x) < dist(i, y);
      return x < y;
    });
    const auto pos = std::find(order.begin(), order.end(), correct);
    const Index rank = static_cast<Index>(pos - order.begin());
    for (Index r = rank; r < g; ++r) curve(r) += 1.0;
  }
  curve /= static_cast<double>(q);
  return curve;
}

double mean_ap(const Matrix& dist,
               const std::vector<std::vector<Index>>& relevant) {
  const Index q = dist.rows();
  const Index g = dist.cols();
  if (static_cast<Index>(relevant.size()) != q) {
    raise(ErrorCode::DimensionMismatch, "one relevant set per query required");
  }
  double sum_ap = 0.0;
  std::vector<Index> order(static_cast<std::size_t>(g));
  for (Index i = 0; i < q; ++i) {
    const auto& rel = relevant[static_cast<std::size_t>(i)];
    if (rel.empty()) {
      raise(ErrorCode::InvalidAssignment,
            "query " + std::to_string(i) + " has no relevant entries");
    }
    const std::unordered_set<Index> rel_set(rel.begin(), rel.end());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index x, Index y) {
      if (dist(i, x) != dist(i, y)) return dist(i, x) < dist(i, y);
      return x < y;
    });
    double ap = 0.0;
    Index hits = 0;
    for (Index r = 0; r < g; ++r) {
      if (rel_set.count(order[static_cast<std::size_t>(r)]) > 0) {
        ++hits;
        ap += static_cast<double>(hits) / static_cast<double>(r + 1);
      }
    }
    sum_ap += ap / static_cast<double>(rel_set.size());
  }
  return sum_ap / static_cast<double>(q);
}

double test_set_distance(const Metric& metric, const Tracklet& set_a,
                         const Tracklet& set_b, SetDistanceMode mode,
                         double alpha) {
  if (set_a.dim() != metric.dim() || set_b.dim() != metric.dim()) {
    raise(ErrorCode::DimensionMismatch, "set distance dimension mismatch");
  }
  double sum = 0.0;
  double minimum = std::numeric_limits<double>::infinity();
  for (Index p = 0; p < set_a.num_frames(); ++p) {
    for (Index r = 0; r < set_b.num_frames(); ++r) {
      const double d =
          mahalanobis(metric.matrix(), set_a.frames().row(p).transpose(),
                      set_b.frames().row(r).transpose());
      sum += d;
      minimum = std::min(minimum, d);
    }
  }
  const double mean =
      sum / static_cast<double>(set_a.num_frames() * set_b.num_frames());
  switch (mode) {
    case SetDistanceMode::Mean:
      return mean;
    case SetDistanceMode::MinRegularized:
      return minimum + alpha * mean;
  }
  raise(ErrorCode::ConfigInvalid, "unknown set distance mode");
}

OverlapStats knn_overlap_stats(const CameraGraph& a, const CameraGraph& b,
                               const Metric& metric, Index k,
                               const TruthPairing& truth) {
  validate_bundle(a, b);
  if (static_cast<Index>(truth.size()) != a.size()) {
    raise(ErrorCode::DimensionMismatch,
          "truth pairing length does not match camera A");
  }
  const auto nbrs_a = knn_neighborhoods(a, metric, k);
  const auto nbrs_b = knn_neighborhoods(b, metric, k);

  // Camera-A neighborhoods mapped to camera-B indices via the truth pairing;
  // neighbors without a correspondence drop out.
  std::vector<std::unordered_set<Index>> mapped(
      static_cast<std::size_t>(a.size()));
  for (Index i = 0; i < a.size(); ++i) {
    for (Index nbr : nbrs_a[static_cast<std::size_t>(i)].members) {
      const Index j = truth[static_cast<std::size_t>(nbr)];
      if (j != kNoMatch) mapped[static_cast<std::size_t>(i)].insert(j);
    }
  }
  auto intersects = [&](Index i, Index j) {
    for (Index nbr : nbrs_b[static_cast<std::size_t>(j)].members) {
      if (mapped[static_cast<std::size_t>(i)].count(nbr) > 0) return true;
    }
    return false;
  };

  Index same_total = 0;
  Index same_hits = 0;
  Index diff_total = 0;
  Index diff_hits = 0;
  for (Index i = 0; i < a.size(); ++i) {
    const Index ti = truth[static_cast<std::size_t>(i)];
    for (Index j = 0; j < b.size(); ++j) {
      const bool same = (ti == j);
      const bool hit = intersects(i, j);
      if (same) {
        ++same_total;
        same_hits += hit ? 1 : 0;
      } else {
        ++diff_total;
        diff_hits += hit ? 1 : 0;
      }
    }
  }
  OverlapStats stats;
  stats.same_id_rate =
      same_total > 0 ? static_cast<double>(same_hits) / same_total : 0.0;
  stats.diff_id_rate =
      diff_total > 0 ? static_cast<double>(diff_hits) / diff_total : 0.0;
  return stats;
}

}  // namespace dgm
