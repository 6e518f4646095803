#include "dgm/cost_graph.hpp"

#include <numeric>
#include <string>
#include <utility>

namespace dgm {

namespace {

// Mean of f^T M f over a tracklet's frames, one value per tracklet.
Vector mean_quadratic_forms(const CameraGraph& g, const Matrix& m) {
  Vector q(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    const Matrix& frames = g.tracklet(i).frames();
    q(i) = (frames * m).cwiseProduct(frames).sum() /
           static_cast<double>(frames.rows());
  }
  return q;
}

Vector rep_quadratic_forms(const Matrix& reps, const Matrix& m) {
  return (reps * m).cwiseProduct(reps).rowwise().sum();
}

}  // namespace

double mahalanobis(const Metric& metric, const Vector& u, const Vector& v) {
  if (u.size() != v.size() || u.size() != metric.dim()) {
    raise(ErrorCode::DimensionMismatch,
          "mahalanobis dimensions: metric " + std::to_string(metric.dim()) +
              ", u " + std::to_string(u.size()) + ", v " +
              std::to_string(v.size()));
  }
  return mahalanobis(metric.matrix(), u, v);
}

double sequence_cost(const Metric& metric, const Tracklet& t_i,
                     const Tracklet& t_j) {
  if (t_i.dim() != metric.dim() || t_j.dim() != metric.dim()) {
    raise(ErrorCode::DimensionMismatch, "sequence_cost dimension mismatch");
  }
  double sum = 0.0;
  for (Index p = 0; p < t_i.num_frames(); ++p) {
    for (Index q = 0; q < t_j.num_frames(); ++q) {
      sum += mahalanobis(metric.matrix(), t_i.frames().row(p).transpose(),
                         t_j.frames().row(q).transpose());
    }
  }
  return sum / static_cast<double>(t_i.num_frames() * t_j.num_frames());
}

std::vector<NeighborSet> knn_neighborhoods(const CameraGraph& graph,
                                           const Metric& metric, Index k) {
  if (k < 1) raise(ErrorCode::ConfigInvalid, "k must be >= 1");
  const Index m = graph.size();
  const Matrix& reps = graph.representatives();
  const Vector q = rep_quadratic_forms(reps, metric.matrix());
  const Matrix cross = reps * metric.matrix() * reps.transpose();

  std::vector<NeighborSet> result(static_cast<std::size_t>(m));
  std::vector<std::pair<double, Index>> order;
  order.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    order.clear();
    for (Index j = 0; j < m; ++j) {
      if (j == i) continue;
      order.emplace_back(q(i) + q(j) - 2.0 * cross(i, j), j);
    }
    std::sort(order.begin(), order.end());
    const Index take = std::min<Index>(k, m - 1);
    NeighborSet& set = result[static_cast<std::size_t>(i)];
    set.owner = i;
    set.members.reserve(static_cast<std::size_t>(take));
    for (Index t = 0; t < take; ++t) set.members.push_back(order[t].second);
    std::sort(set.members.begin(), set.members.end());
  }
  return result;
}

double neighborhood_cost(const Metric& metric, const NeighborSet& nbr_i,
                         const NeighborSet& nbr_j, const Matrix& reps_a,
                         const Matrix& reps_b) {
  if (nbr_i.members.empty() || nbr_j.members.empty()) {
    raise(ErrorCode::EmptyNeighborhood,
          "neighborhood cost undefined for empty neighbor sets");
  }
  double sum = 0.0;
  for (Index ia : nbr_i.members) {
    for (Index jb : nbr_j.members) {
      sum += mahalanobis(metric.matrix(), reps_a.row(ia).transpose(),
                         reps_b.row(jb).transpose());
    }
  }
  return sum /
         static_cast<double>(nbr_i.members.size() * nbr_j.members.size());
}

CostMatrix assignment_costs(const CameraGraph& a, const CameraGraph& b,
                            const Metric& metric, double lambda, Index k) {
  const Index d = validate_bundle(a, b);
  if (metric.dim() != d) {
    raise(ErrorCode::DimensionMismatch, "metric dimension != bundle dimension");
  }
  const Index m = a.size();
  const Index n = b.size();
  const Matrix& ma = metric.matrix();

  // Sequence cost, factored:
  //   C_S(i,j) = mean_u u^T M u + mean_v v^T M v - 2 rep_a(i)^T M rep_b(j).
  const Vector qa = mean_quadratic_forms(a, ma);
  const Vector qb = mean_quadratic_forms(b, ma);
  const Matrix rep_cross =
      a.representatives() * ma * b.representatives().transpose();
  Matrix z = (-2.0 * rep_cross);
  z.colwise() += qa;
  z.rowwise() += qb.transpose();
  z = z.cwiseMax(0.0);

  // Neighborhood cost over mean representatives, averaged across the
  // k-nearest-neighbor sets of both endpoints. Degenerate graphs (one
  // tracklet in either camera) contribute zero.
  if (lambda != 0.0 && m > 1 && n > 1) {
    const Vector ra = rep_quadratic_forms(a.representatives(), ma);
    const Vector rb = rep_quadratic_forms(b.representatives(), ma);
    Matrix rep_dist = (-2.0 * rep_cross);
    rep_dist.colwise() += ra;
    rep_dist.rowwise() += rb.transpose();
    rep_dist = rep_dist.cwiseMax(0.0);

    const auto nbrs_a = knn_neighborhoods(a, metric, k);
    const auto nbrs_b = knn_neighborhoods(b, metric, k);
    for (Index i = 0; i < m; ++i) {
      const auto& na = nbrs_a[static_cast<std::size_t>(i)].members;
      for (Index j = 0; j < n; ++j) {
        const auto& nb = nbrs_b[static_cast<std::size_t>(j)].members;
        double sum = 0.0;
        for (Index ia : na) {
          for (Index jb : nb) sum += rep_dist(ia, jb);
        }
        z(i, j) +=
            lambda * sum / static_cast<double>(na.size() * nb.size());
      }
    }
  }

  Matrix c(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) c(i, j) = softplus(z(i, j));
  }
  return CostMatrix(std::move(c));
}

}  // namespace dgm
