#include "dgm/metric_learn.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "dgm/cost_graph.hpp"

namespace dgm {

namespace {

constexpr double kC0Floor = 1e-6;

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Quadratic forms diff^T M diff for every pair, unclamped.
Vector pair_distances(const Matrix& m, const TrainingPairs& pairs) {
  return (pairs.diffs * m).cwiseProduct(pairs.diffs).rowwise().sum();
}

}  // namespace

double camera_bias_c0(const CameraGraph& a, const CameraGraph& b,
                      const Metric& metric) {
  validate_bundle(a, b);
  if (metric.dim() != a.dim()) {
    raise(ErrorCode::DimensionMismatch, "metric dimension != bundle dimension");
  }
  const Matrix& ra = a.representatives();
  const Matrix& rb = b.representatives();
  const Vector qa = (ra * metric.matrix()).cwiseProduct(ra).rowwise().sum();
  const Vector qb = (rb * metric.matrix()).cwiseProduct(rb).rowwise().sum();
  const double cross = (ra * metric.matrix() * rb.transpose()).mean();
  const double mean_dist = qa.mean() + qb.mean() - 2.0 * cross;
  return std::max(mean_dist, kC0Floor);
}

TrainingPairs make_training_pairs(const CameraGraph& a, const CameraGraph& b,
                                  const SoftLabelMatrix& labels, double c0) {
  if (labels.rows() != a.size() || labels.cols() != b.size()) {
    raise(ErrorCode::DimensionMismatch,
          "label matrix shape does not match the camera graphs");
  }
  if (!(c0 > 0.0)) {
    raise(ErrorCode::ConfigInvalid, "c0 must be positive");
  }
  const Index count = labels.num_positive() + labels.num_negative();
  if (count == 0) {
    raise(ErrorCode::NoPositives, "no labeled cells to train on");
  }
  TrainingPairs pairs;
  pairs.diffs.resize(count, a.dim());
  pairs.labels.resize(count);
  pairs.weights.resize(count);
  pairs.c0 = c0;
  Index p = 0;
  for (Index i = 0; i < labels.rows(); ++i) {
    for (Index j = 0; j < labels.cols(); ++j) {
      const double l = labels(i, j);
      if (l == 0.0) continue;
      pairs.diffs.row(p) =
          a.representatives().row(i) - b.representatives().row(j);
      pairs.labels(p) = l;
      pairs.weights(p) = l > 0.0 ? labels.pos_weight() : labels.neg_weight();
      ++p;
    }
  }
  return pairs;
}

double pair_loss(const Matrix& m, const Vector& diff, double label,
                 double c0) {
  if (label == 0.0) {
    raise(ErrorCode::InvalidAssignment, "pair_loss needs a nonzero label");
  }
  const double d = diff.dot(m * diff);
  return softplus(label * (d - c0));
}

double total_loss(const Matrix& m, const TrainingPairs& pairs) {
  if (pairs.size() == 0) {
    raise(ErrorCode::NoPositives, "total_loss needs at least one pair");
  }
  const Vector d = pair_distances(m, pairs);
  double sum = 0.0;
  for (Index p = 0; p < pairs.size(); ++p) {
    sum += pairs.weights(p) * softplus(pairs.labels(p) * (d(p) - pairs.c0));
  }
  return sum;
}

Matrix loss_gradient(const Matrix& m, const TrainingPairs& pairs) {
  if (pairs.size() == 0) {
    raise(ErrorCode::NoPositives, "loss_gradient needs at least one pair");
  }
  const Vector d = pair_distances(m, pairs);
  Vector scale(pairs.size());
  for (Index p = 0; p < pairs.size(); ++p) {
    const double l = pairs.labels(p);
    scale(p) = pairs.weights(p) * l * logistic(l * (d(p) - pairs.c0));
  }
  Matrix grad =
      pairs.diffs.transpose() * scale.asDiagonal() * pairs.diffs;
  return 0.5 * (grad + grad.transpose());
}

Metric psd_project(const Matrix& sym) {
  if (!sym.allFinite()) {
    raise(ErrorCode::EigenFailure, "psd_project input contains NaN/Inf");
  }
  if (sym.rows() != sym.cols()) {
    raise(ErrorCode::DimensionMismatch, "psd_project needs a square matrix");
  }
  const Matrix symmetrized = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized);
  if (es.info() != Eigen::Success) {
    raise(ErrorCode::EigenFailure, "eigendecomposition failed");
  }
  const Vector clamped = es.eigenvalues().cwiseMax(0.0);
  Matrix projected = es.eigenvectors() * clamped.asDiagonal() *
                     es.eigenvectors().transpose();
  projected = 0.5 * (projected + projected.transpose());
  return Metric(std::move(projected), Metric::unchecked_t{});
}

namespace {

// One proximal step from anchor `y`, halving `step` until the composite
// sufficient-decrease condition holds. Returns nullopt when no acceptable
// step remains.
std::optional<Matrix> backtracking_step(const Matrix& y, double loss_y,
                                        const Matrix& grad,
                                        const TrainingPairs& pairs,
                                        double& step) {
  for (int halvings = 0; halvings < 60; ++halvings) {
    Matrix candidate = psd_project(y - step * grad).matrix();
    const Matrix delta = candidate - y;
    const double bound = loss_y + grad.cwiseProduct(delta).sum() +
                         delta.squaredNorm() / (2.0 * step);
    const double loss_c = total_loss(candidate, pairs);
    if (loss_c <= bound + 1e-12 * std::max(1.0, std::abs(bound))) {
      return candidate;
    }
    step *= 0.5;
  }
  return std::nullopt;
}

}  // namespace

ApgResult apg_optimize(const TrainingPairs& pairs, const Metric& m0,
                       int max_steps, double tol) {
  if (max_steps < 1) {
    raise(ErrorCode::ConfigInvalid, "max_steps must be >= 1");
  }
  Matrix prev = m0.matrix();
  Matrix y = prev;
  double loss_prev = total_loss(prev, pairs);
  std::vector<double> history{loss_prev};

  // sigma'(z) <= 1/4 bounds the gradient Lipschitz constant by
  // (1/4) sum w l^2 ||d||^4; use its inverse as the opening step size.
  double lipschitz = 0.0;
  for (Index p = 0; p < pairs.size(); ++p) {
    const double n2 = pairs.diffs.row(p).squaredNorm();
    lipschitz +=
        0.25 * pairs.weights(p) * pairs.labels(p) * pairs.labels(p) * n2 * n2;
  }
  double step = 1.0 / std::max(lipschitz, 1e-300);
  double momentum = 1.0;

  for (int s = 0; s < max_steps; ++s) {
    Matrix grad = loss_gradient(y, pairs);
    double loss_y = total_loss(y, pairs);
    std::optional<Matrix> candidate =
        backtracking_step(y, loss_y, grad, pairs, step);
    double loss_cand = candidate ? total_loss(*candidate, pairs)
                                 : std::numeric_limits<double>::infinity();

    // Momentum overshoot: restart from the last accepted iterate.
    if (!candidate ||
        loss_cand > loss_prev + 1e-12 * std::max(1.0, std::abs(loss_prev))) {
      momentum = 1.0;
      y = prev;
      grad = loss_gradient(y, pairs);
      candidate = backtracking_step(y, loss_prev, grad, pairs, step);
      loss_cand = candidate ? total_loss(*candidate, pairs)
                            : std::numeric_limits<double>::infinity();
      if (!candidate || loss_cand > loss_prev) {
        candidate = prev;
        loss_cand = loss_prev;
      }
    }

    const double momentum_next =
        0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = *candidate + ((momentum - 1.0) / momentum_next) * (*candidate - prev);
    const bool converged =
        std::abs(loss_prev - loss_cand) <=
        tol * std::max(1.0, std::abs(loss_prev));
    prev = std::move(*candidate);
    loss_prev = loss_cand;
    momentum = momentum_next;
    history.push_back(loss_prev);
    if (converged) break;
  }

  return ApgResult{psd_project(prev), std::move(history)};
}

}  // namespace dgm
