#include "dgm/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace dgm {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kPsdTol = 1e-10;
constexpr double kRepresentativeTol = 1e-12;

}  // namespace

Tracklet::Tracklet(Matrix frames, std::optional<std::uint32_t> person_id)
    : frames_(std::move(frames)), person_id_(person_id) {
  if (frames_.rows() < 1 || frames_.cols() < 1) {
    raise(ErrorCode::EmptyGraph, "tracklet needs at least one frame");
  }
  if (!frames_.allFinite()) {
    raise(ErrorCode::DimensionMismatch, "tracklet frames contain NaN/Inf");
  }
}

CameraGraph::CameraGraph(std::vector<Tracklet> tracklets)
    : tracklets_(std::move(tracklets)) {
  if (tracklets_.empty()) {
    raise(ErrorCode::EmptyGraph, "camera graph has no tracklets");
  }
  const Index d = tracklets_.front().dim();
  representatives_.resize(static_cast<Index>(tracklets_.size()), d);
  for (std::size_t i = 0; i < tracklets_.size(); ++i) {
    if (tracklets_[i].dim() != d) {
      raise(ErrorCode::DimensionMismatch,
            "tracklet " + std::to_string(i) + " has dimension " +
                std::to_string(tracklets_[i].dim()) + ", expected " +
                std::to_string(d));
    }
    representatives_.row(static_cast<Index>(i)) =
        tracklets_[i].frames().colwise().mean();
  }
}

Metric::Metric(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    raise(ErrorCode::DimensionMismatch, "metric must be square");
  }
  if (!m_.allFinite()) {
    raise(ErrorCode::EigenFailure, "metric contains NaN/Inf");
  }
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol) {
    raise(ErrorCode::DimensionMismatch,
          "metric not symmetric (max |M - M^T| = " + std::to_string(asym) +
              ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    raise(ErrorCode::EigenFailure, "eigendecomposition failed");
  }
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    raise(ErrorCode::EigenFailure,
          "metric not positive semidefinite (min eigenvalue = " +
              std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
}

Metric Metric::identity(Index dim) {
  return Metric(Matrix::Identity(dim, dim), unchecked_t{});
}

CostMatrix::CostMatrix(Matrix c) : c_(std::move(c)) {
  if (c_.rows() < 1 || c_.cols() < 1) {
    raise(ErrorCode::EmptyGraph, "cost matrix is empty");
  }
  if (!c_.allFinite()) {
    raise(ErrorCode::DimensionMismatch, "cost matrix contains NaN/Inf");
  }
  if (c_.minCoeff() < 0.0) {
    raise(ErrorCode::InvalidAssignment, "cost matrix has negative entries");
  }
  mean_cost_ = c_.mean();
}

Assignment::Assignment(std::vector<Index> targets, Index num_cols)
    : targets_(std::move(targets)), num_cols_(num_cols) {
  if (targets_.empty() || num_cols_ < 1) {
    raise(ErrorCode::InvalidAssignment, "assignment must be non-empty");
  }
  std::vector<bool> used(static_cast<std::size_t>(num_cols_), false);
  for (Index t : targets_) {
    if (t == kDummy) continue;
    if (t < 0 || t >= num_cols_) {
      raise(ErrorCode::InvalidAssignment,
            "target column " + std::to_string(t) + " out of range");
    }
    if (used[static_cast<std::size_t>(t)]) {
      raise(ErrorCode::InvalidAssignment,
            "column " + std::to_string(t) + " assigned twice");
    }
    used[static_cast<std::size_t>(t)] = true;
  }
}

Index Assignment::num_dummy() const {
  Index n = 0;
  for (Index t : targets_) n += (t == kDummy) ? 1 : 0;
  return n;
}

SoftLabelMatrix::SoftLabelMatrix(Matrix l, double pos_weight,
                                 double neg_weight)
    : l_(std::move(l)),
      pos_weight_(pos_weight),
      neg_weight_(neg_weight),
      num_positive_(0),
      num_negative_(0) {
  for (Index i = 0; i < l_.rows(); ++i) {
    for (Index j = 0; j < l_.cols(); ++j) {
      const double v = l_(i, j);
      if (v > 0.0 && v <= 1.0) {
        ++num_positive_;
      } else if (v == -1.0) {
        ++num_negative_;
      } else if (v != 0.0) {
        raise(ErrorCode::InvalidAssignment,
              "soft label outside {-1, 0} U (0, 1]: " + std::to_string(v));
      }
    }
  }
  auto check_weight = [](double w, Index count, const char* name) {
    const double expected = count > 0 ? 1.0 / static_cast<double>(count) : 0.0;
    if (std::abs(w - expected) > 1e-12) {
      raise(ErrorCode::InvalidAssignment,
            std::string(name) + " inconsistent with label counts");
    }
  };
  check_weight(pos_weight_, num_positive_, "pos_weight");
  check_weight(neg_weight_, num_negative_, "neg_weight");
}

void DgmConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    raise(ErrorCode::ConfigInvalid, "lambda must be >= 0");
  }
  if (k < 1) raise(ErrorCode::ConfigInvalid, "k must be >= 1");
  if (max_iter < 1) raise(ErrorCode::ConfigInvalid, "max_iter must be >= 1");
  if (pool_window < 1) {
    raise(ErrorCode::ConfigInvalid, "pool_window must be >= 1");
  }
  if (pca_dim < 1) raise(ErrorCode::ConfigInvalid, "pca_dim must be >= 1");
  if (apg_max_steps < 1) {
    raise(ErrorCode::ConfigInvalid, "apg_max_steps must be >= 1");
  }
  if (!(apg_tol >= 0.0)) raise(ErrorCode::ConfigInvalid, "apg_tol must be >= 0");
  if (dummy_cost_mode.kind == DummyCostMode::Kind::Percentile &&
      (dummy_cost_mode.value < 0.0 || dummy_cost_mode.value > 100.0)) {
    raise(ErrorCode::ConfigInvalid, "percentile must lie in [0, 100]");
  }
  if (dummy_cost_mode.kind == DummyCostMode::Kind::Fixed &&
      !std::isfinite(dummy_cost_mode.value)) {
    raise(ErrorCode::ConfigInvalid, "fixed dummy cost must be finite");
  }
}

Index validate_bundle(const CameraGraph& a, const CameraGraph& b) {
  if (a.size() < 1) raise(ErrorCode::EmptyGraph, "camera A is empty");
  if (b.size() < 1) raise(ErrorCode::EmptyGraph, "camera B is empty");
  const Index d = a.dim();
  if (b.dim() != d) {
    raise(ErrorCode::DimensionMismatch,
          "camera dimensions differ: " + std::to_string(d) + " vs " +
              std::to_string(b.dim()));
  }
  for (const CameraGraph* g : {&a, &b}) {
    for (Index i = 0; i < g->size(); ++i) {
      const Tracklet& t = g->tracklet(i);
      if (t.dim() != d) {
        raise(ErrorCode::DimensionMismatch,
              "tracklet " + std::to_string(i) + " has dimension " +
                  std::to_string(t.dim()));
      }
      const Vector recomputed = t.frames().colwise().mean();
      const double delta =
          (recomputed.transpose() - g->representatives().row(i))
              .cwiseAbs()
              .maxCoeff();
      if (delta > kRepresentativeTol) {
        raise(ErrorCode::DimensionMismatch,
              "cached representative " + std::to_string(i) + " is stale");
      }
    }
  }
  return d;
}

}  // namespace dgm
