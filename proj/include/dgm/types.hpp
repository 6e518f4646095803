#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dgm/errors.hpp"

namespace dgm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Sentinel person id in the bundle file format.
inline constexpr std::uint32_t kUnknownPersonId = 0xFFFFFFFFu;

/// One person's frame-feature sequence in one camera. Frames are rows of
/// an Eigen matrix (num_frames x dim). Immutable after construction.
class Tracklet {
 public:
  explicit Tracklet(Matrix frames,
                    std::optional<std::uint32_t> person_id = std::nullopt);

  Index num_frames() const { return frames_.rows(); }
  Index dim() const { return frames_.cols(); }
  const Matrix& frames() const { return frames_; }
  const std::optional<std::uint32_t>& person_id() const { return person_id_; }

 private:
  Matrix frames_;
  std::optional<std::uint32_t> person_id_;
};

/// Ordered tracklets of one camera plus cached per-tracklet mean
/// representatives (size x dim). All tracklets share one dimension.
class CameraGraph {
 public:
  explicit CameraGraph(std::vector<Tracklet> tracklets);

  Index size() const { return static_cast<Index>(tracklets_.size()); }
  Index dim() const { return representatives_.cols(); }
  const std::vector<Tracklet>& tracklets() const { return tracklets_; }
  const Tracklet& tracklet(Index i) const {
    return tracklets_[static_cast<std::size_t>(i)];
  }
  const Matrix& representatives() const { return representatives_; }

 private:
  std::vector<Tracklet> tracklets_;
  Matrix representatives_;
};

class Metric;
Metric psd_project(const Matrix& sym);

/// Symmetric positive semidefinite d x d matrix defining the Mahalanobis
/// form D_M(u, v) = (u - v)^T M (u - v). Construction validates symmetry
/// (max |M - M^T| <= 1e-10) and PSD-ness (min eigenvalue >= -1e-10).
class Metric {
 public:
  explicit Metric(Matrix m);

  static Metric identity(Index dim);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  struct unchecked_t {};
  Metric(Matrix m, unchecked_t) : m_(std::move(m)) {}
  friend Metric psd_project(const Matrix& sym);

  Matrix m_;
};

/// m x n combined assignment costs with the arithmetic mean cached at
/// construction. Entries must be finite and nonnegative.
class CostMatrix {
 public:
  explicit CostMatrix(Matrix c);

  Index rows() const { return c_.rows(); }
  Index cols() const { return c_.cols(); }
  const Matrix& values() const { return c_; }
  double operator()(Index i, Index j) const { return c_(i, j); }
  double mean_cost() const { return mean_cost_; }

 private:
  Matrix c_;
  double mean_cost_;
};

/// Row-to-column matching with a dummy sentinel for "no correspondence".
/// Every row has exactly one target; each real column is used at most once;
/// any number of rows may be dummy.
class Assignment {
 public:
  static constexpr Index kDummy = -1;

  Assignment(std::vector<Index> targets, Index num_cols);

  Index rows() const { return static_cast<Index>(targets_.size()); }
  Index cols() const { return num_cols_; }
  Index target(Index row) const {
    return targets_[static_cast<std::size_t>(row)];
  }
  bool is_dummy(Index row) const { return target(row) == kDummy; }
  Index num_dummy() const;
  const std::vector<Index>& targets() const { return targets_; }

  bool operator==(const Assignment& other) const = default;

 private:
  std::vector<Index> targets_;
  Index num_cols_;
};

/// Re-weighted labels: soft positives in (0, 1], hard negatives at -1,
/// filtered pairs at 0, plus the per-class balancing weights.
class SoftLabelMatrix {
 public:
  SoftLabelMatrix(Matrix l, double pos_weight, double neg_weight);

  Index rows() const { return l_.rows(); }
  Index cols() const { return l_.cols(); }
  const Matrix& labels() const { return l_; }
  double operator()(Index i, Index j) const { return l_(i, j); }
  double pos_weight() const { return pos_weight_; }
  double neg_weight() const { return neg_weight_; }
  Index num_positive() const { return num_positive_; }
  Index num_negative() const { return num_negative_; }

 private:
  Matrix l_;
  double pos_weight_;
  double neg_weight_;
  Index num_positive_;
  Index num_negative_;
};

/// How the dummy assignment cost is derived from the cost matrix.
struct DummyCostMode {
  enum class Kind { Mean, Fixed, Percentile };

  Kind kind = Kind::Mean;
  double value = 0.0;  // fixed cost, or percentile in [0, 100]

  static DummyCostMode mean() { return {Kind::Mean, 0.0}; }
  static DummyCostMode fixed(double v) { return {Kind::Fixed, v}; }
  static DummyCostMode percentile(double p) { return {Kind::Percentile, p}; }

  bool operator==(const DummyCostMode&) const = default;
};

struct DgmConfig {
  double lambda = 0.5;
  Index k = 5;
  int max_iter = 10;
  Index pca_dim = 600;
  Index pool_window = 10;
  DummyCostMode dummy_cost_mode = DummyCostMode::mean();
  std::uint64_t rng_seed = 0;
  int apg_max_steps = 100;
  double apg_tol = 1e-6;

  void validate() const;  // throws ConfigInvalid
};

/// Checks that both graphs are non-empty, all tracklets share one feature
/// dimension, and the cached representatives are consistent. Returns the
/// shared dimension.
Index validate_bundle(const CameraGraph& a, const CameraGraph& b);

}  // namespace dgm
