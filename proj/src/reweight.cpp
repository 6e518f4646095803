#include "dgm/reweight.hpp"

#include <cmath>
#include <utility>

namespace dgm {

double mean_cost(const CostMatrix& costs) { return costs.values().mean(); }

SoftLabelMatrix soft_label_partition(const CostMatrix& costs,
                                     const Assignment& assignment) {
  if (assignment.rows() != costs.rows() || assignment.cols() != costs.cols()) {
    raise(ErrorCode::InvalidAssignment,
          "assignment shape does not match cost matrix");
  }
  const double threshold = costs.mean_cost();
  Matrix l = Matrix::Zero(costs.rows(), costs.cols());
  Index num_pos = 0;
  Index num_neg = 0;
  for (Index i = 0; i < costs.rows(); ++i) {
    for (Index j = 0; j < costs.cols(); ++j) {
      if (costs(i, j) >= threshold) continue;  // filtered either way
      if (assignment.target(i) == j) {
        const double soft = std::exp(-costs(i, j));
        if (soft > 0.0) {  // confidence can underflow for huge costs
          l(i, j) = soft;
          ++num_pos;
        }
      } else {
        l(i, j) = -1.0;
        ++num_neg;
      }
    }
  }
  const double pos_w = num_pos > 0 ? 1.0 / static_cast<double>(num_pos) : 0.0;
  const double neg_w = num_neg > 0 ? 1.0 / static_cast<double>(num_neg) : 0.0;
  return SoftLabelMatrix(std::move(l), pos_w, neg_w);
}

SoftLabelMatrix reweight_labels(const CostMatrix& costs,
                                const Assignment& assignment) {
  SoftLabelMatrix labels = soft_label_partition(costs, assignment);
  if (labels.num_positive() == 0) {
    raise(ErrorCode::NoPositives, "every matched pair was filtered");
  }
  if (labels.num_negative() == 0) {
    raise(ErrorCode::NoNegatives, "no hard negatives below the mean cost");
  }
  return labels;
}

}  // namespace dgm
