#pragma once

#include <vector>

#include "dgm/types.hpp"

namespace dgm {

/// One outer-loop iteration of the estimation pipeline.
struct IterationRecord {
  int iter = 0;
  double G = 0.0;  // matching objective of this iteration's assignment
  double F = 0.0;  // metric loss after this iteration's update
  bool accepted = true;  // whether the fresh assignment replaced the old one
  Index num_positive = 0;  // soft positives used for the metric update
  Index num_dummy = 0;     // dummy rows in this iteration's assignment
  // Objective of keeping the previous assignment under this iteration's
  // costs; equals G at iteration 0. Not serialized; lets tests check the
  // guard G(C^t, y^t) <= G(C^t, y^{t-1}) directly from history.
  double G_keep_previous = 0.0;
};

struct DgmResult {
  Assignment assignment;
  SoftLabelMatrix labels;
  Metric metric;
  std::vector<IterationRecord> history;
  CostMatrix final_costs;
  double final_dummy_cost = 0.0;
};

/// Full estimation loop: build costs under the current metric, match with
/// dummy capacity, re-weight labels, learn the metric, and repeat. A fresh
/// assignment is kept only when it lowers the matching objective under the
/// current cost matrix; otherwise the previous one is retained. Stops early
/// once the assignment is stable for two iterations and the metric loss has
/// settled. Never reads tracklet person ids.
DgmResult dgm_run(const CameraGraph& a, const CameraGraph& b,
                  const DgmConfig& config);

}  // namespace dgm
