#include "dgm/driver.hpp"

#include <cmath>
#include <utility>

#include "dgm/cost_graph.hpp"
#include "dgm/matcher.hpp"
#include "dgm/metric_learn.hpp"
#include "dgm/reweight.hpp"

namespace dgm {

namespace {

constexpr double kConvergenceFTol = 1e-5;

// Loss of the current metric over whatever labeled pairs exist; zero when
// nothing is labeled.
double diagnostic_loss(const CameraGraph& a, const CameraGraph& b,
                       const Metric& metric, const SoftLabelMatrix& labels) {
  if (labels.num_positive() + labels.num_negative() == 0) return 0.0;
  const double c0 = camera_bias_c0(a, b, metric);
  const TrainingPairs pairs = make_training_pairs(a, b, labels, c0);
  return total_loss(metric.matrix(), pairs);
}

}  // namespace

DgmResult dgm_run(const CameraGraph& a, const CameraGraph& b,
                  const DgmConfig& config) {
  config.validate();
  const Index d = validate_bundle(a, b);

  Metric metric = Metric::identity(d);
  CostMatrix costs = assignment_costs(a, b, metric, config.lambda, config.k);
  double dummy = dummy_cost_value(costs, config.dummy_cost_mode);
  MatchResult match = solve_assignment(costs, dummy);
  Assignment y = std::move(match.assignment);

  std::vector<IterationRecord> history;
  history.reserve(static_cast<std::size_t>(config.max_iter) + 1);
  {
    const SoftLabelMatrix initial = soft_label_partition(costs, y);
    IterationRecord rec;
    rec.iter = 0;
    rec.G = match.objective;
    rec.G_keep_previous = match.objective;
    rec.F = diagnostic_loss(a, b, metric, initial);
    rec.accepted = true;
    rec.num_positive = initial.num_positive();
    rec.num_dummy = y.num_dummy();
    history.push_back(rec);
  }

  int stable_iterations = 0;
  for (int t = 1; t <= config.max_iter; ++t) {
    // Re-weight the previous iteration's matching and update the metric;
    // an empty positive or negative class skips the update for this round.
    double loss_after = history.back().F;
    Index num_positive = 0;
    try {
      const SoftLabelMatrix labels = reweight_labels(costs, y);
      const double c0 = camera_bias_c0(a, b, metric);
      const TrainingPairs pairs = make_training_pairs(a, b, labels, c0);
      ApgResult apg =
          apg_optimize(pairs, metric, config.apg_max_steps, config.apg_tol);
      metric = std::move(apg.metric);
      loss_after = apg.loss_history.back();
      num_positive = labels.num_positive();
      // The loss only constrains distance ratios around c0, so the overall
      // scale of M drifts upward from iteration to iteration, inflating
      // costs until e^{-C} re-weights vanish. Renormalizing the trace pins
      // the scale without changing the metric's shape.
      const double trace = metric.matrix().trace();
      if (trace > 1e-12) {
        metric = Metric(metric.matrix() * (static_cast<double>(d) / trace));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoPositives &&
          e.code() != ErrorCode::NoNegatives) {
        throw;
      }
    }

    // Fresh costs under the updated metric; keep the previous assignment
    // unless the new one strictly lowers the objective.
    costs = assignment_costs(a, b, metric, config.lambda, config.k);
    dummy = dummy_cost_value(costs, config.dummy_cost_mode);
    MatchResult candidate = solve_assignment(costs, dummy);
    const double keep_objective = matching_objective(costs, y, dummy);

    IterationRecord rec;
    rec.iter = t;
    rec.F = loss_after;
    rec.num_positive = num_positive;
    rec.G_keep_previous = keep_objective;
    if (candidate.objective >= keep_objective) {
      rec.accepted = false;
      rec.G = keep_objective;
    } else {
      rec.accepted = true;
      y = std::move(candidate.assignment);
      rec.G = candidate.objective;
    }
    rec.num_dummy = y.num_dummy();

    const double f_prev = history.back().F;
    history.push_back(rec);

    stable_iterations = rec.accepted ? 0 : stable_iterations + 1;
    const double f_change =
        std::abs(rec.F - f_prev) / std::max(std::abs(f_prev), 1e-12);
    if (stable_iterations >= 2 && f_change < kConvergenceFTol) break;
  }

  SoftLabelMatrix final_labels = soft_label_partition(costs, y);
  return DgmResult{std::move(y),     std::move(final_labels),
                   std::move(metric), std::move(history),
                   std::move(costs), dummy};
}

}  // namespace dgm
