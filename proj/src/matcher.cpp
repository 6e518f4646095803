#include "dgm/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace dgm {

double dummy_cost_value(const CostMatrix& costs, const DummyCostMode& mode) {
  switch (mode.kind) {
    case DummyCostMode::Kind::Mean:
      return costs.mean_cost();
    case DummyCostMode::Kind::Fixed:
      return mode.value;
    case DummyCostMode::Kind::Percentile: {
      if (mode.value < 0.0 || mode.value > 100.0) {
        raise(ErrorCode::ConfigInvalid, "percentile must lie in [0, 100]");
      }
      std::vector<double> entries(costs.values().data(),
                                  costs.values().data() + costs.values().size());
      std::sort(entries.begin(), entries.end());
      const double pos =
          mode.value / 100.0 * static_cast<double>(entries.size() - 1);
      const auto lo = static_cast<std::size_t>(pos);
      const auto hi = std::min(lo + 1, entries.size() - 1);
      const double frac = pos - static_cast<double>(lo);
      return entries[lo] + frac * (entries[hi] - entries[lo]);
    }
  }
  raise(ErrorCode::ConfigInvalid, "unknown dummy cost mode");
}

MatchResult solve_assignment(const CostMatrix& costs, double dummy_cost) {
  if (!std::isfinite(dummy_cost)) {
    raise(ErrorCode::ConfigInvalid, "dummy cost must be finite");
  }
  const Index m = costs.rows();
  const Index n = costs.cols();
  const Index width = n + m;  // real columns then one private dummy per row

  auto cost_at = [&](Index i, Index j) -> double {
    return j < n ? costs(i, j) : dummy_cost;
  };

  // Shortest-augmenting-path Hungarian on the rectangular (m <= width)
  // problem, 1-indexed with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(width) + 1, 0.0);
  std::vector<Index> col_to_row(static_cast<std::size_t>(width) + 1, 0);
  std::vector<Index> way(static_cast<std::size_t>(width) + 1, 0);

  for (Index i = 1; i <= m; ++i) {
    col_to_row[0] = i;
    Index j0 = 0;
    std::vector<double> min_slack(static_cast<std::size_t>(width) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(width) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const Index i0 = col_to_row[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= width; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double slack = cost_at(i0 - 1, j - 1) -
                             u[static_cast<std::size_t>(i0)] -
                             v[static_cast<std::size_t>(j)];
        if (slack < min_slack[static_cast<std::size_t>(j)]) {
          min_slack[static_cast<std::size_t>(j)] = slack;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (min_slack[static_cast<std::size_t>(j)] < delta) {
          delta = min_slack[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (Index j = 0; j <= width; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(col_to_row[static_cast<std::size_t>(j)])] +=
              delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          min_slack[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (col_to_row[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      col_to_row[static_cast<std::size_t>(j0)] =
          col_to_row[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Index> targets(static_cast<std::size_t>(m), Assignment::kDummy);
  for (Index j = 1; j <= width; ++j) {
    const Index row = col_to_row[static_cast<std::size_t>(j)];
    if (row > 0 && j <= n) {
      targets[static_cast<std::size_t>(row - 1)] = j - 1;
    }
  }

  Assignment assignment(std::move(targets), n);
  double objective = 0.0;
  for (Index i = 0; i < m; ++i) {
    objective +=
        assignment.is_dummy(i) ? dummy_cost : costs(i, assignment.target(i));
  }
  return MatchResult{std::move(assignment), objective};
}

MatchResult brute_force_assignment(const CostMatrix& costs,
                                   double dummy_cost) {
  const Index m = costs.rows();
  const Index n = costs.cols();
  if (m > 8 || n > 8) {
    raise(ErrorCode::InstanceTooLarge,
          "brute force supports m, n <= 8, got " + std::to_string(m) + "x" +
              std::to_string(n));
  }
  if (!std::isfinite(dummy_cost)) {
    raise(ErrorCode::ConfigInvalid, "dummy cost must be finite");
  }

  // Per-row lower bound, valid also for negative dummy costs.
  const double row_bound = std::min(dummy_cost, costs.values().minCoeff());

  std::vector<Index> current(static_cast<std::size_t>(m), Assignment::kDummy);
  std::vector<Index> best;
  double best_cost = std::numeric_limits<double>::infinity();

  // Depth-first over rows; per row the targets are tried in the order
  // 0 < 1 < ... < n-1 < DUMMY, so the first optimum found is the
  // lexicographically smallest one and ties never replace it.
  auto search = [&](auto&& self, Index row, std::uint32_t used,
                    double cost) -> void {
    const double remaining = static_cast<double>(m - row) * row_bound;
    if (cost + remaining >= best_cost) return;
    if (row == m) {
      best_cost = cost;
      best = current;
      return;
    }
    for (Index j = 0; j < n; ++j) {
      if (used & (1u << j)) continue;
      current[static_cast<std::size_t>(row)] = j;
      self(self, row + 1, used | (1u << j), cost + costs(row, j));
    }
    current[static_cast<std::size_t>(row)] = Assignment::kDummy;
    self(self, row + 1, used, cost + dummy_cost);
  };
  search(search, 0, 0u, 0.0);

  return MatchResult{Assignment(std::move(best), n), best_cost};
}

double matching_objective(const CostMatrix& costs, const Assignment& assignment,
                          double dummy_cost) {
  if (assignment.rows() != costs.rows() || assignment.cols() != costs.cols()) {
    raise(ErrorCode::InvalidAssignment,
          "assignment shape does not match cost matrix");
  }
  double total = 0.0;
  for (Index i = 0; i < costs.rows(); ++i) {
    total +=
        assignment.is_dummy(i) ? dummy_cost : costs(i, assignment.target(i));
  }
  return total;
}

}  // namespace dgm
