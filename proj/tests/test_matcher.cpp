#include <doctest.h>

#include <cmath>

#include "dgm/matcher.hpp"
#include "test_support.hpp"

using namespace dgm;
namespace ts = dgm::test;

TEST_CASE("solve_assignment picks the cheap diagonal") {
  const CostMatrix c(ts::rows({{1.0, 9.0}, {9.0, 1.0}}));
  const MatchResult r = solve_assignment(c, 100.0);
  CHECK(r.assignment.target(0) == 0);
  CHECK(r.assignment.target(1) == 1);
  CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-15));

  const MatchResult oracle = brute_force_assignment(c, 100.0);
  CHECK(oracle.assignment.targets() == r.assignment.targets());
  CHECK(oracle.objective == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("dummy wins when cheaper than any real match") {
  const CostMatrix c(ts::rows({{5.0}}));
  const MatchResult r = solve_assignment(c, 1.0);
  CHECK(r.assignment.is_dummy(0));
  CHECK(r.objective == doctest::Approx(1.0));
  const MatchResult bf = brute_force_assignment(c, 1.0);
  CHECK(bf.assignment.is_dummy(0));
  CHECK(bf.objective == doctest::Approx(1.0));
}

TEST_CASE("column scarcity forces exactly one dummy") {
  const CostMatrix c(ts::rows({{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}}));
  const MatchResult r = solve_assignment(c, 1e6);
  CHECK(r.assignment.num_dummy() == 1);
  const MatchResult bf = brute_force_assignment(c, 1e6);
  CHECK(bf.objective == doctest::Approx(r.objective).epsilon(1e-12));
}

TEST_CASE("brute force breaks ties toward the smallest target sequence") {
  const CostMatrix c(ts::rows({{0.0, 0.0}}));
  const MatchResult r = brute_force_assignment(c, 0.0);
  CHECK(r.objective == 0.0);
  CHECK(r.assignment.target(0) == 0);  // beats column 1 and DUMMY
}

TEST_CASE("brute force rejects oversized instances") {
  const CostMatrix c(Matrix::Zero(9, 3));
  CHECK_THROWS_AS(static_cast<void>(brute_force_assignment(c, 1.0)), Error);
}

TEST_CASE("solver matches the exhaustive oracle over random instances") {
  ts::Rng rng(31);
  std::uniform_int_distribution<Index> size(1, 6);
  std::uniform_real_distribution<double> cost(0.0, 10.0);
  std::uniform_real_distribution<double> dummy_scale(0.0, 12.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = size(rng);
    const Index n = size(rng);
    Matrix c(m, n);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) c(i, j) = cost(rng);
    }
    const double dummy = dummy_scale(rng);
    const CostMatrix costs(c);
    const MatchResult fast = solve_assignment(costs, dummy);
    const MatchResult slow = brute_force_assignment(costs, dummy);
    CHECK(std::abs(fast.objective - slow.objective) <= 1e-12);
    CHECK(fast.objective ==
          doctest::Approx(matching_objective(costs, fast.assignment, dummy))
              .epsilon(1e-15));
  }
}

TEST_CASE("matching_objective fixtures") {
  const CostMatrix c(ts::rows({{1.0, 9.0}, {9.0, 1.0}}));
  const Assignment all_dummy({Assignment::kDummy, Assignment::kDummy}, 2);
  CHECK(matching_objective(c, all_dummy, 3.5) == doctest::Approx(7.0));

  const Assignment swapped({1, 0}, 2);
  CHECK(matching_objective(c, swapped, 100.0) == doctest::Approx(18.0));

  const Assignment wrong_shape({0}, 2);
  CHECK_THROWS_AS(static_cast<void>(matching_objective(c, wrong_shape, 1.0)),
                  Error);
}

TEST_CASE("raising the dummy cost never adds dummy rows") {
  ts::Rng rng(32);
  std::uniform_real_distribution<double> cost(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix c(5, 5);
    for (Index i = 0; i < 5; ++i) {
      for (Index j = 0; j < 5; ++j) c(i, j) = cost(rng);
    }
    const CostMatrix costs(c);
    Index previous = 6;
    for (double dummy : {1.0, 3.0, 5.0, 8.0, 12.0}) {
      const Index dummies = solve_assignment(costs, dummy).assignment.num_dummy();
      CHECK(dummies <= previous);
      previous = dummies;
    }
  }
}

TEST_CASE("shifting all costs and the dummy cost keeps the optimum") {
  ts::Rng rng(33);
  std::uniform_real_distribution<double> cost(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix c(4, 5);
    for (Index i = 0; i < 4; ++i) {
      for (Index j = 0; j < 5; ++j) c(i, j) = cost(rng);
    }
    const double dummy = cost(rng);
    const double shift = 2.75;
    const Assignment base = solve_assignment(CostMatrix(c), dummy).assignment;
    const Assignment shifted =
        solve_assignment(CostMatrix(c.array() + shift), dummy + shift)
            .assignment;
    CHECK(base.targets() == shifted.targets());
  }
}

TEST_CASE("solver output is always feasible") {
  ts::Rng rng(34);
  std::uniform_real_distribution<double> cost(0.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix c(6, 3);
    for (Index i = 0; i < 6; ++i) {
      for (Index j = 0; j < 3; ++j) c(i, j) = cost(rng);
    }
    // Assignment construction validates row-exactly-one and column
    // injectivity; reaching here means the output was feasible.
    const MatchResult r = solve_assignment(CostMatrix(c), cost(rng));
    CHECK(r.assignment.rows() == 6);
    CHECK(r.assignment.cols() == 3);
    CHECK(r.assignment.num_dummy() >= 3);  // pigeonhole: only 3 real columns
  }
}

TEST_CASE("dummy cost modes resolve against the cost matrix") {
  const CostMatrix c(ts::rows({{0.1, 5.0}, {0.3, 6.0}}));
  CHECK(dummy_cost_value(c, DummyCostMode::mean()) ==
        doctest::Approx(2.85).epsilon(1e-12));
  CHECK(dummy_cost_value(c, DummyCostMode::fixed(1.25)) == 1.25);
  // Sorted entries: 0.1, 0.3, 5, 6 -> median interpolates the middle pair.
  CHECK(dummy_cost_value(c, DummyCostMode::percentile(50.0)) ==
        doctest::Approx(2.65).epsilon(1e-12));
  CHECK(dummy_cost_value(c, DummyCostMode::percentile(0.0)) ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK(dummy_cost_value(c, DummyCostMode::percentile(100.0)) ==
        doctest::Approx(6.0).epsilon(1e-12));
}
