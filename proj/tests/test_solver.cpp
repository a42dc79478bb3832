#include <gtest/gtest.h>

#include "hcsp/oracle.hpp"
#include "hcsp/solver.hpp"
#include "test_support.hpp"

using namespace hcsp;
using hcsp::testing::matrix;

namespace {

SolverConfig iterations(std::uint64_t n, std::uint64_t seed = 0) {
  SolverConfig c;
  c.max_iterations = n;
  c.search.rng_seed = seed;
  return c;
}

struct AcceptanceLog {
  std::size_t candidates = 0;
  std::size_t worse_accepted = 0;
  std::size_t worse_rejected = 0;
  std::size_t equal_seen = 0;
  std::size_t equal_accepted = 0;
  void on_step(double, const Schedule&, const Move&) {}
  void on_exit(const Schedule&) {}
  void on_candidate(const Schedule& c, double incumbent, bool accepted) {
    ++candidates;
    if (c.makespan() > incumbent) {
      accepted ? ++worse_accepted : ++worse_rejected;
    } else if (c.makespan() == incumbent) {
      ++equal_seen;
      equal_accepted += accepted;
    }
  }
};

}  // namespace

TEST(Solve, ZeroBudgetIsDescendedMinMin) {
  const auto m = generate_instance({}, 64, 8, 3);
  SolverConfig c;
  c.time_budget = std::chrono::duration<double>(0);
  const auto r = solve(m, c);
  Schedule expected = min_min(m);
  local_search_descend(expected);
  expected.recompute();
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.best_makespan, expected.makespan());
  EXPECT_TRUE(std::equal(r.best_schedule.assignment().begin(), r.best_schedule.assignment().end(),
                         expected.assignment().begin()));
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(Solve, TinyInstanceReachesExhaustiveOptimumWithinOneSecond) {
  const auto m = generate_instance({Consistency::Inconsistent, Heterogeneity::High, Heterogeneity::High}, 6, 3, 17);
  SolverConfig c;
  c.time_budget = std::chrono::duration<double>(1.0);
  const auto r = solve(m, c);
  EXPECT_GT(r.iterations, 0u);
  EXPECT_EQ(r.best_makespan, hcsp::testing::enumerate_optimum(m).makespan);
}

TEST(Solve, IterationBudgetFindsOptimumOnTinyInstances) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto m = hcsp::testing::random_matrix(6, 3, seed);
    const auto r = solve(m, iterations(2000, seed));
    EXPECT_GE(r.best_makespan, brute_force_optimum(m).makespan);
    hits += r.best_makespan == brute_force_optimum(m).makespan;
  }
  EXPECT_GE(hits, 39);
}

TEST(Solve, TraceIsNonIncreasingAndEndsAtBest) {
  const auto m = generate_instance({}, 128, 8, 11);
  const auto r = solve(m, iterations(300, 5));
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_LT(r.trace[i].makespan, r.trace[i - 1].makespan);
    EXPECT_GT(r.trace[i].iteration, r.trace[i - 1].iteration);
  }
  EXPECT_EQ(r.trace.back().makespan, r.best_makespan);
  EXPECT_EQ(r.best_makespan, r.best_schedule.makespan());
  EXPECT_EQ(r.iterations, 300u);
  EXPECT_LE(r.best_makespan, min_min(m).makespan());
}

TEST(Solve, DeterministicUnderIterationBudget) {
  const auto m = generate_instance({Consistency::SemiConsistent, Heterogeneity::Low, Heterogeneity::High}, 96, 8, 2);
  const auto a = solve(m, iterations(200, 9));
  const auto b = solve(m, iterations(200, 9));
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].iteration, b.trace[i].iteration);
    EXPECT_EQ(a.trace[i].makespan, b.trace[i].makespan);
  }
  EXPECT_EQ(a.best_schedule, b.best_schedule);
}

TEST(Solve, NeverAcceptsWorseAndAcceptsEqual) {
  const auto m = generate_instance({}, 64, 8, 21);
  AcceptanceLog log;
  solve(m, iterations(400, 1), log);
  EXPECT_EQ(log.candidates, 400u);
  EXPECT_EQ(log.worse_accepted, 0u);
  EXPECT_GT(log.worse_rejected, 0u);
  EXPECT_EQ(log.equal_accepted, log.equal_seen);
}

TEST(Solve, PlateauMovesTheWorkingIncumbent) {
  // Uniform unit costs: every local optimum has makespan 2, so each candidate
  // ties the incumbent and must be taken.
  const auto m = matrix({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  struct : AcceptanceLog {
    std::vector<std::vector<ProcId>> accepted_assignments;
    void on_candidate(const Schedule& c, double incumbent, bool accepted) {
      AcceptanceLog::on_candidate(c, incumbent, accepted);
      if (accepted) accepted_assignments.emplace_back(c.assignment().begin(), c.assignment().end());
    }
  } log;
  const auto r = solve(m, iterations(50, 3), log);
  EXPECT_EQ(r.best_makespan, 2.0);
  EXPECT_EQ(log.equal_seen, 50u);
  EXPECT_EQ(log.equal_accepted, 50u);
  // The incumbent wanders across distinct equal-makespan schedules.
  std::sort(log.accepted_assignments.begin(), log.accepted_assignments.end());
  log.accepted_assignments.erase(std::unique(log.accepted_assignments.begin(), log.accepted_assignments.end()),
                                 log.accepted_assignments.end());
  EXPECT_GT(log.accepted_assignments.size(), 1u);
}

TEST(Solve, UnshakeableInstanceReturnsImmediately) {
  const auto m = matrix({{3}, {4}});
  const auto r = solve(m, iterations(100));
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.best_makespan, 7.0);
}

TEST(Solve, RandomConstructorUsesSeed) {
  const auto m = generate_instance({}, 64, 8, 8);
  SolverConfig c = iterations(0, 4);
  c.constructor = Constructor::Random;
  Schedule expected = random_assignment(m, 4);
  local_search_descend(expected);
  expected.recompute();
  EXPECT_EQ(solve(m, c).best_makespan, expected.makespan());
}

TEST(BestOfK, SingleRunMatchesSolve) {
  const auto m = generate_instance({}, 64, 8, 6);
  const auto single = best_of_k(m, iterations(100), 1, 42, 1);
  const auto direct = solve(m, iterations(100, 42));
  EXPECT_EQ(single.best_makespan, direct.best_makespan);
  EXPECT_EQ(single.seed, 42u);
}

TEST(BestOfK, PicksMinimumOfIndependentRuns) {
  const auto m = generate_instance({}, 64, 8, 7);
  const auto best = best_of_k(m, iterations(60), 5, 10, 1);
  double min_seen = std::numeric_limits<double>::infinity();
  std::uint64_t min_seed = 0;
  for (std::uint64_t s = 10; s < 15; ++s) {
    const double v = solve(m, iterations(60, s)).best_makespan;
    if (v < min_seen) min_seen = v, min_seed = s;
  }
  EXPECT_EQ(best.best_makespan, min_seen);
  EXPECT_EQ(best.seed, min_seed);
}

TEST(BestOfK, ThreadCountDoesNotChangeResult) {
  const auto m = generate_instance({}, 64, 8, 9);
  const auto one = best_of_k(m, iterations(80), 6, 0, 1);
  const auto many = best_of_k(m, iterations(80), 6, 0, 4);
  EXPECT_EQ(one.best_schedule, many.best_schedule);
  EXPECT_EQ(one.seed, many.seed);
  EXPECT_THROW(best_of_k(m, iterations(1), 0, 0), Error);
}

TEST(Benchmark, SingleRepetitionHasZeroCv) {
  const auto m = generate_instance({}, 32, 4, 1);
  const std::vector<EtcMatrix> instances{m};
  const auto rows = benchmark(instances, iterations(20), 2, 1, 0, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].summary.cv_percent, 0.0);
}

TEST(Benchmark, UsesDisjointSeedBlocks) {
  const auto m = generate_instance({}, 48, 6, 12);
  const std::vector<EtcMatrix> instances{m};
  const auto rows = benchmark(instances, iterations(30), 3, 2, 100, 1);
  ASSERT_EQ(rows[0].best_makespans.size(), 2u);
  EXPECT_EQ(rows[0].best_makespans[0], best_of_k(m, iterations(30), 3, 100, 1).best_makespan);
  EXPECT_EQ(rows[0].best_makespans[1], best_of_k(m, iterations(30), 3, 103, 1).best_makespan);
}

TEST(Benchmark, IdenticalRepetitionsGiveZeroCv) {
  // A single-processor instance cannot be shaken, so every repetition agrees.
  const auto m = matrix({{3}, {4}});
  const std::vector<EtcMatrix> instances{m};
  const auto rows = benchmark(instances, iterations(5), 2, 4, 0, 1);
  EXPECT_EQ(rows[0].summary.mean, 7.0);
  EXPECT_EQ(rows[0].summary.cv_percent, 0.0);
}
