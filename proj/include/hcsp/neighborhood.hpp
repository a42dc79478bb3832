#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "hcsp/error.hpp"
#include "hcsp/schedule.hpp"

namespace hcsp {

using Rng = std::mt19937_64;

struct SearchParams {
  int max_shake_swaps = 9;
  std::uint64_t rng_seed = 0;
};

/// Hooks into the descent; the default does nothing and compiles away.
struct NullDescentObserver {
  void on_step(double /*before*/, const Schedule& /*after*/, const Move& /*move*/) {}
  void on_exit(const Schedule& /*local_optimum*/) {}
};

/// The processor whose load sets the makespan (lowest index on ties).
inline ProcId find_problem_processor(const Schedule& s) noexcept { return s.most_loaded(); }

struct ScanResult {
  bool improving = false;
  Move move{};
  double makespan = 0.0;
};

/// Exhaustive scan of the problem-processor neighbourhood: every transfer of
/// a task off `q`, then every swap of a task on `q` with a task elsewhere.
/// Tasks ascend, then partners ascend. The first move attaining the lowest
/// makespan strictly below the current one is returned.
inline ScanResult best_neighbor(const Schedule& s, ProcId q, std::vector<TaskId>& on_q) {
  const auto assignment = s.assignment();
  const std::size_t num_tasks = s.num_tasks();
  const auto num_procs = static_cast<ProcId>(s.num_procs());

  on_q.clear();
  for (TaskId t = 0; t < num_tasks; ++t) {
    if (assignment[t] == q) on_q.push_back(t);
  }

  ScanResult best{false, {}, s.makespan()};
  for (TaskId t : on_q) {
    for (ProcId p = 0; p < num_procs; ++p) {
      if (p == q) continue;
      const Move m = Move::transfer(t, p);
      const double ms = s.preview_unchecked(m).makespan;
      if (ms < best.makespan) best = {true, m, ms};
    }
  }
  for (TaskId t : on_q) {
    for (TaskId u = 0; u < num_tasks; ++u) {
      if (assignment[u] == q) continue;
      const Move m = Move::swap(t, u);
      const double ms = s.preview_unchecked(m).makespan;
      if (ms < best.makespan) best = {true, m, ms};
    }
  }
  return best;
}

/// Best-improvement descent over the problem-processor neighbourhood until
/// no move strictly lowers the makespan. Returns the number of moves applied.
template <class Observer = NullDescentObserver>
std::size_t local_search_descend(Schedule& s, Observer&& observer = {}) {
  const std::size_t cap = 10 * s.num_tasks() * s.num_procs();
  std::vector<TaskId> on_q;
  on_q.reserve(s.num_tasks());
  std::size_t steps = 0;
  if (s.num_procs() > 1) {
    for (;;) {
      const ScanResult r = best_neighbor(s, find_problem_processor(s), on_q);
      if (!r.improving) break;
      if (++steps > cap) {
        throw Error(ErrorKind::Internal, "descent exceeded its iteration cap");
      }
      const double before = s.makespan();
      s.apply_unchecked(r.move);
      observer.on_step(before, s, r.move);
    }
  }
  observer.on_exit(s);
  return steps;
}

inline bool can_shake(const Schedule& s) noexcept {
  if (s.num_procs() < 2 || s.num_tasks() < 2) return false;
  const auto a = s.assignment();
  for (std::size_t t = 1; t < a.size(); ++t) {
    if (a[t] != a[0]) return true;
  }
  return false;
}

/// Random disruption: draws k uniformly from [1, max_swaps] and applies k
/// swaps, each between two tasks drawn uniformly among pairs on different
/// processors. Returns k.
inline int shake(Schedule& s, int max_swaps, Rng& rng) {
  if (max_swaps < 1) throw Error(ErrorKind::InvalidArgument, "max_shake_swaps must be at least 1");
  if (!can_shake(s)) {
    throw Error(ErrorKind::TooSmallToShake, "no two tasks sit on different processors");
  }
  std::uniform_int_distribution<int> count(1, max_swaps);
  std::uniform_int_distribution<TaskId> task(0, static_cast<TaskId>(s.num_tasks() - 1));
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    TaskId a = 0;
    TaskId b = 0;
    do {
      a = task(rng);
      b = task(rng);
    } while (s.proc_of(a) == s.proc_of(b));
    s.apply_unchecked(Move::swap(a, b));
  }
  return k;
}

inline int shake(Schedule& s, const SearchParams& params, Rng& rng) {
  return shake(s, params.max_shake_swaps, rng);
}

}  // namespace hcsp
