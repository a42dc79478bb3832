#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "hcsp/error.hpp"
#include "hcsp/etc_matrix.hpp"

namespace hcsp {

struct ExactSolution {
  std::vector<ProcId> assignment;
  double makespan = 0.0;
};

inline constexpr std::uint64_t kBruteForceLimit = 10'000'000;

/// num_procs ^ num_tasks, saturating just above kBruteForceLimit.
inline std::uint64_t assignment_count(const EtcMatrix& m) {
  std::uint64_t count = 1;
  for (std::size_t t = 0; t < m.num_tasks(); ++t) {
    count *= m.num_procs();
    if (count > kBruteForceLimit) return kBruteForceLimit + 1;
  }
  return count;
}

namespace detail {

struct BranchAndBound {
  const EtcMatrix& m;
  std::vector<double> load;
  std::vector<ProcId> current;
  ExactSolution best;

  // Tasks are placed in index order and processors tried in ascending order,
  // so the first assignment reaching a makespan is the lexicographically
  // smallest one; partial makespans at or above the incumbent cannot win.
  void descend(std::size_t task, double partial) {
    if (partial >= best.makespan) return;
    if (task == m.num_tasks()) {
      best.makespan = partial;
      best.assignment = current;
      return;
    }
    for (ProcId p = 0; p < m.num_procs(); ++p) {
      const double before = load[p];
      load[p] = before + m(task, p);
      current[task] = p;
      descend(task + 1, std::max(partial, load[p]));
      load[p] = before;
    }
  }
};

}  // namespace detail

/// Exhaustive optimum for tiny instances (num_procs ^ num_tasks <= 10^7).
/// Ties resolve to the lexicographically smallest assignment.
inline ExactSolution brute_force_optimum(const EtcMatrix& instance) {
  if (assignment_count(instance) > kBruteForceLimit) {
    throw Error(ErrorKind::InstanceTooLarge, "more than 10^7 assignments to enumerate");
  }
  detail::BranchAndBound bb{instance,
                            std::vector<double>(instance.num_procs(), 0.0),
                            std::vector<ProcId>(instance.num_tasks(), 0),
                            {{}, std::numeric_limits<double>::infinity()}};
  bb.descend(0, 0.0);
  return bb.best;
}

}  // namespace hcsp
