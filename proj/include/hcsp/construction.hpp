#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

#include "hcsp/etc_matrix.hpp"
#include "hcsp/schedule.hpp"

namespace hcsp {

enum class Constructor { MinMin, MakespanExtension, Random };

inline const char* to_string(Constructor c) {
  switch (c) {
    case Constructor::MinMin: return "minmin";
    case Constructor::MakespanExtension: return "minmax-extension";
    case Constructor::Random: return "random";
  }
  return "unknown";
}

namespace detail {

struct BestSlot {
  double completion = 0.0;
  ProcId proc = 0;
};

inline BestSlot best_slot(const EtcMatrix& m, std::span<const double> load, std::size_t task) {
  BestSlot best{std::numeric_limits<double>::infinity(), 0};
  for (ProcId p = 0; p < m.num_procs(); ++p) {
    const double c = load[p] + m(task, p);
    if (c < best.completion) best = {c, p};
  }
  return best;
}

/// Shared greedy loop. `rank` maps (candidate MCT, current makespan) to the
/// key minimised when picking the next task; lower task index wins ties.
template <class Rank>
std::vector<ProcId> greedy_assign(const EtcMatrix& m, Rank rank) {
  const std::size_t n = m.num_tasks();
  std::vector<double> load(m.num_procs(), 0.0);
  std::vector<ProcId> assignment(n, 0);
  std::vector<BestSlot> slot(n);
  std::vector<char> done(n, 0);
  for (std::size_t t = 0; t < n; ++t) slot[t] = best_slot(m, load, t);

  double makespan = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    auto pick_key = rank(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      if (done[t]) continue;
      auto key = rank(slot[t].completion, makespan);
      if (pick == n || key < pick_key) {
        pick = t;
        pick_key = key;
      }
    }
    const ProcId p = slot[pick].proc;
    assignment[pick] = p;
    done[pick] = 1;
    load[p] = slot[pick].completion;
    makespan = std::max(makespan, load[p]);
    // Only processor p got slower, so only tasks whose best slot was p can change.
    for (std::size_t t = 0; t < n; ++t) {
      if (!done[t] && slot[t].proc == p) slot[t] = best_slot(m, load, t);
    }
  }
  return assignment;
}

}  // namespace detail

/// Min-min: repeatedly assign the unscheduled task with the smallest minimum
/// completion time to the processor achieving it. Ties go to the lowest task
/// index, then the lowest processor index.
inline Schedule min_min(const EtcMatrix& instance) {
  auto assignment = detail::greedy_assign(instance, [](double mct, double) { return mct; });
  return Schedule(instance, std::move(assignment));
}

/// Variant that picks the task whose best placement grows the current
/// makespan the least, lowest task index on ties. Because the completion
/// times min-min selects never decrease, no unscheduled task ever fits under
/// the current makespan and this produces exactly the min-min schedule; it is
/// kept as an independent formulation of the same rule.
inline Schedule min_makespan_extension(const EtcMatrix& instance) {
  auto assignment = detail::greedy_assign(
      instance, [](double mct, double makespan) { return std::max(0.0, mct - makespan); });
  return Schedule(instance, std::move(assignment));
}

inline Schedule random_assignment(const EtcMatrix& instance, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<ProcId> pick(0, static_cast<ProcId>(instance.num_procs() - 1));
  std::vector<ProcId> assignment(instance.num_tasks());
  for (auto& p : assignment) p = pick(rng);
  return Schedule(instance, std::move(assignment));
}

inline Schedule construct(const EtcMatrix& instance, Constructor kind, std::uint64_t seed) {
  switch (kind) {
    case Constructor::MinMin: return min_min(instance);
    case Constructor::MakespanExtension: return min_makespan_extension(instance);
    case Constructor::Random: return random_assignment(instance, seed);
  }
  return min_min(instance);
}

}  // namespace hcsp
