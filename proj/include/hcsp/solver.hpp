#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "hcsp/construction.hpp"
#include "hcsp/neighborhood.hpp"
#include "hcsp/schedule.hpp"
#include "hcsp/stats.hpp"

namespace hcsp {

struct SolverConfig {
  /// Wall-clock budget; ignored when max_iterations is set.
  std::chrono::duration<double> time_budget{90.0};
  /// Fixed number of shake/descend cycles. Makes a run fully reproducible.
  std::optional<std::uint64_t> max_iterations;
  SearchParams search;
  Constructor constructor = Constructor::MinMin;
  bool record_trace = true;
};

struct TracePoint {
  std::uint64_t iteration = 0;
  double elapsed_seconds = 0.0;
  double makespan = 0.0;
};

struct RunResult {
  Schedule best_schedule;
  double best_makespan = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t seed = 0;
  std::vector<TracePoint> trace;
};

/// Hooks for instrumented runs. Descent callbacks are forwarded from every
/// local_search_descend call; on_candidate fires once per shake/descend cycle.
struct NullSolverObserver {
  void on_step(double /*before*/, const Schedule& /*after*/, const Move& /*move*/) {}
  void on_exit(const Schedule& /*local_optimum*/) {}
  void on_candidate(const Schedule& /*candidate*/, double /*incumbent_makespan*/, bool /*accepted*/) {}
};

/// Iterated local search: construct, descend, then shake and descend from
/// the working incumbent until the budget runs out. A new local optimum
/// replaces the incumbent when its makespan is equal or lower; otherwise the
/// next shake starts from the old incumbent again. The best schedule ever
/// seen is tracked separately and returned.
template <class Observer = NullSolverObserver>
RunResult solve(const EtcMatrix& instance, const SolverConfig& config, Observer&& observer = {}) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  const std::uint64_t seed = config.search.rng_seed;
  Schedule incumbent = construct(instance, config.constructor, seed);
  local_search_descend(incumbent, observer);
  incumbent.recompute();

  RunResult result{incumbent, incumbent.makespan(), 0, seed, {}};
  if (config.record_trace) result.trace.push_back({0, elapsed(), result.best_makespan});

  if (!can_shake(incumbent)) return result;

  Rng rng(seed);
  const bool by_iterations = config.max_iterations.has_value();
  const double budget = config.time_budget.count();
  Schedule candidate = incumbent;
  for (std::uint64_t it = 0;; ++it) {
    if (by_iterations ? it >= *config.max_iterations : elapsed() >= budget) break;

    candidate = incumbent;
    shake(candidate, config.search, rng);
    local_search_descend(candidate, observer);
    result.iterations = it + 1;

    const bool accept = candidate.makespan() <= incumbent.makespan();
    observer.on_candidate(candidate, incumbent.makespan(), accept);
    if (!accept) continue;

    std::swap(incumbent, candidate);
    incumbent.recompute();
    if (incumbent.makespan() < result.best_makespan) {
      result.best_schedule = incumbent;
      result.best_makespan = incumbent.makespan();
      if (config.record_trace) result.trace.push_back({it + 1, elapsed(), result.best_makespan});
    }
  }
  return result;
}

/// Worker count for parallel harness runs: HCSP_THREADS when set to a
/// positive integer, otherwise the hardware concurrency.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("HCSP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// k independent runs with seeds base_seed .. base_seed + k - 1. The lowest
/// makespan wins, ties to the lowest seed, so the outcome does not depend on
/// how many threads executed the runs.
inline RunResult best_of_k(const EtcMatrix& instance, const SolverConfig& config, std::size_t k,
                           std::uint64_t base_seed, unsigned threads = default_thread_count()) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "best_of_k needs k >= 1");
  std::vector<std::optional<RunResult>> runs(k);
  parallel_for(k, threads, [&](std::size_t i) {
    SolverConfig c = config;
    c.search.rng_seed = base_seed + i;
    runs[i] = solve(instance, c);
  });
  std::size_t winner = 0;
  for (std::size_t i = 1; i < k; ++i) {
    if (runs[i]->best_makespan < runs[winner]->best_makespan) winner = i;
  }
  return std::move(*runs[winner]);
}

struct BenchmarkRow {
  std::vector<double> best_makespans;  // one per repetition
  Summary summary;
};

/// Repeats best_of_k per instance; repetition r uses the seed block
/// starting at base_seed + r * k.
inline std::vector<BenchmarkRow> benchmark(std::span<const EtcMatrix> instances, const SolverConfig& config,
                                           std::size_t k, std::size_t repetitions, std::uint64_t base_seed,
                                           unsigned threads = default_thread_count()) {
  if (repetitions == 0) throw Error(ErrorKind::InvalidArgument, "benchmark needs at least one repetition");
  std::vector<BenchmarkRow> rows;
  rows.reserve(instances.size());
  for (const auto& inst : instances) {
    BenchmarkRow row;
    for (std::size_t r = 0; r < repetitions; ++r) {
      row.best_makespans.push_back(best_of_k(inst, config, k, base_seed + r * k, threads).best_makespan);
    }
    row.summary = summarize(row.best_makespans);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hcsp
