#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hcsp/error.hpp"
#include "hcsp/etc_matrix.hpp"

namespace hcsp {

enum class MoveKind : std::uint8_t { Transfer, Swap };

/// Transfer(task, to_proc) or Swap(task, other_task).
struct Move {
  MoveKind kind = MoveKind::Transfer;
  TaskId task = 0;
  std::uint32_t target = 0;  // destination processor (Transfer) or partner task (Swap)

  static constexpr Move transfer(TaskId task, ProcId to) { return {MoveKind::Transfer, task, to}; }
  static constexpr Move swap(TaskId a, TaskId b) { return {MoveKind::Swap, a, b}; }

  friend bool operator==(const Move&, const Move&) = default;
};

/// The two processors a move touches and their completion times afterwards.
struct MoveEffect {
  ProcId proc_a = 0;
  double time_a = 0.0;
  ProcId proc_b = 0;
  double time_b = 0.0;
  double makespan = 0.0;
};

/// Total assignment of tasks to processors with cached per-processor loads.
///
/// The three most loaded processors are cached, which makes the makespan
/// after any two-processor move an O(1) query: the untouched maximum is the
/// first cached processor that the move does not touch.
class Schedule {
 public:
  static constexpr ProcId kNoProc = std::numeric_limits<ProcId>::max();

  Schedule(const EtcMatrix& instance, std::vector<ProcId> assignment)
      : instance_(&instance), assignment_(std::move(assignment)) {
    if (assignment_.size() != instance.num_tasks()) {
      throw Error(ErrorKind::IndexOutOfRange,
                  "assignment has " + std::to_string(assignment_.size()) + " entries for " +
                      std::to_string(instance.num_tasks()) + " tasks");
    }
    for (std::size_t t = 0; t < assignment_.size(); ++t) {
      if (assignment_[t] >= instance.num_procs()) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "task " + std::to_string(t) + " assigned to processor " + std::to_string(assignment_[t]));
      }
    }
    recompute();
  }

  const EtcMatrix& instance() const noexcept { return *instance_; }
  std::span<const ProcId> assignment() const noexcept { return assignment_; }
  std::span<const double> proc_time() const noexcept { return proc_time_; }
  ProcId proc_of(TaskId task) const noexcept { return assignment_[task]; }
  double makespan() const noexcept { return proc_time_[top_[0]]; }
  std::size_t num_tasks() const noexcept { return assignment_.size(); }
  std::size_t num_procs() const noexcept { return proc_time_.size(); }

  /// argmax of proc_time, lowest index on ties.
  ProcId most_loaded() const noexcept { return top_[0]; }

  /// Rebuilds all loads from the ETC matrix, discarding accumulated drift.
  void recompute() {
    const auto& m = *instance_;
    proc_time_.assign(m.num_procs(), 0.0);
    for (std::size_t t = 0; t < assignment_.size(); ++t) {
      proc_time_[assignment_[t]] += m(t, assignment_[t]);
    }
    refresh_top();
  }

  bool is_valid(const Move& move) const noexcept {
    if (move.task >= num_tasks()) return false;
    if (move.kind == MoveKind::Transfer) {
      return move.target < num_procs() && move.target != assignment_[move.task];
    }
    return move.target < num_tasks() && assignment_[move.target] != assignment_[move.task];
  }

  /// Largest load over processors other than a and b.
  double max_load_excluding(ProcId a, ProcId b) const noexcept {
    for (ProcId p : top_) {
      if (p != kNoProc && p != a && p != b) return proc_time_[p];
    }
    return 0.0;
  }

  /// Effect of a move, assumed valid. Used by the neighbourhood scan.
  MoveEffect preview_unchecked(const Move& move) const noexcept {
    const auto& m = *instance_;
    MoveEffect e;
    if (move.kind == MoveKind::Transfer) {
      e.proc_a = assignment_[move.task];
      e.proc_b = move.target;
      e.time_a = proc_time_[e.proc_a] - m(move.task, e.proc_a);
      e.time_b = proc_time_[e.proc_b] + m(move.task, e.proc_b);
    } else {
      const TaskId other = move.target;
      e.proc_a = assignment_[move.task];
      e.proc_b = assignment_[other];
      e.time_a = proc_time_[e.proc_a] - m(move.task, e.proc_a) + m(other, e.proc_a);
      e.time_b = proc_time_[e.proc_b] - m(other, e.proc_b) + m(move.task, e.proc_b);
    }
    e.makespan = std::max({max_load_excluding(e.proc_a, e.proc_b), e.time_a, e.time_b});
    return e;
  }

  MoveEffect preview(const Move& move) const {
    check(move);
    return preview_unchecked(move);
  }

  /// Makespan the schedule would have after the move; the schedule is untouched.
  double peek_move(const Move& move) const { return preview(move).makespan; }

  void apply_move(const Move& move) {
    check(move);
    apply_unchecked(move);
  }

  void apply_unchecked(const Move& move) noexcept {
    const MoveEffect e = preview_unchecked(move);
    if (move.kind == MoveKind::Transfer) {
      assignment_[move.task] = move.target;
    } else {
      std::swap(assignment_[move.task], assignment_[move.target]);
    }
    proc_time_[e.proc_a] = e.time_a;
    proc_time_[e.proc_b] = e.time_b;
    refresh_top();
  }

  /// Same assignment and bit-identical loads.
  friend bool operator==(const Schedule& a, const Schedule& b) {
    return a.assignment_ == b.assignment_ && a.proc_time_ == b.proc_time_;
  }

 private:
  void check(const Move& move) const {
    if (!is_valid(move)) {
      throw Error(ErrorKind::InvalidMove,
                  std::string(move.kind == MoveKind::Transfer ? "transfer" : "swap") + " of task " +
                      std::to_string(move.task) + " with target " + std::to_string(move.target));
    }
  }

  void refresh_top() noexcept {
    top_ = {kNoProc, kNoProc, kNoProc};
    for (ProcId p = 0; p < proc_time_.size(); ++p) {
      const double v = proc_time_[p];
      if (top_[0] == kNoProc || v > proc_time_[top_[0]]) {
        top_ = {p, top_[0], top_[1]};
      } else if (top_[1] == kNoProc || v > proc_time_[top_[1]]) {
        top_ = {top_[0], p, top_[1]};
      } else if (top_[2] == kNoProc || v > proc_time_[top_[2]]) {
        top_[2] = p;
      }
    }
  }

  const EtcMatrix* instance_;
  std::vector<ProcId> assignment_;
  std::vector<double> proc_time_;
  std::array<ProcId, 3> top_{kNoProc, kNoProc, kNoProc};
};

/// From-scratch evaluation of an assignment.
inline Schedule evaluate(const EtcMatrix& instance, std::vector<ProcId> assignment) {
  return Schedule(instance, std::move(assignment));
}

}  // namespace hcsp
