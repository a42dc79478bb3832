#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <iterator>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hcsp/error.hpp"

namespace hcsp {

using TaskId = std::uint32_t;
using ProcId = std::uint32_t;

/// Expected-time-to-compute table: costs(t, p) is the time processor p
/// needs to run task t. Stored dense and task-major. Immutable once built.
class EtcMatrix {
 public:
  EtcMatrix(std::size_t num_tasks, std::size_t num_procs, std::vector<double> costs)
      : num_tasks_(num_tasks), num_procs_(num_procs), costs_(std::move(costs)) {
    if (num_tasks_ == 0 || num_procs_ == 0) {
      throw Error(ErrorKind::InvalidDimensions, "instance needs at least one task and one processor");
    }
    if (costs_.size() != num_tasks_ * num_procs_) {
      throw Error(ErrorKind::DimensionMismatch,
                  "expected " + std::to_string(num_tasks_ * num_procs_) + " costs, got " +
                      std::to_string(costs_.size()));
    }
    for (std::size_t i = 0; i < costs_.size(); ++i) {
      if (!std::isfinite(costs_[i]) || costs_[i] <= 0.0) {
        throw Error(ErrorKind::NonPositiveCost,
                    "cost at task " + std::to_string(i / num_procs_) + ", processor " +
                        std::to_string(i % num_procs_) + " is not a positive finite number");
      }
    }
  }

  std::size_t num_tasks() const noexcept { return num_tasks_; }
  std::size_t num_procs() const noexcept { return num_procs_; }

  double operator()(std::size_t task, std::size_t proc) const noexcept {
    return costs_[task * num_procs_ + proc];
  }

  std::span<const double> row(std::size_t task) const noexcept {
    return {costs_.data() + task * num_procs_, num_procs_};
  }

  std::span<const double> data() const noexcept { return costs_; }

  friend bool operator==(const EtcMatrix&, const EtcMatrix&) = default;

 private:
  std::size_t num_tasks_;
  std::size_t num_procs_;
  std::vector<double> costs_;
};

enum class Consistency { Consistent, Inconsistent, SemiConsistent };
enum class Heterogeneity { High, Low };

struct InstanceClass {
  Consistency consistency = Consistency::Inconsistent;
  Heterogeneity task_heterogeneity = Heterogeneity::High;
  Heterogeneity machine_heterogeneity = Heterogeneity::High;

  friend bool operator==(const InstanceClass&, const InstanceClass&) = default;
};

/// Renders `u_<x>_<yy><zz>.<n>`, e.g. `u_c_lohi.0`.
inline std::string to_string(const InstanceClass& cls, int index = 0) {
  auto het = [](Heterogeneity h) { return h == Heterogeneity::High ? "hi" : "lo"; };
  char x = 'i';
  switch (cls.consistency) {
    case Consistency::Consistent: x = 'c'; break;
    case Consistency::Inconsistent: x = 'i'; break;
    case Consistency::SemiConsistent: x = 's'; break;
  }
  std::string out = "u_";
  out += x;
  out += '_';
  out += het(cls.task_heterogeneity);
  out += het(cls.machine_heterogeneity);
  out += '.';
  out += std::to_string(index);
  return out;
}

/// Accepts `u_c_hihi` or `u_c_hihi.<n>`; nullopt for anything else.
inline std::optional<InstanceClass> parse_instance_class(std::string_view name) {
  if (auto dot = name.find('.'); dot != std::string_view::npos) {
    auto suffix = name.substr(dot + 1);
    if (suffix.empty() || !std::all_of(suffix.begin(), suffix.end(),
                                       [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    name = name.substr(0, dot);
  }
  if (name.size() != 8 || name.substr(0, 2) != "u_" || name[3] != '_') return std::nullopt;
  InstanceClass cls;
  switch (name[2]) {
    case 'c': cls.consistency = Consistency::Consistent; break;
    case 'i': cls.consistency = Consistency::Inconsistent; break;
    case 's': cls.consistency = Consistency::SemiConsistent; break;
    default: return std::nullopt;
  }
  auto het = [](std::string_view s) -> std::optional<Heterogeneity> {
    if (s == "hi") return Heterogeneity::High;
    if (s == "lo") return Heterogeneity::Low;
    return std::nullopt;
  };
  auto task = het(name.substr(4, 2));
  auto machine = het(name.substr(6, 2));
  if (!task || !machine) return std::nullopt;
  cls.task_heterogeneity = *task;
  cls.machine_heterogeneity = *machine;
  return cls;
}

/// All twelve classes in benchmark order (c, i, s) x (hihi, hilo, lohi, lolo).
inline std::vector<InstanceClass> all_instance_classes() {
  std::vector<InstanceClass> out;
  for (auto c : {Consistency::Consistent, Consistency::Inconsistent, Consistency::SemiConsistent}) {
    for (auto t : {Heterogeneity::High, Heterogeneity::Low}) {
      for (auto m : {Heterogeneity::High, Heterogeneity::Low}) out.push_back({c, t, m});
    }
  }
  return out;
}

namespace detail {

inline double parse_cost_token(std::string_view token) {
  double value = 0.0;
  auto first = token.data();
  auto last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::MalformedNumber, "cannot parse '" + std::string(token) + "' as a number");
  }
  return value;
}

inline std::vector<std::string> read_tokens(std::istream& in) {
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) tokens.push_back(std::move(token));
  return tokens;
}

inline std::optional<std::size_t> parse_count(std::string_view token) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value == 0) return std::nullopt;
  return value;
}

inline EtcMatrix matrix_from_tokens(std::span<const std::string> tokens, std::size_t num_tasks,
                                    std::size_t num_procs) {
  if (num_tasks == 0 || num_procs == 0) {
    throw Error(ErrorKind::InvalidDimensions, "dimensions must be positive");
  }
  if (tokens.size() != num_tasks * num_procs) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(num_tasks * num_procs) + " values for " +
                    std::to_string(num_tasks) + "x" + std::to_string(num_procs) + ", found " +
                    std::to_string(tokens.size()));
  }
  std::vector<double> costs;
  costs.reserve(tokens.size());
  for (const auto& tok : tokens) {
    double v = parse_cost_token(tok);
    if (!std::isfinite(v) || v <= 0.0) {
      throw Error(ErrorKind::NonPositiveCost, "cost '" + tok + "' is not a positive finite number");
    }
    costs.push_back(v);
  }
  return EtcMatrix(num_tasks, num_procs, std::move(costs));
}

}  // namespace detail

/// Headerless (Braun) layout: whitespace-separated costs, task-major, with
/// dimensions supplied by the caller.
inline EtcMatrix parse_instance(std::istream& source, std::size_t num_tasks, std::size_t num_procs) {
  auto tokens = detail::read_tokens(source);
  return detail::matrix_from_tokens(tokens, num_tasks, num_procs);
}

inline EtcMatrix parse_instance(std::string_view text, std::size_t num_tasks, std::size_t num_procs) {
  std::istringstream in{std::string(text)};
  return parse_instance(in, num_tasks, num_procs);
}

inline constexpr std::size_t kBraunTasks = 512;
inline constexpr std::size_t kBraunProcs = 16;

/// Reads either layout. Explicit dimensions force the headerless reading.
/// Otherwise a first line holding exactly two positive integers whose
/// product matches the remaining token count is taken as a header, and
/// anything else is read headerless at the Braun shape (512 x 16).
inline EtcMatrix load_instance(std::istream& source, std::optional<std::size_t> num_tasks = {},
                               std::optional<std::size_t> num_procs = {}) {
  std::string first_line;
  std::getline(source, first_line);
  std::vector<std::string> tokens;
  {
    std::istringstream line(first_line);
    std::string tok;
    while (line >> tok) tokens.push_back(std::move(tok));
  }
  std::size_t header_len = tokens.size();
  auto rest = detail::read_tokens(source);
  tokens.insert(tokens.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));

  if (!num_tasks && !num_procs && header_len == 2) {
    auto t = detail::parse_count(tokens[0]);
    auto p = detail::parse_count(tokens[1]);
    if (t && p && tokens.size() - 2 == *t * *p) {
      return detail::matrix_from_tokens(std::span(tokens).subspan(2), *t, *p);
    }
  }
  return detail::matrix_from_tokens(tokens, num_tasks.value_or(kBraunTasks), num_procs.value_or(kBraunProcs));
}

/// Self-describing layout: "num_tasks num_procs" then one task row per line.
/// Values are written in shortest round-trip form.
inline void write_instance(std::ostream& out, const EtcMatrix& m, bool with_header = true) {
  if (with_header) out << m.num_tasks() << ' ' << m.num_procs() << '\n';
  char buf[64];
  for (std::size_t t = 0; t < m.num_tasks(); ++t) {
    for (std::size_t p = 0; p < m.num_procs(); ++p) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), m(t, p));
      if (p) out << ' ';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

inline std::string serialize_instance(const EtcMatrix& m, bool with_header = true) {
  std::ostringstream out;
  write_instance(out, m, with_header);
  return out.str();
}

enum class ConsistencyCheck { Consistent, Inconsistent, SemiConsistentCandidate };

inline const char* to_string(ConsistencyCheck c) {
  switch (c) {
    case ConsistencyCheck::Consistent: return "consistent";
    case ConsistencyCheck::Inconsistent: return "inconsistent";
    case ConsistencyCheck::SemiConsistentCandidate: return "semi-consistent-candidate";
  }
  return "unknown";
}

/// True when one processor order (taken from the first row, ties by index)
/// leaves every row non-decreasing on the given columns.
inline bool columns_consistent(const EtcMatrix& m, std::span<const std::size_t> columns) {
  std::vector<std::size_t> order(columns.begin(), columns.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return m(0, a) < m(0, b); });
  for (std::size_t t = 0; t < m.num_tasks(); ++t) {
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (m(t, order[i - 1]) > m(t, order[i])) return false;
    }
  }
  return true;
}

/// A matrix that is not consistent qualifies as a semi-consistent candidate
/// when its even-indexed columns (at least two of them) form a consistent
/// sub-matrix.
inline ConsistencyCheck check_consistency(const EtcMatrix& m) {
  std::vector<std::size_t> all(m.num_procs());
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (columns_consistent(m, all)) return ConsistencyCheck::Consistent;
  std::vector<std::size_t> even;
  for (std::size_t p = 0; p < m.num_procs(); p += 2) even.push_back(p);
  if (even.size() >= 2 && columns_consistent(m, even)) return ConsistencyCheck::SemiConsistentCandidate;
  return ConsistencyCheck::Inconsistent;
}

/// Range-based ETC generation: a per-task baseline scaled by a per-entry
/// machine factor. Baseline ranges are [1, 3000] (high) / [1, 100] (low);
/// machine factors [1, 1000] (high) / [1, 10] (low). Consistent classes sort
/// each row ascending; semi-consistent ones sort only the even columns.
///
/// The unit draws do not depend on the class, so two classes generated with
/// the same seed differ only through the range mapping.
inline EtcMatrix generate_instance(const InstanceClass& cls, std::size_t num_tasks, std::size_t num_procs,
                                   std::uint64_t seed) {
  if (num_tasks == 0 || num_procs == 0) {
    throw Error(ErrorKind::InvalidDimensions, "dimensions must be positive");
  }
  if (cls.consistency == Consistency::SemiConsistent && num_procs < 2) {
    throw Error(ErrorKind::InvalidDimensions, "semi-consistent instances need at least two processors");
  }
  const double task_hi = cls.task_heterogeneity == Heterogeneity::High ? 3000.0 : 100.0;
  const double machine_hi = cls.machine_heterogeneity == Heterogeneity::High ? 1000.0 : 10.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> costs(num_tasks * num_procs);
  std::vector<double> evens;
  for (std::size_t t = 0; t < num_tasks; ++t) {
    const double baseline = 1.0 + unit(rng) * (task_hi - 1.0);
    double* row = costs.data() + t * num_procs;
    for (std::size_t p = 0; p < num_procs; ++p) {
      row[p] = baseline * (1.0 + unit(rng) * (machine_hi - 1.0));
    }
    if (cls.consistency == Consistency::Consistent) {
      std::sort(row, row + num_procs);
    } else if (cls.consistency == Consistency::SemiConsistent) {
      evens.clear();
      for (std::size_t p = 0; p < num_procs; p += 2) evens.push_back(row[p]);
      std::sort(evens.begin(), evens.end());
      for (std::size_t p = 0, i = 0; p < num_procs; p += 2, ++i) row[p] = evens[i];
    }
  }
  return EtcMatrix(num_tasks, num_procs, std::move(costs));
}

}  // namespace hcsp
