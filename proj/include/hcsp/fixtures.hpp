#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "hcsp/error.hpp"

namespace hcsp::braun {

/// Published results on the first matrix of each of the twelve 512 x 16
/// benchmark classes: mean and CV of the best-of-16 makespan over 50
/// repetitions for the parallel micro EA and for local search + shaking.
struct ReferenceMeanRow {
  std::string_view instance;
  double micro_ea_mean;
  double micro_ea_cv_percent;
  double ls_mean;
  double ls_cv_percent;
};

inline constexpr std::array<ReferenceMeanRow, 12> kReferenceMeans{{
    {"u_c_hihi.0", 7394702.7, 0.09, 7401477.4, 0.06},
    {"u_c_hilo.0", 153193.7, 0.04, 153156.2, 0.02},
    {"u_c_lohi.0", 239706.2, 0.08, 239859.3, 0.06},
    {"u_c_lolo.0", 5152.3, 0.04, 5146.5, 0.02},
    {"u_i_hihi.0", 2947896.4, 0.14, 2932328.8, 0.07},
    {"u_i_hilo.0", 73531.4, 0.10, 73310.9, 0.03},
    {"u_i_lohi.0", 102402.8, 0.17, 101685.4, 0.06},
    {"u_i_lolo.0", 2547.1, 0.09, 2539.6, 0.04},
    {"u_s_hihi.0", 4123537.3, 0.27, 4095948.4, 0.09},
    {"u_s_hilo.0", 96020.5, 0.10, 95820.2, 0.03},
    {"u_s_lohi.0", 122744.4, 0.23, 121734.2, 0.13},
    {"u_s_lolo.0", 3438.3, 0.07, 3427.3, 0.03},
}};

/// Long-run best makespans with the LP lower bounds and reported gaps.
struct LowerBoundRow {
  std::string_view instance;
  double long_run_makespan;
  double lower_bound;
  double gap_percent;
};

inline constexpr std::array<LowerBoundRow, 12> kLowerBounds{{
    {"u_c_hihi.0", 7360142.1, 7346524.2, 0.19},
    {"u_c_hilo.0", 152815.4, 152700.4, 0.08},
    {"u_c_lohi.0", 238768.4, 238138.1, 0.26},
    {"u_c_lolo.0", 5137.9, 5132.8, 0.10},
    {"u_i_hihi.0", 2930069.0, 2909326.6, 0.71},
    {"u_i_hilo.0", 73182.6, 73057.9, 0.17},
    {"u_i_lohi.0", 101547.1, 101063.4, 0.48},
    {"u_i_lolo.0", 2536.1, 2529.0, 0.28},
    {"u_s_hihi.0", 4087295.7, 4063563.7, 0.58},
    {"u_s_hilo.0", 95584.0, 95419.0, 0.17},
    {"u_s_lohi.0", 121147.6, 120452.3, 0.57},
    {"u_s_lolo.0", 3420.8, 3414.8, 0.18},
}};

/// Instance names may carry a directory prefix; only the file name is matched.
inline std::string_view base_name(std::string_view name) {
  if (auto slash = name.find_last_of("/\\"); slash != std::string_view::npos) name = name.substr(slash + 1);
  return name;
}

inline std::optional<double> lower_bound_for(std::string_view instance) {
  instance = base_name(instance);
  for (const auto& row : kLowerBounds) {
    if (row.instance == instance) return row.lower_bound;
  }
  return std::nullopt;
}

inline const ReferenceMeanRow* reference_means_for(std::string_view instance) {
  instance = base_name(instance);
  for (const auto& row : kReferenceMeans) {
    if (row.instance == instance) return &row;
  }
  return nullptr;
}

/// Throws LowerBoundViolated when a makespan reported for a benchmark
/// instance falls below its published lower bound. Unknown names pass.
inline void check_lower_bound(std::string_view instance, double makespan) {
  if (auto lb = lower_bound_for(instance); lb && makespan < *lb) {
    throw Error(ErrorKind::LowerBoundViolated,
                std::string(base_name(instance)) + " makespan " + std::to_string(makespan) +
                    " is below the lower bound " + std::to_string(*lb));
  }
}

}  // namespace hcsp::braun
