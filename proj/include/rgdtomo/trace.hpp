// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "rgdtomo/errors.hpp"

namespace rgdtomo {

enum class StopReason {
  kMaxIters,
  kSmallChange,
  kObjectiveFloor,
  kZeroDirection,
  kDiverged,
};

inline std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::kMaxIters:
      return "max_iters";
    case StopReason::kSmallChange:
      return "small_change";
    case StopReason::kObjectiveFloor:
      return "objective_floor";
    case StopReason::kZeroDirection:
      return "zero_direction";
    case StopReason::kDiverged:
      return "diverged";
  }
  return "max_iters";
}

/** One iterate of a solver run. Absent values are NaN. */
struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double step_size = std::nan("");
  double frob_err_sq = std::nan("");
  double wall_ms = 0.0;
};

struct SolverTrace {
  std::vector<TraceRow> rows;
  StopReason stop_reason = StopReason::kMaxIters;
  bool rank_collapsed = false;
  bool diverged = false;
};

namespace detail {

// Shortest representation that round-trips a double exactly.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char probe[64];
      std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
      std::sscanf(probe, "%lf", &back);
      if (back == v) return probe;
    }
  }
  return buf;
}

}  // namespace detail

/**
 * Writes a trace as CSV with columns iter,objective,step_size,frob_err_sq
 * and optionally wall_ms. Timing is volatile, so artifacts that must be
 * byte-identical across reruns are written with include_wall = false.
 */
inline void write_trace_csv(const SolverTrace& trace, std::ostream& os,
                            bool include_wall) {
  os << "iter,objective,step_size,frob_err_sq";
  if (include_wall) os << ",wall_ms";
  os << "\n";
  for (const auto& row : trace.rows) {
    os << row.iter << ',' << detail::format_double(row.objective) << ','
       << detail::format_double(row.step_size) << ','
       << detail::format_double(row.frob_err_sq);
    if (include_wall) os << ',' << detail::format_double(row.wall_ms);
    os << "\n";
  }
  if (!os) throw IoError("failed while writing trace CSV");
}

}  // namespace rgdtomo
