#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "sparsekit/graphs.hpp"
#include "sparsekit/sparsifier.hpp"

namespace sparsekit {

inline constexpr int kStatsSchemaVersion = 1;

/// Name of the only field that differs between repeated identical runs.
inline constexpr const char* kWallClockField = "wall_clock_s";

struct RunShape {
  int n_vertices = 0;  // 0 for general vector sets
  int m = 0;
};

/// One record per run; "log" holds one object per iteration when
/// include_log is set.
nlohmann::json sparsify_record(const SparsifierResult& r, const RunShape& shape,
                               bool include_log, double wall_clock_s);

nlohmann::json verify_record(const VerificationReport& rep, double threshold);

/// Copy without the wall-clock field, for determinism comparisons.
nlohmann::json without_wall_clock(const nlohmann::json& record);

}  // namespace sparsekit
