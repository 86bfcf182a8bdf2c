#pragma once

#include <memory>

#include <spdlog/spdlog.h>

namespace sparsekit {

/// Shared stderr logger. Level comes from SPARSEKIT_LOG
/// (trace|debug|info|warn|error|off), default warn.
std::shared_ptr<spdlog::logger> logger();

}  // namespace sparsekit
