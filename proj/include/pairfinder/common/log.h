#pragma once

#include <memory>

#include <spdlog/spdlog.h>

namespace pairfinder {

// Shared stderr logger ("pairfinder"); created on first use.
spdlog::logger& logger();

}  // namespace pairfinder
