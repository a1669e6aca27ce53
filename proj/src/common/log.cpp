#include "pairfinder/common/log.h"

#include <spdlog/sinks/stdout_color_sinks.h>

namespace pairfinder {

spdlog::logger& logger() {
    static std::shared_ptr<spdlog::logger> instance = [] {
        auto existing = spdlog::get("pairfinder");
        if (existing) return existing;
        auto created = spdlog::stderr_color_mt("pairfinder");
        created->set_pattern("[%l] %v");
        return created;
    }();
    return *instance;
}

}  // namespace pairfinder
