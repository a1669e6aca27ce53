#include "pairfinder/common/error.h"

namespace pairfinder {

std::string_view to_string(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Parse: return "parse";
        case ErrorCategory::Validation: return "validation";
        case ErrorCategory::Config: return "config";
        case ErrorCategory::Domain: return "domain";
        case ErrorCategory::Training: return "training";
        case ErrorCategory::InsufficientHistory: return "insufficient-history";
        case ErrorCategory::Io: return "io";
    }
    return "unknown";
}

void raise(ErrorCategory category, const std::string& message) {
    throw Error(category, message);
}

}  // namespace pairfinder
