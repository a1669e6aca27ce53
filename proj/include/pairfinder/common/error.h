#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairfinder {

enum class ErrorCategory {
    Parse,
    Validation,
    Config,
    Domain,
    Training,
    InsufficientHistory,
    Io,
};

std::string_view to_string(ErrorCategory category);

// Every failure raised by the library carries a category so callers (the CLI
// in particular) can map it to an exit code without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] void raise(ErrorCategory category, const std::string& message);

}  // namespace pairfinder
