#pragma once

#include <stdexcept>
#include <string>

namespace cw {

// Error categories map 1:1 onto CLI exit codes and C API status values.
enum class ErrorCategory : int {
    validation = 2,
    numeric = 3,
    io = 4,
    alignment = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }
    int code() const { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void throw_validation(const std::string& msg) {
    throw Error(ErrorCategory::validation, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
    throw Error(ErrorCategory::numeric, msg);
}
[[noreturn]] inline void throw_io(const std::string& msg) {
    throw Error(ErrorCategory::io, msg);
}
[[noreturn]] inline void throw_alignment(const std::string& msg) {
    throw Error(ErrorCategory::alignment, msg);
}

} // namespace cw
