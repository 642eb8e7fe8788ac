#pragma once

#include <stdexcept>
#include <string>

namespace btb {

enum class ErrorKind {
    usage,
    parse,
    dead_bus,
    low_voltage,
    collapsed_dc_link,
    network_degenerate,
    singular_equivalent,
    init_failure,
    divergence,
    compare_threshold,
    io,
};

class SimError : public std::runtime_error {
public:
    SimError(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Process exit code contract: 0 success, 1 usage, 2 parse,
    // 3 numerical/model abort, 4 comparison threshold exceeded.
    int exit_code() const noexcept {
        switch (kind_) {
            case ErrorKind::usage:
            case ErrorKind::io: return 1;
            case ErrorKind::parse: return 2;
            case ErrorKind::compare_threshold: return 4;
            default: return 3;
        }
    }

private:
    ErrorKind kind_;
};

} // namespace btb
