#pragma once

#include <stdexcept>
#include <string>

namespace uwoc {

// Thrown when a FEC-limit search cannot reach the requested BER threshold:
// the BER floor at infinite SNR sits at or above it. The floor is carried so
// callers (grid optimizers, sweep harnesses) can report or skip the point.
class NoSolutionError : public std::runtime_error {
public:
    NoSolutionError(const std::string& msg, double ber_floor)
        : std::runtime_error(msg), ber_floor_(ber_floor) {}

    double ber_floor() const noexcept { return ber_floor_; }

private:
    double ber_floor_;
};

// Configuration / option errors. what() carries "file:line: message" when the
// offending entry came from a config file.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace uwoc
