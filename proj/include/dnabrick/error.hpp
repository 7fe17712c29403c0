#pragma once

#include <stdexcept>
#include <string>

namespace dnabrick {

enum class ErrorKind {
    dimension_invalid,
    out_of_range,
    inverted_box,
    spec_mismatch,
    unknown_brick,
    infeasible_config,
    invalid_sequence,
    length_mismatch,
    negative_rate,
    malformed,
    unsupported_version,
    checksum_mismatch,
    io,
};

const char* to_string(ErrorKind kind);

// Every library failure carries a kind so front ends can map it to an exit
// code or HTTP status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace dnabrick
