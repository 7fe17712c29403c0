#include "dnabrick/error.hpp"

namespace dnabrick {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::dimension_invalid: return "dimension-invalid";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::inverted_box: return "inverted-box";
    case ErrorKind::spec_mismatch: return "spec-mismatch";
    case ErrorKind::unknown_brick: return "unknown-brick";
    case ErrorKind::infeasible_config: return "infeasible-config";
    case ErrorKind::invalid_sequence: return "invalid-sequence";
    case ErrorKind::length_mismatch: return "length-mismatch";
    case ErrorKind::negative_rate: return "negative-rate";
    case ErrorKind::malformed: return "malformed";
    case ErrorKind::unsupported_version: return "unsupported-version";
    case ErrorKind::checksum_mismatch: return "checksum-mismatch";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

} // namespace dnabrick
