#include "dreams/error.hpp"

#include <utility>

namespace dreams {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::validation_error: return "validation_error";
        case ErrorCode::not_found: return "not_found";
        case ErrorCode::conflict: return "conflict";
        case ErrorCode::stale_revision: return "stale_revision";
        case ErrorCode::unsupported_version: return "unsupported_version";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::stale_index: return "stale_index";
        case ErrorCode::incomplete_log: return "incomplete_log";
        case ErrorCode::domain_error: return "domain_error";
        case ErrorCode::io_error: return "io_error";
        case ErrorCode::bad_request: return "bad_request";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail, std::string offending_id)
    : std::runtime_error(detail), code_(code), offending_id_(std::move(offending_id)) {}

Error::Error(ErrorCode code, const std::string& detail, std::vector<Violation> violations)
    : std::runtime_error(detail), code_(code), violations_(std::move(violations)) {
    if (!violations_.empty()) offending_id_ = violations_.front().id;
}

}  // namespace dreams
