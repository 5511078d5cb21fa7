#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dreams {

enum class ErrorCode {
    validation_error,
    not_found,
    conflict,
    stale_revision,
    unsupported_version,
    parse_error,
    stale_index,
    incomplete_log,
    domain_error,
    io_error,
    bad_request,
};

std::string_view to_string(ErrorCode code);

/// One broken document invariant. `rule` is a stable machine name
/// (e.g. "referential_integrity"); `id` names the offending element.
struct Violation {
    std::string id;
    std::string rule;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail, std::string offending_id = {});
    Error(ErrorCode code, const std::string& detail, std::vector<Violation> violations);

    ErrorCode code() const noexcept { return code_; }
    const std::string& offending_id() const noexcept { return offending_id_; }
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    ErrorCode code_;
    std::string offending_id_;
    std::vector<Violation> violations_;
};

}  // namespace dreams
