#include "dreams/api.hpp"

#include "json_codec.hpp"

namespace dreams::api {

std::string mutation_response(const ModelDocument& document, std::string_view affected_id,
                              const std::vector<std::string>* removed_links) {
    codec::Json body = {{"id", affected_id},
                        {"revision", document.revision},
                        {"document", codec::document_to_json(document)}};
    if (removed_links) body["removed_links"] = *removed_links;
    return codec::dump(body);
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::validation_error: return 422;
        case ErrorCode::not_found: return 404;
        case ErrorCode::conflict: return 409;
        case ErrorCode::stale_revision: return 409;
        case ErrorCode::unsupported_version: return 400;
        case ErrorCode::parse_error: return 400;
        case ErrorCode::bad_request: return 400;
        case ErrorCode::stale_index: return 409;
        case ErrorCode::incomplete_log: return 422;
        case ErrorCode::domain_error: return 422;
        case ErrorCode::io_error: return 503;
    }
    return 500;
}

std::string error_body(const Error& error) {
    codec::Json body = {{"status", http_status(error.code())}, {"code", to_string(error.code())}, {"detail", error.what()}};
    if (!error.offending_id().empty()) body["offending_id"] = error.offending_id();
    if (!error.violations().empty()) body["violations"] = codec::violations_to_json(error.violations());
    return codec::dump(body);
}

std::string validation_report(const std::vector<Violation>& violations) {
    return codec::dump({{"valid", violations.empty()}, {"violations", codec::violations_to_json(violations)}});
}

}  // namespace dreams::api
