#pragma once

// Response bodies shared by the HTTP service and the CLI's --json output.

#include <string>
#include <string_view>
#include <vector>

#include "dreams/error.hpp"
#include "dreams/model.hpp"

namespace dreams::api {

/// {"id": <affected id>, "revision": n, "document": {...}} plus
/// "removed_links": [...] when a node removal cascaded.
std::string mutation_response(const ModelDocument& document, std::string_view affected_id,
                              const std::vector<std::string>* removed_links = nullptr);

/// {"status": 404, "code": "not_found", "detail": "...", "offending_id": "...",
///  "violations": [...]}; offending_id and violations only when present.
std::string error_body(const Error& error);

int http_status(ErrorCode code);

/// {"valid": bool, "violations": [{"id", "rule", "message"}, ...]}
std::string validation_report(const std::vector<Violation>& violations);

}  // namespace dreams::api
