#pragma once

// JSON conversions shared by the store, search, metrics and service code.
// Not installed: nlohmann::json stays out of the public headers.

#include "json.hpp"

#include "dreams/layout.hpp"
#include "dreams/model.hpp"

namespace dreams::codec {

using Json = nlohmann::json;

Json document_to_json(const ModelDocument& model);
ModelDocument document_from_json(const Json& json);

Json node_to_json(const FactorNode& node);
Json link_to_json(const CausalLink& link);
Json evidence_to_json(const EvidenceItem& item);

Json layout_to_json(const layout::LayeredLayout& layout);
layout::LayeredLayout layout_from_json(const Json& json);

Json violations_to_json(const std::vector<Violation>& violations);

// Canonical text form: sorted keys, 2-space indent, trailing newline.
std::string dump(const Json& json);

// Parses `text`, translating nlohmann parse errors into
// Error(parse_error) with a line/column position.
Json parse(std::string_view text);

}  // namespace dreams::codec
