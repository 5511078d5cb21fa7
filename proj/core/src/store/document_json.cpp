#include <algorithm>
#include <chrono>
#include <cstdio>
#include <initializer_list>
#include <set>

#include "dreams/store.hpp"
#include "json_codec.hpp"

namespace dreams {
namespace codec {
namespace {

[[noreturn]] void shape_error(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::parse_error, where + ": " + what);
}

const Json& require_object(const Json& json, const std::string& where,
                           std::initializer_list<std::string_view> required,
                           std::initializer_list<std::string_view> optional = {}) {
    if (!json.is_object()) shape_error(where, "expected an object");
    for (const auto& [key, value] : json.items()) {
        (void)value;
        bool known = std::ranges::find(required, key) != required.end() ||
                     std::ranges::find(optional, key) != optional.end();
        if (!known) shape_error(where, "unknown field '" + key + "'");
    }
    for (auto key : required) {
        if (!json.contains(key)) shape_error(where, "missing field '" + std::string(key) + "'");
    }
    return json;
}

std::string get_string(const Json& obj, std::string_view key, const std::string& where) {
    const auto& value = obj.at(key);
    if (!value.is_string()) shape_error(where, "field '" + std::string(key) + "' must be a string");
    return value.get<std::string>();
}

std::optional<std::string> get_optional_string(const Json& obj, std::string_view key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) shape_error(where, "field '" + std::string(key) + "' must be a string");
    return it->get<std::string>();
}

template <typename Enum, typename Parser>
Enum get_enum(const Json& obj, std::string_view key, const std::string& where, Parser parse) {
    auto text = get_string(obj, key, where);
    auto value = parse(text);
    if (!value) shape_error(where, "unknown " + std::string(key) + " '" + text + "'");
    return *value;
}

std::optional<Polarity> polarity_from_sign(std::string_view sign) {
    if (sign == "+") return Polarity::positive;
    if (sign == "-") return Polarity::negative;
    return std::nullopt;
}

}  // namespace

std::string dump(const Json& json) {
    return json.dump(2) + "\n";
}

Json parse(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorCode::parse_error,
                    "malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column));
    }
}

Json node_to_json(const FactorNode& node) {
    Json j = {{"id", node.id}, {"kind", to_string(node.kind)}, {"label", node.label}, {"tags", node.tags}};
    if (node.notes) j["notes"] = *node.notes;
    return j;
}

Json evidence_to_json(const EvidenceItem& item) {
    Json j = {{"id", item.id},
              {"kind", to_string(item.kind)},
              {"text", item.text},
              {"created_at", store::format_timestamp(item.created_at)}};
    if (item.locator) j["locator"] = *item.locator;
    return j;
}

Json link_to_json(const CausalLink& link) {
    Json evidence = Json::array();
    for (const auto& item : link.evidence) evidence.push_back(evidence_to_json(item));
    Json j = {{"id", link.id},
              {"source", link.source},
              {"target", link.target},
              {"polarity", link.polarity == Polarity::positive ? "+" : "-"},
              {"evidence", std::move(evidence)}};
    if (link.notes) j["notes"] = *link.notes;
    return j;
}

Json document_to_json(const ModelDocument& model) {
    Json nodes = Json::array();
    for (const auto& node : model.nodes) nodes.push_back(node_to_json(node));
    Json links = Json::array();
    for (const auto& link : model.links) links.push_back(link_to_json(link));
    return {{"schema_version", kSchemaVersion},
            {"model",
             {{"id", model.id}, {"kind", to_string(model.kind)}, {"title", model.title}, {"revision", model.revision}}},
            {"nodes", std::move(nodes)},
            {"links", std::move(links)}};
}

ModelDocument document_from_json(const Json& json) {
    if (!json.is_object()) shape_error("document", "expected an object");
    // Version check comes first so future files fail with the right error.
    auto version = json.find("schema_version");
    if (version == json.end() || !version->is_string()) shape_error("document", "missing field 'schema_version'");
    if (version->get<std::string>() != kSchemaVersion) {
        throw Error(ErrorCode::unsupported_version,
                    "unsupported schema_version '" + version->get<std::string>() + "'");
    }
    require_object(json, "document", {"schema_version", "model", "nodes", "links"});

    ModelDocument model;
    const auto& head = require_object(json.at("model"), "model", {"id", "kind", "title", "revision"});
    model.id = get_string(head, "id", "model");
    model.kind = get_enum<ModelKind>(head, "kind", "model", parse_model_kind);
    model.title = get_string(head, "title", "model");
    const auto& revision = head.at("revision");
    if (!revision.is_number_unsigned()) shape_error("model", "field 'revision' must be a non-negative integer");
    model.revision = revision.get<std::uint64_t>();

    if (!json.at("nodes").is_array()) shape_error("document", "field 'nodes' must be an array");
    for (const auto& raw : json.at("nodes")) {
        const auto& obj = require_object(raw, "node", {"id", "kind", "label", "tags"}, {"notes"});
        FactorNode node;
        node.id = get_string(obj, "id", "node");
        const std::string where = "node '" + node.id + "'";
        node.kind = get_enum<NodeKind>(obj, "kind", where, parse_node_kind);
        node.label = get_string(obj, "label", where);
        node.notes = get_optional_string(obj, "notes", where);
        if (!obj.at("tags").is_array()) shape_error(where, "field 'tags' must be an array");
        for (const auto& tag : obj.at("tags")) {
            if (!tag.is_string()) shape_error(where, "tags must be strings");
            node.tags.push_back(tag.get<std::string>());
        }
        model.nodes.push_back(std::move(node));
    }

    if (!json.at("links").is_array()) shape_error("document", "field 'links' must be an array");
    for (const auto& raw : json.at("links")) {
        const auto& obj = require_object(raw, "link", {"id", "source", "target", "polarity", "evidence"}, {"notes"});
        CausalLink link;
        link.id = get_string(obj, "id", "link");
        const std::string where = "link '" + link.id + "'";
        link.source = get_string(obj, "source", where);
        link.target = get_string(obj, "target", where);
        link.polarity = get_enum<Polarity>(obj, "polarity", where, polarity_from_sign);
        link.notes = get_optional_string(obj, "notes", where);
        if (!obj.at("evidence").is_array()) shape_error(where, "field 'evidence' must be an array");
        for (const auto& raw_item : obj.at("evidence")) {
            const auto& item_obj =
                require_object(raw_item, "evidence", {"id", "kind", "text", "created_at"}, {"locator"});
            EvidenceItem item;
            item.id = get_string(item_obj, "id", "evidence");
            const std::string item_where = "evidence '" + item.id + "'";
            item.kind = get_enum<EvidenceKind>(item_obj, "kind", item_where, parse_evidence_kind);
            item.text = get_string(item_obj, "text", item_where);
            item.locator = get_optional_string(item_obj, "locator", item_where);
            auto created = store::parse_timestamp(get_string(item_obj, "created_at", item_where));
            if (!created) shape_error(item_where, "created_at must be an ISO-8601 UTC timestamp");
            item.created_at = *created;
            link.evidence.push_back(std::move(item));
        }
        model.links.push_back(std::move(link));
    }

    if (auto violations = validate(model); !violations.empty()) {
        std::string detail = "document violates " + std::to_string(violations.size()) + " invariant(s)";
        for (const auto& v : violations) detail += "; " + v.id + ": " + v.rule;
        throw Error(ErrorCode::validation_error, detail, std::move(violations));
    }
    return model;
}

Json violations_to_json(const std::vector<Violation>& violations) {
    Json out = Json::array();
    for (const auto& v : violations) out.push_back({{"id", v.id}, {"rule", v.rule}, {"message", v.message}});
    return out;
}

}  // namespace codec

namespace store {

std::string serialize(const ModelDocument& model) {
    if (auto violations = validate(model); !violations.empty()) {
        throw Error(ErrorCode::validation_error, "cannot serialize an invalid document", std::move(violations));
    }
    try {
        return codec::dump(codec::document_to_json(model));
    } catch (const nlohmann::json::type_error& e) {
        throw Error(ErrorCode::validation_error, std::string("document text is not valid UTF-8: ") + e.what());
    }
}

ModelDocument deserialize(std::string_view text) {
    return codec::document_from_json(codec::parse(text));
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const hh_mm_ss hms{ts - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':' || text[19] != 'Z') {
        return std::nullopt;
    }
    auto number = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int value = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (text[i] < '0' || text[i] > '9') return std::nullopt;
            value = value * 10 + (text[i] - '0');
        }
        return value;
    };
    auto y = number(0, 4), mo = number(5, 2), d = number(8, 2);
    auto h = number(11, 2), mi = number(14, 2), s = number(17, 2);
    if (!y || !mo || !d || !h || !mi || !s) return std::nullopt;
    const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
    if (!ymd.ok() || *h > 23 || *mi > 59 || *s > 59) return std::nullopt;
    return Timestamp{sys_days{ymd}} + hours{*h} + minutes{*mi} + seconds{*s};
}

}  // namespace store
}  // namespace dreams
