#include "dreams/store.hpp"
#include "json_codec.hpp"

namespace dreams {
namespace codec {
namespace {

Json point_to_json(const layout::Point& p) {
    return Json::array({p.x, p.y});
}

layout::Point point_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorCode::parse_error, "layout: a point must be [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

const Json& field(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorCode::parse_error, std::string("layout: missing field '") + key + "'");
    return *it;
}

}  // namespace

Json layout_to_json(const layout::LayeredLayout& layout) {
    Json positions = Json::object();
    for (const auto& [id, p] : layout.position_of) positions[id] = point_to_json(p);
    Json routes = Json::object();
    for (const auto& [id, points] : layout.routes) {
        Json route = Json::array();
        for (const auto& p : points) route.push_back(point_to_json(p));
        routes[id] = std::move(route);
    }
    return {{"layer_of", layout.layer_of},
            {"order_of", layout.order_of},
            {"position_of", std::move(positions)},
            {"routes", std::move(routes)},
            {"reversed_links", layout.reversed_links},
            {"crossing_count", layout.crossing_count}};
}

layout::LayeredLayout layout_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "layout: expected an object");
    layout::LayeredLayout out;
    try {
        out.layer_of = field(j, "layer_of").get<std::map<std::string, int>>();
        out.order_of = field(j, "order_of").get<std::map<std::string, int>>();
        for (const auto& [id, p] : field(j, "position_of").items()) out.position_of[id] = point_from_json(p);
        for (const auto& [id, route] : field(j, "routes").items()) {
            if (!route.is_array()) throw Error(ErrorCode::parse_error, "layout: a route must be an array");
            auto& points = out.routes[id];
            for (const auto& p : route) points.push_back(point_from_json(p));
        }
        out.reversed_links = field(j, "reversed_links").get<std::set<std::string>>();
        out.crossing_count = field(j, "crossing_count").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("layout: ") + e.what());
    }
    return out;
}

}  // namespace codec

namespace store {

std::string serialize_layout(const layout::LayeredLayout& layout) {
    return codec::dump(codec::layout_to_json(layout));
}

layout::LayeredLayout deserialize_layout(std::string_view text) {
    return codec::layout_from_json(codec::parse(text));
}

}  // namespace store
}  // namespace dreams
