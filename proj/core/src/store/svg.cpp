#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dreams/store.hpp"

namespace dreams::store {
namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string_view fill_of(NodeKind kind) {
    switch (kind) {
        case NodeKind::influencing_factor: return "#dbe9f6";
        case NodeKind::success_factor: return "#d9f2d9";
        case NodeKind::key_factor: return "#fde2b8";
        case NodeKind::assumption_node: return "#eeeeee";
    }
    return "#ffffff";
}

// Point halfway along the polyline, with the direction of that segment.
std::pair<layout::Point, layout::Point> midpoint(const std::vector<layout::Point>& pts) {
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) total += std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
    double remaining = total / 2.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double len = std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
        if (len > 0.0 && remaining <= len) {
            const double t = remaining / len;
            layout::Point dir{(pts[i].x - pts[i - 1].x) / len, (pts[i].y - pts[i - 1].y) / len};
            return {{pts[i - 1].x + t * (pts[i].x - pts[i - 1].x), pts[i - 1].y + t * (pts[i].y - pts[i - 1].y)}, dir};
        }
        remaining -= len;
    }
    return {pts.empty() ? layout::Point{} : pts.front(), {0.0, 1.0}};
}

}  // namespace

CanvasTransform canvas_transform(const layout::LayeredLayout& layout, const SvgOptions& options) {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x;
    double max_x = -min_x;
    double max_y = -min_x;
    auto take = [&](const layout::Point& p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    };
    for (const auto& [id, p] : layout.position_of) take(p);
    for (const auto& [id, route] : layout.routes) {
        for (const auto& p : route) take(p);
    }
    if (min_x > max_x) min_x = min_y = max_x = max_y = 0.0;

    CanvasTransform t;
    t.min_x = min_x;
    t.min_y = min_y;
    t.scale = options.scale;
    t.offset_x = options.margin + options.node_width / 2.0;
    t.offset_y = options.margin + options.node_height / 2.0;
    t.width = (max_x - min_x) * options.scale + 2.0 * options.margin + options.node_width;
    t.height = (max_y - min_y) * options.scale + 2.0 * options.margin + options.node_height;
    return t;
}

std::string render_svg(const ModelDocument& model, const layout::LayeredLayout& layout, const SvgOptions& options) {
    layout::check_matches(model, layout);
    if (!(options.scale > 0.0)) throw Error(ErrorCode::validation_error, "svg scale must be positive");
    const auto t = canvas_transform(layout, options);

    // Pull the arrow tip back to roughly the node boundary along the final segment.
    const double tip_back = options.node_height / 2.0 + 2.0;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(t.width) + "\" height=\"" +
           num(t.height) + "\" viewBox=\"0 0 " + num(t.width) + " " + num(t.height) + "\">\n";
    out += "  <title>" + xml_escape(model.title) + "</title>\n";
    out += "  <defs>\n";
    out += "    <marker id=\"arrow\" markerUnits=\"userSpaceOnUse\" markerWidth=\"10\" markerHeight=\"10\" refX=\"" +
           num(10.0 + tip_back) + "\" refY=\"5\" orient=\"auto\">\n";
    out += "      <path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333333\"/>\n";
    out += "    </marker>\n";
    out += "  </defs>\n";

    out += "  <g class=\"links\">\n";
    for (const auto& link : model.links) {
        const auto& route = layout.routes.at(link.id);
        std::vector<layout::Point> pts;
        for (const auto& p : route) pts.push_back(t.apply(p));
        std::string d;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            d += (i == 0 ? "M" : " L") + num(pts[i].x) + " " + num(pts[i].y);
        }
        const bool positive = link.polarity == Polarity::positive;
        out += "    <path id=\"link-" + xml_escape(link.id) + "\" class=\"link link-" +
               std::string(to_string(link.polarity)) + "\" d=\"" + d +
               "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"" +
               (positive ? "" : " stroke-dasharray=\"6 4\"") + " marker-end=\"url(#arrow)\"/>\n";

        const auto [mid, dir] = midpoint(pts);
        // glyph sits just off the path, on its left-hand normal
        const layout::Point glyph{mid.x - dir.y * 10.0, mid.y + dir.x * 10.0};
        out += "    <text class=\"polarity\" x=\"" + num(glyph.x) + "\" y=\"" + num(glyph.y) +
               "\" font-family=\"Helvetica\" font-size=\"16\" text-anchor=\"middle\">" +
               (positive ? "+" : "−") + "</text>\n";
        if (!link.evidence.empty()) {
            const layout::Point badge{mid.x + dir.y * 12.0, mid.y - dir.x * 12.0};
            out += "    <g class=\"evidence-badge\">\n";
            out += "      <rect x=\"" + num(badge.x - 9.0) + "\" y=\"" + num(badge.y - 9.0) +
                   "\" width=\"18\" height=\"18\" rx=\"9\" ry=\"9\" fill=\"#5b7db1\"/>\n";
            out += "      <text x=\"" + num(badge.x) + "\" y=\"" + num(badge.y + 4.0) +
                   "\" font-family=\"Helvetica\" font-size=\"11\" fill=\"#ffffff\" text-anchor=\"middle\">" +
                   std::to_string(link.evidence.size()) + "</text>\n";
            out += "    </g>\n";
        }
    }
    out += "  </g>\n";

    out += "  <g class=\"nodes\">\n";
    const double w = options.node_width;
    const double h = options.node_height;
    for (const auto& node : model.nodes) {
        const auto c = t.apply(layout.position_of.at(node.id));
        const std::string common = " id=\"node-" + xml_escape(node.id) + "\" class=\"node node-" +
                                   std::string(to_string(node.kind)) + "\" fill=\"" + std::string(fill_of(node.kind)) +
                                   "\" stroke=\"#333333\"";
        switch (node.kind) {
            case NodeKind::success_factor:
                out += "    <ellipse" + common + " cx=\"" + num(c.x) + "\" cy=\"" + num(c.y) + "\" rx=\"" +
                       num(w / 2.0) + "\" ry=\"" + num(h / 2.0) + "\"/>\n";
                break;
            case NodeKind::key_factor:
                out += "    <rect" + common + " stroke-width=\"3\" x=\"" + num(c.x - w / 2.0) + "\" y=\"" +
                       num(c.y - h / 2.0) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
                       "\" rx=\"10\" ry=\"10\"/>\n";
                break;
            case NodeKind::assumption_node:
                out += "    <rect" + common + " stroke-dasharray=\"4 3\" x=\"" + num(c.x - w / 2.0) + "\" y=\"" +
                       num(c.y - h / 2.0) + "\" width=\"" + num(w) + "\" height=\"" + num(h) + "\"/>\n";
                break;
            case NodeKind::influencing_factor:
                out += "    <rect" + common + " x=\"" + num(c.x - w / 2.0) + "\" y=\"" + num(c.y - h / 2.0) +
                       "\" width=\"" + num(w) + "\" height=\"" + num(h) + "\"/>\n";
                break;
        }
        out += "    <text class=\"label\" x=\"" + num(c.x) + "\" y=\"" + num(c.y + 4.0) +
               "\" font-family=\"Helvetica\" font-size=\"12\" text-anchor=\"middle\">" + xml_escape(node.label) +
               "</text>\n";
    }
    out += "  </g>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace dreams::store
