#include <string>

#include "dreams/store.hpp"

namespace dreams::store {
namespace {

std::string quoted(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

struct NodeStyle {
    std::string_view shape;
    std::string_view fill;
    std::string_view style;
};

NodeStyle style_of(NodeKind kind) {
    switch (kind) {
        case NodeKind::influencing_factor: return {"box", "#dbe9f6", "filled"};
        case NodeKind::success_factor: return {"ellipse", "#d9f2d9", "filled"};
        case NodeKind::key_factor: return {"doubleoctagon", "#fde2b8", "filled,bold"};
        case NodeKind::assumption_node: return {"note", "#eeeeee", "filled,dashed"};
    }
    return {"box", "#ffffff", "filled"};
}

}  // namespace

std::string export_dot(const ModelDocument& model) {
    std::string out = "digraph " + quoted(model.id) + " {\n";
    out += "  graph [label=" + quoted(model.title) + ", rankdir=TB, kind=" + quoted(to_string(model.kind)) + "];\n";
    out += "  node [fontname=\"Helvetica\"];\n";
    out += "  edge [fontname=\"Helvetica\"];\n";
    for (const auto& node : model.nodes) {
        const auto style = style_of(node.kind);
        out += "  " + quoted(node.id) + " [label=" + quoted(node.label) + ", shape=" + std::string(style.shape) +
               ", style=" + quoted(style.style) + ", fillcolor=" + quoted(style.fill) +
               ", kind=" + quoted(to_string(node.kind)) + "];\n";
    }
    for (const auto& link : model.links) {
        const bool positive = link.polarity == Polarity::positive;
        out += "  " + quoted(link.source) + " -> " + quoted(link.target) + " [id=" + quoted(link.id) +
               ", label=" + quoted(positive ? "+" : "−") + ", style=" + (positive ? "solid" : "dashed") +
               ", polarity=" + quoted(to_string(link.polarity)) +
               ", evidence=" + std::to_string(link.evidence.size()) + "];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace dreams::store
