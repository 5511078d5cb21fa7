#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dreams/layout.hpp"
#include "dreams/model.hpp"

namespace dreams::store {

inline constexpr std::string_view kFileExtension = ".dreams.json";

/// Canonical JSON text: sorted keys, two-space indent, arrays in document
/// order, trailing newline. Identical documents give identical bytes.
/// Throws Error(validation_error) if `validate(model)` is not empty.
std::string serialize(const ModelDocument& model);

/// Strict reader: unknown or missing fields are rejected. Errors:
///   parse_error          malformed JSON (message carries line and column) or
///                        a field of the wrong shape
///   unsupported_version  schema_version other than "dreams/1"
///   validation_error     document invariants broken; violations attached
ModelDocument deserialize(std::string_view text);

/// Graphviz DOT. Node kind maps to shape and fill; polarity maps to edge
/// label "+" / "−" and solid / dashed style. Every edge carries its
/// link id as the `id` attribute.
std::string export_dot(const ModelDocument& model);

struct SvgOptions {
    double scale = 1.0;
    double margin = 40.0;
    double node_width = 120.0;
    double node_height = 48.0;
};

/// Maps layout coordinates to SVG canvas coordinates:
///   X = (x - min_x) * scale + margin + node_width / 2
///   Y = (y - min_y) * scale + margin + node_height / 2
/// where min_x / min_y range over node positions and route points.
struct CanvasTransform {
    double min_x = 0.0;
    double min_y = 0.0;
    double scale = 1.0;
    double offset_x = 0.0;
    double offset_y = 0.0;
    double width = 0.0;
    double height = 0.0;

    layout::Point apply(const layout::Point& p) const {
        return {(p.x - min_x) * scale + offset_x, (p.y - min_y) * scale + offset_y};
    }
};

CanvasTransform canvas_transform(const layout::LayeredLayout& layout, const SvgOptions& options = {});

/// SVG 1.1 drawing of `model` placed by `layout`. Throws
/// Error(validation_error) when the layout does not match the model.
std::string render_svg(const ModelDocument& model, const layout::LayeredLayout& layout,
                       const SvgOptions& options = {});

/// Layout interchange (CLI --json output, service layout responses,
/// --previous input for incremental layouts).
std::string serialize_layout(const layout::LayeredLayout& layout);
layout::LayeredLayout deserialize_layout(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(Timestamp ts);
std::optional<Timestamp> parse_timestamp(std::string_view text);

}  // namespace dreams::store
