#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dreams/model.hpp"

namespace dreams::layout {

// ---------------------------------------------------------------------------
// Index-based graph primitives. Vertices are 0..node_count-1.

struct Edge {
    std::size_t source = 0;
    std::size_t target = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Digraph {
    std::size_t node_count = 0;
    std::vector<Edge> edges;
};

/// Greedy Eades-Lin-Smyth feedback arc heuristic. Returns the (ascending)
/// indices of edges whose reversal makes `graph` acyclic. Self-loops are a
/// precondition violation and throw std::invalid_argument.
std::vector<std::size_t> remove_cycles(const Digraph& graph);

/// Copy of `graph` with the listed edges flipped.
Digraph reverse_edges(const Digraph& graph, std::span<const std::size_t> edge_indices);

/// Longest-path layering: layer(v) is the length of the longest path ending
/// at v, so sources sit on layer 0. Throws std::logic_error if `graph` has a
/// cycle (callers must run remove_cycles first).
std::vector<int> assign_layers(const Digraph& graph);

/// A layered graph in which every edge joins layer l to layer l + 1.
/// Vertices [0, original_count) are the input vertices; the rest are dummies.
struct ProperGraph {
    std::size_t original_count = 0;
    std::vector<int> layer_of;
    std::vector<Edge> edges;
    std::vector<std::size_t> edge_origin;            // input edge index per proper edge
    std::vector<std::vector<std::size_t>> chains;    // per input edge: vertex path, layer-increasing

    std::size_t vertex_count() const { return layer_of.size(); }
    int layer_count() const;
    bool is_dummy(std::size_t v) const { return v >= original_count; }
};

/// Splits every edge spanning k > 1 layers into a chain through k - 1 dummies.
ProperGraph insert_dummies(const Digraph& acyclic, std::span<const int> layers);

/// Per layer, the vertices from left to right (or top to bottom).
using LayerOrders = std::vector<std::vector<std::size_t>>;

/// Vertices grouped by layer in ascending index order.
LayerOrders index_orders(const ProperGraph& graph);

/// Exact number of pairwise edge crossings between adjacent layers, via
/// inversion counting. Edges sharing an endpoint never cross.
std::size_t count_crossings(const ProperGraph& graph, const LayerOrders& orders);

/// Layer-by-layer barycenter sweeps (down then up), each followed by
/// adjacent-exchange and sifting passes. Stops after `max_sweeps` sweeps or
/// two sweeps in a row without strict improvement. With `explore`, the same
/// search is repeated from depth-first orderings (walked from the top and
/// from the bottom layer) and from seeded random shuffles (4 to 32 of them,
/// fewer on larger graphs); a result replaces the best so far only if it has
/// strictly fewer crossings. Returns the best ordering seen, which is never
/// worse than `initial`. Equal barycenters keep their current relative
/// order.
LayerOrders minimize_crossings(const ProperGraph& graph, LayerOrders initial, int max_sweeps,
                               bool explore = true);

/// Moves only the `movable` vertices, each to the place in its layer where
/// it crosses least, until no move helps. Everything else keeps its order.
LayerOrders sift_vertices(const ProperGraph& graph, LayerOrders orders, const std::vector<bool>& movable);

// ---------------------------------------------------------------------------
// Model-level layout.

enum class Direction { top_down, left_right };

struct LayoutConfig {
    double layer_gap = 120.0;
    double node_gap = 160.0;
    Direction direction = Direction::top_down;
    int max_sweeps = 8;
    // true: seed orderings by node/link id; false: by document order.
    bool deterministic_seed_order = true;

    friend bool operator==(const LayoutConfig&, const LayoutConfig&) = default;
};

/// Throws Error(validation_error) when a gap is not positive or max_sweeps < 1.
void check_config(const LayoutConfig& config);

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Positions for every vertex (dummies included). Layers are `layer_gap`
/// apart; neighbours within a layer are at least `node_gap` apart. Each
/// layer starts evenly spaced and centred on the shared axis, then is pulled
/// towards the barycentres of its neighbours without changing the order.
std::vector<Point> assign_coordinates(const ProperGraph& graph, const LayerOrders& orders,
                                      const LayoutConfig& config);

struct LayeredLayout {
    std::map<std::string, int> layer_of;
    std::map<std::string, int> order_of;          // rank among the layer's model nodes
    std::map<std::string, Point> position_of;
    std::map<std::string, std::vector<Point>> routes;  // stored source -> target, through dummies
    std::set<std::string> reversed_links;
    std::size_t crossing_count = 0;

    friend bool operator==(const LayeredLayout&, const LayeredLayout&) = default;
};

/// Full pipeline: remove_cycles, assign_layers, insert_dummies,
/// minimize_crossings, assign_coordinates. Pure and deterministic. When
/// `previous` is given, surviving nodes and link bends seed the initial
/// orderings from their previous positions, newcomers are sifted into
/// place, and the survivors are only reordered if that yields fewer crossings
/// than the previous layout had, so an edit keeps the drawing recognisable.
LayeredLayout layout(const ModelDocument& model, const LayoutConfig& config = {},
                     const LayeredLayout* previous = nullptr);

/// Throws Error(validation_error) unless the layout places exactly the
/// model's nodes and routes exactly its links.
void check_matches(const ModelDocument& model, const LayeredLayout& layout);

}  // namespace dreams::layout
