#include <algorithm>
#include <optional>
#include <unordered_map>

#include "dreams/layout.hpp"

namespace dreams::layout {
namespace {

double along_axis(const Point& p, Direction direction) {
    return direction == Direction::top_down ? p.x : p.y;
}

struct SeedKey {
    int group;        // 0 = placed from previous layout or neighbours, 1 = no hint
    double along;
    std::size_t index;

    auto operator<=>(const SeedKey&) const = default;
};

// Builds the initial per-layer orderings top-down. Fresh layouts order each
// layer by the barycentre of already placed upper neighbours. Incremental
// layouts use the previous in-layer coordinate of surviving nodes and link
// bends, and drop newcomers at the mean coordinate of their upper neighbours.
LayerOrders seed_orders(const ProperGraph& graph, const std::vector<std::optional<double>>& hints,
                        bool incremental) {
    const auto n = graph.vertex_count();
    std::vector<std::vector<std::size_t>> up(n);
    for (const auto& [s, t] : graph.edges) up[t].push_back(s);

    LayerOrders orders = index_orders(graph);
    std::vector<double> key(n, 0.0);
    for (auto& layer : orders) {
        std::vector<std::pair<SeedKey, std::size_t>> keyed;
        keyed.reserve(layer.size());
        for (auto v : layer) {
            SeedKey k{1, 0.0, v};
            if (incremental && hints[v]) {
                k = {0, *hints[v], v};
            } else if (!up[v].empty()) {
                double sum = 0.0;
                for (auto u : up[v]) sum += key[u];
                k = {0, sum / static_cast<double>(up[v].size()), v};
            }
            keyed.emplace_back(k, v);
        }
        std::ranges::sort(keyed);
        double last = 0.0;
        for (std::size_t i = 0; i < layer.size(); ++i) {
            const auto& [k, v] = keyed[i];
            layer[i] = v;
            if (!incremental) {
                key[v] = static_cast<double>(i);
            } else {
                // unhinted newcomers queue up after the last placed vertex
                key[v] = k.group == 0 ? k.along : last + 1.0;
                last = key[v];
            }
        }
    }
    return orders;
}

}  // namespace

void check_matches(const ModelDocument& model, const LayeredLayout& layout) {
    if (layout.position_of.size() != model.nodes.size() || layout.layer_of.size() != model.nodes.size() ||
        layout.order_of.size() != model.nodes.size()) {
        throw Error(ErrorCode::validation_error, "layout does not cover the model's nodes");
    }
    for (const auto& node : model.nodes) {
        if (!layout.position_of.contains(node.id) || !layout.layer_of.contains(node.id) ||
            !layout.order_of.contains(node.id)) {
            throw Error(ErrorCode::validation_error, "layout has no position for node", node.id);
        }
    }
    if (layout.routes.size() != model.links.size()) {
        throw Error(ErrorCode::validation_error, "layout does not cover the model's links");
    }
    for (const auto& link : model.links) {
        if (!layout.routes.contains(link.id)) {
            throw Error(ErrorCode::validation_error, "layout has no route for link", link.id);
        }
    }
}

LayeredLayout layout(const ModelDocument& model, const LayoutConfig& config, const LayeredLayout* previous) {
    check_config(config);

    std::vector<const FactorNode*> nodes;
    for (const auto& node : model.nodes) nodes.push_back(&node);
    std::vector<const CausalLink*> links;
    for (const auto& link : model.links) links.push_back(&link);
    if (config.deterministic_seed_order) {
        std::ranges::sort(nodes, {}, &FactorNode::id);
        std::ranges::sort(links, {}, &CausalLink::id);
    }

    std::unordered_map<std::string_view, std::size_t> index_of;
    for (std::size_t i = 0; i < nodes.size(); ++i) index_of.emplace(nodes[i]->id, i);

    Digraph graph{nodes.size(), {}};
    for (const auto* link : links) {
        auto s = index_of.find(link->source);
        auto t = index_of.find(link->target);
        if (s == index_of.end() || t == index_of.end()) {
            throw Error(ErrorCode::validation_error, "link endpoint does not exist", link->id);
        }
        graph.edges.push_back({s->second, t->second});
    }

    const auto reversed = remove_cycles(graph);
    const auto acyclic = reverse_edges(graph, reversed);
    const auto layers = assign_layers(acyclic);
    const auto proper = insert_dummies(acyclic, layers);

    std::vector<std::optional<double>> hints(proper.vertex_count());
    if (previous) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            auto it = previous->position_of.find(nodes[i]->id);
            if (it != previous->position_of.end()) hints[i] = along_axis(it->second, config.direction);
        }
        for (std::size_t e = 0; e < links.size(); ++e) {
            const auto& chain = proper.chains[e];
            if (chain.size() <= 2) continue;
            auto route = previous->routes.find(links[e]->id);
            auto prev_src = previous->layer_of.find(links[e]->source);
            auto prev_tgt = previous->layer_of.find(links[e]->target);
            if (route == previous->routes.end() || prev_src == previous->layer_of.end() ||
                prev_tgt == previous->layer_of.end()) {
                continue;
            }
            // route point j sits on layer src + j*step of the previous drawing
            const int step = prev_tgt->second >= prev_src->second ? 1 : -1;
            const auto& points = route->second;
            for (std::size_t k = 1; k + 1 < chain.size(); ++k) {
                const int l = proper.layer_of[chain[k]];
                const int j = (l - prev_src->second) * step;
                if (j > 0 && static_cast<std::size_t>(j) + 1 < points.size()) {
                    hints[chain[k]] = along_axis(points[static_cast<std::size_t>(j)], config.direction);
                }
            }
        }
    }

    auto orders = seed_orders(proper, hints, previous != nullptr);
    if (previous) {
        // newcomers first find their place among the surviving order
        std::vector<bool> fresh(proper.vertex_count());
        for (std::size_t v = 0; v < fresh.size(); ++v) fresh[v] = !hints[v];
        orders = sift_vertices(proper, std::move(orders), fresh);
        // reshuffling survivors must beat the previous drawing, not just the seed
        auto minimized = minimize_crossings(proper, orders, config.max_sweeps, false);
        if (count_crossings(proper, minimized) < previous->crossing_count) orders = std::move(minimized);
    } else {
        orders = minimize_crossings(proper, std::move(orders), config.max_sweeps);
    }
    const auto points = assign_coordinates(proper, orders, config);

    LayeredLayout out;
    out.crossing_count = count_crossings(proper, orders);
    for (const auto& layer : orders) {
        int rank = 0;
        for (auto v : layer) {
            if (proper.is_dummy(v)) continue;
            const auto& id = nodes[v]->id;
            out.layer_of[id] = proper.layer_of[v];
            out.order_of[id] = rank++;
            out.position_of[id] = points[v];
        }
    }
    std::vector<bool> is_reversed(links.size(), false);
    for (auto e : reversed) is_reversed[e] = true;
    for (std::size_t e = 0; e < links.size(); ++e) {
        std::vector<Point> route;
        for (auto v : proper.chains[e]) route.push_back(points[v]);
        if (is_reversed[e]) {
            std::ranges::reverse(route);
            out.reversed_links.insert(links[e]->id);
        }
        out.routes[links[e]->id] = std::move(route);
    }
    return out;
}

}  // namespace dreams::layout
