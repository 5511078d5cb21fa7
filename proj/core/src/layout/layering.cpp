#include <algorithm>
#include <queue>
#include <stdexcept>

#include "dreams/layout.hpp"

namespace dreams::layout {

std::vector<int> assign_layers(const Digraph& graph) {
    const std::size_t n = graph.node_count;
    std::vector<std::vector<std::size_t>> successors(n);
    std::vector<std::size_t> pending(n, 0);
    for (const auto& [s, t] : graph.edges) {
        successors.at(s).push_back(t);
        ++pending.at(t);
    }

    std::vector<int> layer(n, 0);
    std::queue<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (pending[v] == 0) ready.push(v);
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        auto v = ready.front();
        ready.pop();
        ++visited;
        for (auto t : successors[v]) {
            layer[t] = std::max(layer[t], layer[v] + 1);
            if (--pending[t] == 0) ready.push(t);
        }
    }
    if (visited != n) throw std::logic_error("assign_layers: input graph contains a cycle");
    return layer;
}

int ProperGraph::layer_count() const {
    if (layer_of.empty()) return 0;
    return *std::ranges::max_element(layer_of) + 1;
}

ProperGraph insert_dummies(const Digraph& acyclic, std::span<const int> layers) {
    if (layers.size() != acyclic.node_count) throw std::invalid_argument("layer map size mismatch");
    ProperGraph out;
    out.original_count = acyclic.node_count;
    out.layer_of.assign(layers.begin(), layers.end());
    out.chains.reserve(acyclic.edges.size());

    for (std::size_t e = 0; e < acyclic.edges.size(); ++e) {
        const auto [s, t] = acyclic.edges[e];
        const int from = out.layer_of.at(s);
        const int to = out.layer_of.at(t);
        if (to <= from) throw std::invalid_argument("edge does not increase layer");

        std::vector<std::size_t> chain{s};
        for (int l = from + 1; l < to; ++l) {
            chain.push_back(out.layer_of.size());
            out.layer_of.push_back(l);
        }
        chain.push_back(t);
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            out.edges.push_back({chain[i], chain[i + 1]});
            out.edge_origin.push_back(e);
        }
        out.chains.push_back(std::move(chain));
    }
    return out;
}

LayerOrders index_orders(const ProperGraph& graph) {
    LayerOrders orders(static_cast<std::size_t>(graph.layer_count()));
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
        orders[static_cast<std::size_t>(graph.layer_of[v])].push_back(v);
    }
    return orders;
}

}  // namespace dreams::layout
