#include <algorithm>
#include <random>
#include <stdexcept>
#include <utility>

#include "dreams/layout.hpp"

namespace dreams::layout {
namespace {

std::vector<std::size_t> positions_of(const ProperGraph& graph, const LayerOrders& orders) {
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> pos(graph.vertex_count(), unset);
    if (orders.size() != static_cast<std::size_t>(graph.layer_count())) {
        throw std::invalid_argument("orders do not match the graph's layer count");
    }
    for (std::size_t l = 0; l < orders.size(); ++l) {
        for (std::size_t i = 0; i < orders[l].size(); ++i) {
            auto v = orders[l][i];
            if (v >= pos.size() || pos[v] != unset || graph.layer_of[v] != static_cast<int>(l)) {
                throw std::invalid_argument("orders are not a partition of the graph's layers");
            }
            pos[v] = i;
        }
    }
    if (std::ranges::find(pos, unset) != pos.end()) {
        throw std::invalid_argument("orders omit a vertex");
    }
    return pos;
}

// Inversions among `pairs` sorted by (upper, lower): pairs i < j with
// lower[i] > lower[j]. Fenwick tree over lower positions.
std::size_t count_inversions(std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                             std::size_t lower_width) {
    std::ranges::sort(pairs);
    std::vector<std::size_t> tree(lower_width + 1, 0);
    std::size_t inserted = 0;
    std::size_t inversions = 0;
    for (const auto& [upper, lower] : pairs) {
        (void)upper;
        std::size_t not_greater = 0;
        for (std::size_t i = lower + 1; i > 0; i -= i & (~i + 1)) not_greater += tree[i];
        inversions += inserted - not_greater;
        for (std::size_t i = lower + 1; i <= lower_width; i += i & (~i + 1)) ++tree[i];
        ++inserted;
    }
    return inversions;
}

struct Adjacency {
    std::vector<std::vector<std::size_t>> up;    // neighbours on layer - 1
    std::vector<std::vector<std::size_t>> down;  // neighbours on layer + 1
};

Adjacency adjacency_of(const ProperGraph& graph) {
    Adjacency adj;
    adj.up.resize(graph.vertex_count());
    adj.down.resize(graph.vertex_count());
    for (const auto& [s, t] : graph.edges) {
        if (graph.layer_of.at(t) != graph.layer_of.at(s) + 1) {
            throw std::invalid_argument("graph is not proper: edge does not span exactly one layer");
        }
        adj.down[s].push_back(t);
        adj.up[t].push_back(s);
    }
    return adj;
}

void reorder_by_barycenter(std::vector<std::size_t>& layer,
                           const std::vector<std::vector<std::size_t>>& neighbours,
                           std::vector<std::size_t>& pos) {
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(layer.size());
    for (std::size_t i = 0; i < layer.size(); ++i) {
        const auto& adj = neighbours[layer[i]];
        double key = static_cast<double>(i);
        if (!adj.empty()) {
            double sum = 0.0;
            for (auto u : adj) sum += static_cast<double>(pos[u]);
            key = sum / static_cast<double>(adj.size());
        }
        keyed.emplace_back(key, layer[i]);
    }
    std::ranges::stable_sort(keyed, {}, &std::pair<double, std::size_t>::first);
    for (std::size_t i = 0; i < layer.size(); ++i) {
        layer[i] = keyed[i].second;
        pos[layer[i]] = i;
    }
}

// Crossings among edges of u and v (u placed left of v) toward one side.
std::size_t pair_crossings(const std::vector<std::size_t>& u_adj, const std::vector<std::size_t>& v_adj,
                           const std::vector<std::size_t>& pos) {
    std::size_t c = 0;
    for (auto a : u_adj) {
        for (auto b : v_adj) {
            if (pos[a] > pos[b]) ++c;
        }
    }
    return c;
}

bool adjacent_exchange(LayerOrders& orders, const Adjacency& adj, std::vector<std::size_t>& pos) {
    bool any = false;
    for (auto& layer : orders) {
        for (std::size_t i = 0; i + 1 < layer.size(); ++i) {
            auto u = layer[i];
            auto v = layer[i + 1];
            auto keep = pair_crossings(adj.up[u], adj.up[v], pos) + pair_crossings(adj.down[u], adj.down[v], pos);
            auto swap = pair_crossings(adj.up[v], adj.up[u], pos) + pair_crossings(adj.down[v], adj.down[u], pos);
            if (swap < keep) {
                std::swap(layer[i], layer[i + 1]);
                pos[u] = i + 1;
                pos[v] = i;
                any = true;
            }
        }
    }
    return any;
}

std::size_t crossings_if_left(std::size_t u, std::size_t v, const Adjacency& adj, const std::vector<std::size_t>& pos) {
    return pair_crossings(adj.up[u], adj.up[v], pos) + pair_crossings(adj.down[u], adj.down[v], pos);
}

// Moves each vertex to the position in its layer that minimises its own
// crossings, other vertices fixed. Only strict improvements move a vertex.
bool sift(LayerOrders& orders, const Adjacency& adj, std::vector<std::size_t>& pos,
          const std::vector<bool>* movable = nullptr) {
    bool any = false;
    for (auto& layer : orders) {
        const auto snapshot = layer;
        for (auto v : snapshot) {
            if (movable && !(*movable)[v]) continue;
            const auto from = pos[v];
            layer.erase(layer.begin() + static_cast<std::ptrdiff_t>(from));
            std::size_t cost = 0;
            for (auto w : layer) cost += crossings_if_left(v, w, adj, pos);
            std::size_t best_cost = cost;
            std::size_t best_at = 0;
            std::size_t current_cost = cost;
            for (std::size_t i = 0; i < layer.size(); ++i) {
                cost = cost - crossings_if_left(v, layer[i], adj, pos) + crossings_if_left(layer[i], v, adj, pos);
                if (i + 1 == from) current_cost = cost;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_at = i + 1;
                }
            }
            const auto to = best_cost < current_cost ? best_at : from;
            layer.insert(layer.begin() + static_cast<std::ptrdiff_t>(to), v);
            for (std::size_t i = 0; i < layer.size(); ++i) pos[layer[i]] = i;
            any = any || to != from;
        }
    }
    return any;
}

// Orders each layer by first visit in a depth-first walk over both edge
// directions. Roots are taken layer by layer in `orders`; neighbours are
// visited in their `orders` sequence.
LayerOrders depth_first_orders(const ProperGraph& graph, const Adjacency& adj, const LayerOrders& orders,
                               bool from_top) {
    const auto rank = positions_of(graph, orders);
    auto by_rank = [&](std::vector<std::size_t> vs) {
        std::ranges::sort(vs, {}, [&](std::size_t v) { return rank[v]; });
        return vs;
    };
    std::vector<std::vector<std::size_t>> neighbours(graph.vertex_count());
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
        const auto& first = from_top ? adj.down[v] : adj.up[v];
        const auto& second = from_top ? adj.up[v] : adj.down[v];
        neighbours[v] = by_rank(first);
        for (auto u : by_rank(second)) neighbours[v].push_back(u);
    }

    LayerOrders out(orders.size());
    std::vector<bool> seen(graph.vertex_count(), false);
    std::vector<std::pair<std::size_t, std::size_t>> stack;  // vertex, next neighbour
    auto visit = [&](std::size_t root) {
        seen[root] = true;
        out[static_cast<std::size_t>(graph.layer_of[root])].push_back(root);
        stack.emplace_back(root, 0);
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next == neighbours[v].size()) {
                stack.pop_back();
                continue;
            }
            const auto u = neighbours[v][next++];
            if (seen[u]) continue;
            seen[u] = true;
            out[static_cast<std::size_t>(graph.layer_of[u])].push_back(u);
            stack.emplace_back(u, 0);
        }
    };
    for (std::size_t i = 0; i < orders.size(); ++i) {
        for (auto v : orders[from_top ? i : orders.size() - 1 - i]) {
            if (!seen[v]) visit(v);
        }
    }
    return out;
}

LayerOrders improve(const ProperGraph& graph, const Adjacency& adj, LayerOrders initial, int max_sweeps) {
    auto best_count = count_crossings(graph, initial);
    LayerOrders best = initial;
    LayerOrders current = std::move(initial);
    auto pos = positions_of(graph, current);
    int stalled = 0;

    for (int sweep = 0; sweep < max_sweeps && best_count > 0; ++sweep) {
        for (std::size_t l = 1; l < current.size(); ++l) reorder_by_barycenter(current[l], adj.up, pos);
        for (std::size_t l = current.size(); l-- > 1;) reorder_by_barycenter(current[l - 1], adj.down, pos);
        for (int pass = 0; pass < 16 && adjacent_exchange(current, adj, pos); ++pass) {
        }
        for (int pass = 0; pass < 16 && sift(current, adj, pos); ++pass) {
        }

        auto count = count_crossings(graph, current);
        if (count < best_count) {
            best_count = count;
            best = current;
            stalled = 0;
        } else if (++stalled == 2) {
            break;
        }
    }
    return best;
}

}  // namespace

std::size_t count_crossings(const ProperGraph& graph, const LayerOrders& orders) {
    auto pos = positions_of(graph, orders);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_layer(orders.size());
    for (const auto& [s, t] : graph.edges) {
        auto l = static_cast<std::size_t>(graph.layer_of.at(s));
        if (graph.layer_of.at(t) != graph.layer_of.at(s) + 1) {
            throw std::invalid_argument("graph is not proper: edge does not span exactly one layer");
        }
        by_layer[l].emplace_back(pos[s], pos[t]);
    }
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < orders.size(); ++l) {
        total += count_inversions(by_layer[l], orders[l + 1].size());
    }
    return total;
}

LayerOrders sift_vertices(const ProperGraph& graph, LayerOrders orders, const std::vector<bool>& movable) {
    if (movable.size() != graph.vertex_count()) throw std::invalid_argument("movable mask does not match the graph");
    const auto adj = adjacency_of(graph);
    auto pos = positions_of(graph, orders);
    for (int pass = 0; pass < 16 && sift(orders, adj, pos, &movable); ++pass) {
    }
    return orders;
}

LayerOrders minimize_crossings(const ProperGraph& graph, LayerOrders initial, int max_sweeps, bool explore) {
    const auto adj = adjacency_of(graph);
    auto best = improve(graph, adj, std::move(initial), max_sweeps);
    auto best_count = count_crossings(graph, best);
    if (!explore) return best;
    for (bool from_top : {true, false}) {
        if (best_count == 0) break;
        auto candidate = improve(graph, adj, depth_first_orders(graph, adj, best, from_top), max_sweeps);
        const auto count = count_crossings(graph, candidate);
        if (count < best_count) {
            best_count = count;
            best = std::move(candidate);
        }
    }
    // fixed seed: same graph, same result
    std::mt19937_64 rng(graph.vertex_count() * 1000003u + graph.edges.size());
    const auto size = graph.vertex_count() + graph.edges.size();
    const int restarts = static_cast<int>(std::clamp<std::size_t>(4096 / (size + 1), 4, 32));
    for (int r = 0; r < restarts && best_count > 0; ++r) {
        auto start = best;
        for (auto& layer : start) std::shuffle(layer.begin(), layer.end(), rng);
        auto candidate = improve(graph, adj, std::move(start), max_sweeps);
        const auto count = count_crossings(graph, candidate);
        if (count < best_count) {
            best_count = count;
            best = std::move(candidate);
        }
    }
    return best;
}

}  // namespace dreams::layout
