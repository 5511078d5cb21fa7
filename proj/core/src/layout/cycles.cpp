#include <algorithm>
#include <deque>
#include <stdexcept>
#include <vector>

#include "dreams/layout.hpp"

namespace dreams::layout {

std::vector<std::size_t> remove_cycles(const Digraph& graph) {
    const std::size_t n = graph.node_count;
    std::vector<std::vector<std::size_t>> out_edges(n), in_edges(n);
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const auto [s, t] = graph.edges[e];
        if (s >= n || t >= n) throw std::invalid_argument("edge endpoint out of range");
        if (s == t) throw std::invalid_argument("self-loop cannot be removed by reversal");
        out_edges[s].push_back(e);
        in_edges[t].push_back(e);
    }

    std::vector<long> out_degree(n), in_degree(n);
    for (std::size_t v = 0; v < n; ++v) {
        out_degree[v] = static_cast<long>(out_edges[v].size());
        in_degree[v] = static_cast<long>(in_edges[v].size());
    }

    std::vector<bool> removed(n, false);
    std::size_t remaining = n;
    std::vector<std::size_t> head;   // grows rightwards
    std::deque<std::size_t> tail;    // grows leftwards

    auto take = [&](std::size_t v) {
        removed[v] = true;
        --remaining;
        for (auto e : out_edges[v]) {
            auto t = graph.edges[e].target;
            if (!removed[t]) --in_degree[t];
        }
        for (auto e : in_edges[v]) {
            auto s = graph.edges[e].source;
            if (!removed[s]) --out_degree[s];
        }
    };

    while (remaining > 0) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (!removed[v] && out_degree[v] == 0) {
                    take(v);
                    tail.push_front(v);
                    changed = true;
                }
            }
        }
        changed = true;
        while (changed) {
            changed = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (!removed[v] && in_degree[v] == 0) {
                    take(v);
                    head.push_back(v);
                    changed = true;
                }
            }
        }
        if (remaining == 0) break;

        std::size_t best = n;
        long best_delta = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (removed[v]) continue;
            long delta = out_degree[v] - in_degree[v];
            if (best == n || delta > best_delta) {
                best = v;
                best_delta = delta;
            }
        }
        take(best);
        head.push_back(best);
    }

    std::vector<std::size_t> position(n);
    std::size_t rank = 0;
    for (auto v : head) position[v] = rank++;
    for (auto v : tail) position[v] = rank++;

    std::vector<std::size_t> reversed;
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        if (position[graph.edges[e].source] > position[graph.edges[e].target]) reversed.push_back(e);
    }
    return reversed;
}

Digraph reverse_edges(const Digraph& graph, std::span<const std::size_t> edge_indices) {
    Digraph out = graph;
    for (auto e : edge_indices) std::swap(out.edges.at(e).source, out.edges.at(e).target);
    return out;
}

}  // namespace dreams::layout
