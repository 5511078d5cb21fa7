#include <algorithm>
#include <limits>

#include "dreams/layout.hpp"

namespace dreams::layout {
namespace {

constexpr int kRefinementRounds = 4;

// Least-squares placement of an ordered row: minimise sum (x_i - desired_i)^2
// subject to x_{i+1} - x_i >= gap. Substituting y_i = x_i - i*gap turns the
// gap constraint into monotonicity, solved by pool-adjacent-violators.
std::vector<double> place_row(const std::vector<double>& desired, double gap) {
    struct Block {
        double sum;
        std::size_t size;
        double mean() const { return sum / static_cast<double>(size); }
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < desired.size(); ++i) {
        blocks.push_back({desired[i] - static_cast<double>(i) * gap, 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
            auto last = blocks.back();
            blocks.pop_back();
            blocks.back().sum += last.sum;
            blocks.back().size += last.size;
        }
    }
    std::vector<double> x;
    x.reserve(desired.size());
    for (const auto& block : blocks) {
        for (std::size_t j = 0; j < block.size; ++j) {
            x.push_back(block.mean() + static_cast<double>(x.size()) * gap);
        }
    }
    return x;
}

void refine_layer(const std::vector<std::size_t>& layer,
                  const std::vector<std::vector<std::size_t>>& neighbours,
                  std::vector<double>& along, double gap) {
    std::vector<double> desired;
    desired.reserve(layer.size());
    for (auto v : layer) {
        const auto& adj = neighbours[v];
        if (adj.empty()) {
            desired.push_back(along[v]);
            continue;
        }
        double sum = 0.0;
        for (auto u : adj) sum += along[u];
        desired.push_back(sum / static_cast<double>(adj.size()));
    }
    auto placed = place_row(desired, gap);
    for (std::size_t i = 0; i < layer.size(); ++i) along[layer[i]] = placed[i];
}

}  // namespace

void check_config(const LayoutConfig& config) {
    if (!(config.layer_gap > 0.0) || !(config.node_gap > 0.0)) {
        throw Error(ErrorCode::validation_error, "layout gaps must be positive");
    }
    if (config.max_sweeps < 1) throw Error(ErrorCode::validation_error, "max_sweeps must be at least 1");
}

std::vector<Point> assign_coordinates(const ProperGraph& graph, const LayerOrders& orders,
                                      const LayoutConfig& config) {
    check_config(config);
    const auto n = graph.vertex_count();
    std::vector<std::vector<std::size_t>> up(n), down(n);
    for (const auto& [s, t] : graph.edges) {
        down[s].push_back(t);
        up[t].push_back(s);
    }

    std::vector<double> along(n, 0.0);
    for (const auto& layer : orders) {
        const double half = static_cast<double>(layer.size() - (layer.empty() ? 0 : 1)) / 2.0;
        for (std::size_t i = 0; i < layer.size(); ++i) {
            along[layer[i]] = (static_cast<double>(i) - half) * config.node_gap;
        }
    }

    for (int round = 0; round < kRefinementRounds; ++round) {
        for (std::size_t l = 1; l < orders.size(); ++l) refine_layer(orders[l], up, along, config.node_gap);
        for (std::size_t l = orders.size(); l-- > 1;) refine_layer(orders[l - 1], down, along, config.node_gap);
    }

    if (n > 0) {
        auto [lo, hi] = std::ranges::minmax_element(along);
        const double centre = (*lo + *hi) / 2.0;
        for (auto& a : along) {
            a -= centre;
            if (a == 0.0) a = 0.0;  // no negative zero in output
        }
    }

    std::vector<Point> points(n);
    for (std::size_t v = 0; v < n; ++v) {
        const double across = static_cast<double>(graph.layer_of[v]) * config.layer_gap;
        points[v] = config.direction == Direction::top_down ? Point{along[v], across}
                                                            : Point{across, along[v]};
    }
    return points;
}

}  // namespace dreams::layout
