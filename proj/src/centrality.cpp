#include "scidyn/centrality.hpp"

#include <cmath>
#include <limits>
#include <functional>
#include <queue>

#include "scidyn/error.hpp"

namespace scidyn {

namespace {

constexpr double tie_epsilon = 1e-12;

struct Adjacency {
    std::vector<NodeId> nodes;
    std::vector<std::vector<std::pair<std::size_t, double>>> out;
};

Adjacency build_adjacency(const GraphSlice& slice, bool weighted, DistanceTransform transform) {
    Adjacency adj;
    adj.nodes = slice.present;
    std::map<NodeId, std::size_t> local;
    for (std::size_t k = 0; k < adj.nodes.size(); ++k) local.emplace(adj.nodes[k], k);
    adj.out.resize(adj.nodes.size());
    for (const auto& edge : slice.edges) {
        const double length = weighted ? edge_dissimilarity(edge.weight, transform) : 1.0;
        const std::size_t a = local.at(edge.source);
        const std::size_t b = local.at(edge.target);
        adj.out[a].emplace_back(b, length);
        adj.out[b].emplace_back(a, length);
    }
    return adj;
}

/// Single-source shortest paths recording predecessors and path counts;
/// returns vertices in non-decreasing distance order.
std::vector<std::size_t> single_source(const Adjacency& adj, std::size_t source, bool weighted,
                                       std::vector<double>& sigma,
                                       std::vector<std::vector<std::size_t>>& preds) {
    const std::size_t n = adj.nodes.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<bool> settled(n, false);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    for (auto& p : preds) p.clear();
    std::vector<std::size_t> order;

    dist[source] = 0.0;
    sigma[source] = 1.0;
    if (!weighted) {
        std::queue<std::size_t> queue;
        queue.push(source);
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop();
            order.push_back(v);
            for (auto [w, length] : adj.out[v]) {
                if (std::isinf(dist[w])) {
                    dist[w] = dist[v] + 1.0;
                    queue.push(w);
                }
                if (dist[w] == dist[v] + 1.0) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        return order;
    }

    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (settled[v] || d > dist[v]) continue;
        settled[v] = true;
        order.push_back(v);
        for (auto [w, length] : adj.out[v]) {
            if (settled[w]) continue;
            const double candidate = dist[v] + length;
            const double scale = std::max(std::abs(candidate), std::abs(dist[w]));
            if (!std::isinf(dist[w]) && std::abs(candidate - dist[w]) <= tie_epsilon * scale) {
                sigma[w] += sigma[v];
                preds[w].push_back(v);
            } else if (candidate < dist[w]) {
                dist[w] = candidate;
                sigma[w] = sigma[v];
                preds[w].assign(1, v);
                queue.emplace(candidate, w);
            }
        }
    }
    return order;
}

}  // namespace

NodeValues betweenness_centrality(const GraphSlice& slice, bool weighted, DistanceTransform transform) {
    if (slice.present.empty()) throw Error(ErrorCode::EmptySlice, "slice " + slice.time + " has no nodes");
    const Adjacency adj = build_adjacency(slice, weighted, transform);
    const std::size_t n = adj.nodes.size();

    std::vector<double> score(n, 0.0);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<std::vector<std::size_t>> preds(n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto order = single_source(adj, s, weighted, sigma, preds);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::size_t w = *it;
            for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) score[w] += delta[w];
        }
    }

    NodeValues out;
    // Each unordered pair was accumulated from both endpoints.
    for (std::size_t k = 0; k < n; ++k) out.emplace(adj.nodes[k], score[k] / 2.0);
    return out;
}

NodeValues normalize_betweenness(const NodeValues& raw) {
    const double n = static_cast<double>(raw.size());
    const double pairs = (n - 1.0) * (n - 2.0) / 2.0;
    NodeValues out;
    for (const auto& [node, value] : raw) out.emplace(node, pairs > 0.0 ? value / pairs : 0.0);
    return out;
}

CentralitySeries centrality_series(const TimeSlicedGraph& graph, double spike_threshold, bool weighted,
                                   DistanceTransform transform) {
    if (graph.slice_count() == 0) throw Error(ErrorCode::EmptySeries, "graph has no slices");
    CentralitySeries series;
    for (std::size_t t = 0; t < graph.slice_count(); ++t) {
        const auto& slice = graph.slice(t);
        try {
            series.raw.push_back(betweenness_centrality(slice, weighted, transform));
        } catch (const Error& e) {
            throw Error(e.code(), "slice " + slice.time + ": " + e.what());
        }
        series.times.push_back(slice.time);
        series.normalized.push_back(normalize_betweenness(series.raw.back()));
        if (t == 0) continue;
        const auto& before = series.normalized[t - 1];
        for (const auto& [node, value] : series.normalized[t]) {
            auto it = before.find(node);
            const double rise = value - (it == before.end() ? 0.0 : it->second);
            if (rise > spike_threshold) series.flags.push_back(CentralityFlag{t, node, rise});
        }
    }
    return series;
}

}  // namespace scidyn
