#pragma once

// Test helpers and independent oracles. Nothing here calls into the library
// code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "scidyn/error.hpp"
#include "scidyn/graph.hpp"
#include "scidyn/grouping.hpp"
#include "scidyn/tensor.hpp"

namespace testing {

using scidyn::Axis;
using scidyn::NodeId;

// ---------------------------------------------------------------- sampling

/// Random probability vector. When `sparse`, roughly a quarter of the cells
/// are zero (at least one cell stays positive).
inline std::vector<double> random_probabilities(std::mt19937_64& rng, std::size_t n, bool sparse = false) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p(n);
    double sum = 0.0;
    for (auto& v : p) {
        v = unit(rng);
        if (sparse && unit(rng) < 0.25) v = 0.0;
        sum += v;
    }
    if (sum == 0.0) {
        p[0] = 1.0;
        sum = 1.0;
    }
    for (auto& v : p) v /= sum;
    return p;
}

inline scidyn::ProbabilityDistribution distribution(const std::vector<Axis>& axes, std::vector<double> p) {
    return scidyn::ProbabilityDistribution::from_probabilities(axes, std::move(p));
}

inline Axis axis(const std::string& name, std::size_t size, const std::string& prefix = "c") {
    return Axis{name, scidyn::numbered_labels(size, prefix)};
}

/// Random partition of `categories` into between 1 and categories.size() groups.
inline std::vector<std::vector<std::string>> random_partition(std::mt19937_64& rng,
                                                              std::vector<std::string> categories) {
    std::shuffle(categories.begin(), categories.end(), rng);
    std::uniform_int_distribution<std::size_t> count(1, categories.size());
    const std::size_t groups = count(rng);
    std::vector<std::vector<std::string>> out(groups);
    for (std::size_t i = 0; i < groups; ++i) out[i].push_back(categories[i]);
    std::uniform_int_distribution<std::size_t> pick(0, groups - 1);
    for (std::size_t i = groups; i < categories.size(); ++i) out[pick(rng)].push_back(categories[i]);
    return out;
}

inline scidyn::GroupingTree random_flat_grouping(std::mt19937_64& rng, const Axis& ax) {
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    auto parts = random_partition(rng, ax.categories);
    for (std::size_t g = 0; g < parts.size(); ++g) groups.emplace_back("g" + std::to_string(g), parts[g]);
    return scidyn::GroupingTree::flat(ax.name, groups);
}

inline scidyn::GroupNode random_subtree(std::mt19937_64& rng, std::vector<std::string> categories,
                                        const std::string& label, std::size_t depth) {
    scidyn::GroupNode node;
    node.label = label;
    if (depth == 0 || categories.size() < 2) {
        node.categories = std::move(categories);
        return node;
    }
    auto parts = random_partition(rng, categories);
    if (parts.size() == 1) {
        node.categories = std::move(parts[0]);
        return node;
    }
    for (std::size_t g = 0; g < parts.size(); ++g) {
        node.children.push_back(random_subtree(rng, parts[g], label + std::to_string(g), depth - 1));
    }
    return node;
}

/// Random hierarchy of depth up to `max_depth` (leaves may sit at different depths).
inline scidyn::GroupingTree random_tree(std::mt19937_64& rng, const Axis& ax, std::size_t max_depth) {
    scidyn::GroupNode root;
    root.label.clear();
    auto parts = random_partition(rng, ax.categories);
    for (std::size_t g = 0; g < parts.size(); ++g) {
        root.children.push_back(random_subtree(rng, parts[g], "g" + std::to_string(g), max_depth - 1));
    }
    return scidyn::GroupingTree(ax.name, root);
}

// ---------------------------------------------------------------- entropy oracles

inline double h(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) {
        if (v > 0.0) s -= v * std::log2(v);
    }
    return s;
}

inline double kl(const std::vector<double>& q, const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] > 0.0) s += q[i] * std::log2(q[i] / p[i]);
    }
    return s;
}

/// Row-major n0 x n1 x n2 joint. Sums p log2(p_xy p_xz p_yz / (p_x p_y p_z p_xyz))
/// cell by cell, which expands to the seven-term interaction information.
inline double interaction_oracle(const std::vector<double>& p, std::size_t n0, std::size_t n1, std::size_t n2) {
    std::vector<double> px(n0, 0.0), py(n1, 0.0), pz(n2, 0.0);
    std::vector<double> pxy(n0 * n1, 0.0), pxz(n0 * n2, 0.0), pyz(n1 * n2, 0.0);
    for (std::size_t x = 0; x < n0; ++x) {
        for (std::size_t y = 0; y < n1; ++y) {
            for (std::size_t z = 0; z < n2; ++z) {
                const double v = p[(x * n1 + y) * n2 + z];
                px[x] += v;
                py[y] += v;
                pz[z] += v;
                pxy[x * n1 + y] += v;
                pxz[x * n2 + z] += v;
                pyz[y * n2 + z] += v;
            }
        }
    }
    double s = 0.0;
    for (std::size_t x = 0; x < n0; ++x) {
        for (std::size_t y = 0; y < n1; ++y) {
            for (std::size_t z = 0; z < n2; ++z) {
                const double v = p[(x * n1 + y) * n2 + z];
                if (v <= 0.0) continue;
                s += v * std::log2((pxy[x * n1 + y] * pxz[x * n2 + z] * pyz[y * n2 + z]) /
                                   (px[x] * py[y] * pz[z] * v));
            }
        }
    }
    return s;
}

// ---------------------------------------------------------------- graphs

inline scidyn::GraphSlice make_slice(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                                     const std::vector<double>& weights = {}, const std::string& time = "t") {
    scidyn::GraphSlice slice;
    slice.time = time;
    for (NodeId i = 0; i < n; ++i) slice.present.push_back(i);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        slice.edges.push_back(scidyn::Edge{edges[e].first, edges[e].second, weights.empty() ? 1.0 : weights[e]});
    }
    return slice;
}

inline std::vector<scidyn::Node> make_nodes(const std::vector<std::string>& ids) {
    std::vector<scidyn::Node> nodes;
    for (const auto& id : ids) nodes.push_back(scidyn::Node{id, id});
    return nodes;
}

/// Betweenness by exhaustive enumeration of every simple path between every
/// unordered pair. Lengths are the given edge lengths; ties use a relative
/// tolerance of 1e-12.
inline std::vector<double> brute_force_betweenness(std::size_t n,
                                                   const std::vector<std::pair<NodeId, NodeId>>& edges,
                                                   const std::vector<double>& lengths = {}) {
    std::vector<std::vector<std::pair<NodeId, double>>> adj(n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const double len = lengths.empty() ? 1.0 : lengths[e];
        adj[edges[e].first].emplace_back(edges[e].second, len);
        adj[edges[e].second].emplace_back(edges[e].first, len);
    }
    std::vector<double> out(n, 0.0);
    for (NodeId s = 0; s < n; ++s) {
        for (NodeId t = s + 1; t < n; ++t) {
            std::vector<std::pair<double, std::vector<NodeId>>> paths;
            std::vector<NodeId> stack{s};
            std::vector<bool> on_path(n, false);
            on_path[s] = true;
            std::function<void(NodeId, double)> walk = [&](NodeId v, double len) {
                if (v == t) {
                    paths.emplace_back(len, stack);
                    return;
                }
                for (auto [w, l] : adj[v]) {
                    if (on_path[w]) continue;
                    on_path[w] = true;
                    stack.push_back(w);
                    walk(w, len + l);
                    stack.pop_back();
                    on_path[w] = false;
                }
            };
            walk(s, 0.0);
            if (paths.empty()) continue;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& [len, path] : paths) best = std::min(best, len);
            std::vector<double> through(n, 0.0);
            double count = 0.0;
            for (const auto& [len, path] : paths) {
                if (len > best * (1.0 + 1e-12)) continue;
                count += 1.0;
                for (std::size_t k = 1; k + 1 < path.size(); ++k) through[path[k]] += 1.0;
            }
            for (NodeId v = 0; v < n; ++v) out[v] += through[v] / count;
        }
    }
    return out;
}

inline bool connected(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::vector<NodeId> parent(n);
    for (NodeId i = 0; i < n; ++i) parent[i] = i;
    std::function<NodeId(NodeId)> find = [&](NodeId x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::size_t components = n;
    for (auto [a, b] : edges) {
        const NodeId ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components <= 1;
}

inline std::vector<std::pair<NodeId, NodeId>> random_edges(std::mt19937_64& rng, std::size_t n, double density) {
    std::bernoulli_distribution keep(density);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            if (keep(rng)) edges.emplace_back(a, b);
        }
    }
    return edges;
}

/// Two 5-cliques A = a0..a4 and C = c0..c4 plus a broker B. At t1 B hangs off
/// a0 only, at t2 B is linked to every clique node, at t3 the matching edges
/// a_i - c_i are added.
inline scidyn::TimeSlicedGraph broker_scenario() {
    std::vector<std::string> ids{"B"};
    for (int i = 0; i < 5; ++i) ids.push_back("a" + std::to_string(i));
    for (int i = 0; i < 5; ++i) ids.push_back("c" + std::to_string(i));
    auto nodes = make_nodes(ids);
    auto a = [](int i) { return static_cast<NodeId>(1 + i); };
    auto c = [](int i) { return static_cast<NodeId>(6 + i); };
    std::vector<std::pair<NodeId, NodeId>> cliques;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            cliques.emplace_back(a(i), a(j));
            cliques.emplace_back(c(i), c(j));
        }
    }
    auto t1 = cliques;
    t1.emplace_back(0, a(0));
    auto t2 = cliques;
    for (int i = 0; i < 5; ++i) {
        t2.emplace_back(0, a(i));
        t2.emplace_back(0, c(i));
    }
    auto t3 = t2;
    for (int i = 0; i < 5; ++i) t3.emplace_back(a(i), c(i));
    return scidyn::TimeSlicedGraph(nodes, {make_slice(11, t1, {}, "t1"), make_slice(11, t2, {}, "t2"),
                                           make_slice(11, t3, {}, "t3")});
}

inline std::vector<std::pair<NodeId, NodeId>> slice_pairs(const scidyn::GraphSlice& slice) {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (const auto& e : slice.edges) out.emplace_back(e.source, e.target);
    return out;
}

// ---------------------------------------------------------------- geometry

/// Full Euclidean distance matrix of random points in the unit square scaled by `scale`.
inline std::vector<double> planar_distances(std::mt19937_64& rng, std::size_t n, double scale = 10.0) {
    std::uniform_real_distribution<double> unit(0.0, scale);
    std::vector<std::pair<double, double>> pts(n);
    for (auto& p : pts) p = {unit(rng), unit(rng)};
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) d[i * n + j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
        }
    }
    return d;
}

inline std::vector<double> random_dissimilarities(std::mt19937_64& rng, std::size_t n, double lo = 0.5,
                                                  double hi = 3.0) {
    std::uniform_real_distribution<double> unit(lo, hi);
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = unit(rng);
    }
    return d;
}

inline std::vector<NodeId> iota_nodes(std::size_t n) {
    std::vector<NodeId> out(n);
    for (NodeId i = 0; i < n; ++i) out[i] = i;
    return out;
}

/// Code of the scidyn::Error thrown by `fn`, or nullopt when nothing is thrown.
template <typename Fn>
std::optional<scidyn::ErrorCode> error_code(Fn&& fn) {
    try {
        fn();
    } catch (const scidyn::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

/// Line reported by the LineError thrown by `fn`, or 0.
template <typename Fn>
std::size_t error_line(Fn&& fn) {
    try {
        fn();
    } catch (const scidyn::LineError& e) {
        return e.line();
    } catch (const scidyn::Error&) {
    }
    return 0;
}

}  // namespace testing
