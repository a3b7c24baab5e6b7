#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scidyn/graph.hpp"

namespace scidyn {

/// Coordinates for a set of nodes, `dims` values per node, row-major.
struct Layout {
    std::size_t dims = 2;
    std::vector<NodeId> nodes;
    std::vector<double> coords;

    std::size_t size() const noexcept { return nodes.size(); }
    std::span<const double> point(std::size_t i) const { return {coords.data() + i * dims, dims}; }
    std::span<double> point(std::size_t i) { return {coords.data() + i * dims, dims}; }
    std::optional<std::size_t> find(NodeId node) const;

    friend bool operator==(const Layout&, const Layout&) = default;
};

double distance(std::span<const double> a, std::span<const double> b);

struct TrackSlice {
    std::string time;
    Layout layout;
    double static_stress = 0.0;
    double stress1 = 0.0;

    friend bool operator==(const TrackSlice&, const TrackSlice&) = default;
};

struct SolverInfo {
    std::size_t iterations = 0;
    bool converged = false;
    double omega = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const SolverInfo&, const SolverInfo&) = default;
};

/// Per-slice positions of every present node plus the stress they achieve.
struct AnimationTrack {
    /// Display ids for the node universe (index = NodeId).
    std::vector<std::string> node_ids;
    std::vector<TrackSlice> slices;
    double temporal_stress = 0.0;
    double total_stress = 0.0;
    SolverInfo solver;

    friend bool operator==(const AnimationTrack&, const AnimationTrack&) = default;
};

}  // namespace scidyn
