#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "scidyn/graph.hpp"

namespace scidyn {

using NodeValues = std::map<NodeId, double>;

/// Shortest-path betweenness of every present node (Brandes accumulation over
/// unordered pairs). Unweighted mode counts hops; weighted mode uses
/// edge_dissimilarity(weight, transform) as edge length, with path lengths
/// within a relative 1e-12 treated as ties. Throws EmptySlice when no node is
/// present.
NodeValues betweenness_centrality(const GraphSlice& slice, bool weighted,
                                  DistanceTransform transform = DistanceTransform::Reciprocal);

/// Raw values divided by (n - 1)(n - 2) / 2 for n present nodes; zero for n < 3.
NodeValues normalize_betweenness(const NodeValues& raw);

struct CentralityFlag {
    std::size_t slice = 0;
    NodeId node = 0;
    /// Increase of the normalized value over the previous slice.
    double rise = 0.0;
};

struct CentralitySeries {
    std::vector<std::string> times;
    std::vector<NodeValues> raw;
    std::vector<NodeValues> normalized;
    /// Nodes whose normalized value rose by more than the threshold between
    /// consecutive slices. A node absent in the previous slice counts as 0.
    std::vector<CentralityFlag> flags;
};

inline constexpr double default_spike_threshold = 0.1;

CentralitySeries centrality_series(const TimeSlicedGraph& graph,
                                   double spike_threshold = default_spike_threshold, bool weighted = false,
                                   DistanceTransform transform = DistanceTransform::Reciprocal);

}  // namespace scidyn
