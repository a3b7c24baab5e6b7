#pragma once

// Stress-minimizing layouts for single graphs and for sequences of graphs.
//
// The objective for a sequence of frames t with target distances d_ij,t is
//
//   S = sum_t sum_{i<j} (1 / d_ij,t^2) (|x_i,t - x_j,t| - d_ij,t)^2
//     + sum_t sum_i omega |x_i,t - x_i,t+1|^2
//
// where the second sum only runs over nodes present in both t and t+1. Every
// unordered pair is counted once. Pairs without a finite target distance get
// weight zero. The solver minimizes S jointly over all frames.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scidyn/graph.hpp"
#include "scidyn/tensor.hpp"
#include "scidyn/track.hpp"

namespace scidyn {

struct LayoutConfig {
    double omega = 1.0;
    std::size_t dims = 2;
    std::size_t max_iterations = 500;
    double relative_tolerance = 1e-6;
    std::uint64_t seed = 42;
    DistanceTransform transform = DistanceTransform::Reciprocal;

    /// Throws InvalidArgument on omega < 0, dims outside {2, 3},
    /// max_iterations < 1 or tolerance <= 0.
    void validate() const;
};

struct StressReport {
    /// Weighted static stress per frame.
    std::vector<double> static_terms;
    /// Kruskal stress-1 per frame (unweighted, normalized by layout distances).
    std::vector<double> stress1;
    /// omega-weighted temporal penalty.
    double temporal_term = 0.0;
    /// Unweighted sum of squared inter-frame displacements.
    double displacement = 0.0;
    double total = 0.0;
};

struct StaticLayoutResult {
    Layout layout;
    StressReport stress;
    /// Total stress after initialization and after every sweep.
    std::vector<double> trace;
    SolverInfo solver;
};

struct DynamicLayoutResult {
    AnimationTrack track;
    StressReport stress;
    std::vector<double> trace;
};

/// All-pairs shortest paths over transformed edge weights for one slice.
/// Throws EmptySlice when fewer than two nodes are present.
DistanceMatrix graph_distances(const GraphSlice& slice, DistanceTransform transform);

/// Static stress of a layout against target distances. Throws MissingPosition
/// when a matrix node has no coordinates.
StressReport static_stress(const Layout& layout, const DistanceMatrix& distances);

/// Deterministic starting position of a node for a given seed.
std::vector<double> initial_position(std::uint64_t seed, NodeId node, std::size_t dims);

StaticLayoutResult majorize_static(const DistanceMatrix& distances, const LayoutConfig& config,
                                   const std::optional<Layout>& warm_start = std::nullopt);

/// Joint layout of a sequence of frames. Each matrix's node list is that
/// frame's presence set. time_labels defaults to "0", "1", ...; node_ids to
/// the decimal node index. Throws EmptySeries.
DynamicLayoutResult majorize_dynamic(const std::vector<DistanceMatrix>& frames, const LayoutConfig& config,
                                     std::vector<std::string> time_labels = {},
                                     std::vector<std::string> node_ids = {});

/// Convenience: distances per slice via config.transform, then majorize_dynamic.
DynamicLayoutResult layout_graph(const TimeSlicedGraph& graph, const LayoutConfig& config);

using Point2 = std::array<double, 2>;

struct Construct {
    std::string label;
    Point2 position{};
    double eigenvalue = 0.0;
    /// (variable, loading); loadings form a unit vector.
    std::vector<std::pair<std::string, double>> loadings;
    /// Eigenvalue is not separated from a neighbouring one, so the direction
    /// is not unique.
    bool degenerate = false;
    /// Eigenvalue is numerically zero.
    bool rank_deficient = false;
};

/// Top-k eigenvectors of the correlation matrix between the columns
/// (axis 1) of a two-axis table, each placed at the barycenter of the
/// variable positions weighted by squared loadings.
std::vector<Construct> eigenvector_overlay(const ContingencyTensor& table,
                                           const std::map<std::string, Point2>& positions,
                                           std::size_t k);

/// Pearson correlation between the columns of a two-axis table, row-major.
/// Columns with zero variance correlate 0 with everything else.
std::vector<double> column_correlation(const ContingencyTensor& table);

}  // namespace scidyn
