#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace scidyn {

/// Index into a TimeSlicedGraph's node universe.
using NodeId = std::size_t;

struct Node {
    std::string id;
    std::string label;

    friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
    NodeId source = 0;
    NodeId target = 0;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct GraphSlice {
    std::string time;
    std::vector<Edge> edges;
    /// Sorted, unique.
    std::vector<NodeId> present;

    bool contains(NodeId node) const;

    friend bool operator==(const GraphSlice&, const GraphSlice&) = default;
};

/// Ordered weighted undirected graphs over a shared node universe.
class TimeSlicedGraph {
  public:
    TimeSlicedGraph() = default;
    /// Validates: endpoints present, weights > 0, no self-loops, node ids
    /// unique, time labels unique. Presence lists are sorted; edges are stored
    /// with source < target, sorted, duplicates summed.
    /// Slices are kept in the order given; see order_time_labels().
    TimeSlicedGraph(std::vector<Node> nodes, std::vector<GraphSlice> slices);

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<GraphSlice>& slices() const noexcept { return slices_; }
    const GraphSlice& slice(std::size_t t) const { return slices_.at(t); }
    std::size_t slice_count() const noexcept { return slices_.size(); }

    /// Throws InvalidArgument for unknown ids.
    NodeId node_index(const std::string& id) const;

    friend bool operator==(const TimeSlicedGraph&, const TimeSlicedGraph&) = default;

  private:
    std::vector<Node> nodes_;
    std::vector<GraphSlice> slices_;
};

/// Sort order for time labels: numeric when every label parses as a number,
/// lexicographic otherwise.
bool time_labels_numeric(const std::vector<std::string>& labels);
void order_time_labels(std::vector<std::string>& labels);

enum class DistanceTransform {
    Explicit,        // weight is already a dissimilarity
    Reciprocal,      // 1 / weight
    OneMinusCosine,  // 1 - weight, weight a cosine similarity in (0, 1)
};

/// Dissimilarity of one edge. Throws InvalidWeight when the transform does
/// not yield a strictly positive finite value.
double edge_dissimilarity(double weight, DistanceTransform transform);

std::optional<DistanceTransform> parse_distance_transform(const std::string& name);
std::string to_string(DistanceTransform transform);

/// Symmetric target dissimilarities over a subset of nodes. Unreachable pairs
/// are stored as +infinity.
class DistanceMatrix {
  public:
    static constexpr double unreachable = std::numeric_limits<double>::infinity();

    /// values is row-major size nodes.size()^2. Throws InvalidArgument unless
    /// the matrix is symmetric with zero diagonal and positive off-diagonal.
    DistanceMatrix(std::vector<NodeId> nodes, std::vector<double> values);

    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * nodes_.size() + j]; }
    bool reachable(std::size_t i, std::size_t j) const { return (*this)(i, j) != unreachable; }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

  private:
    std::vector<NodeId> nodes_;
    std::vector<double> values_;
};

}  // namespace scidyn
