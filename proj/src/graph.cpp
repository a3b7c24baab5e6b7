#include "scidyn/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "scidyn/error.hpp"

namespace scidyn {

namespace {

std::optional<double> parse_number(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) return std::nullopt;
    return value;
}

}  // namespace

bool GraphSlice::contains(NodeId node) const {
    return std::binary_search(present.begin(), present.end(), node);
}

TimeSlicedGraph::TimeSlicedGraph(std::vector<Node> nodes, std::vector<GraphSlice> slices)
    : nodes_(std::move(nodes)), slices_(std::move(slices)) {
    std::set<std::string> ids;
    for (const auto& node : nodes_) {
        if (!ids.insert(node.id).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate node id '" + node.id + "'");
        }
    }
    std::set<std::string> times;
    for (auto& slice : slices_) {
        if (!times.insert(slice.time).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate time label '" + slice.time + "'");
        }
        std::sort(slice.present.begin(), slice.present.end());
        slice.present.erase(std::unique(slice.present.begin(), slice.present.end()), slice.present.end());
        for (NodeId node : slice.present) {
            if (node >= nodes_.size()) throw Error(ErrorCode::InvalidArgument, "node index out of range");
        }
        for (const auto& edge : slice.edges) {
            if (edge.source == edge.target) {
                throw Error(ErrorCode::SelfLoop, "self-loop on '" + nodes_.at(edge.source).id +
                                                     "' at time " + slice.time);
            }
            if (!(edge.weight > 0.0) || !std::isfinite(edge.weight)) {
                throw Error(ErrorCode::NonPositiveWeight, "edge weight must be positive at time " + slice.time);
            }
            if (!slice.contains(edge.source) || !slice.contains(edge.target)) {
                throw Error(ErrorCode::InvalidArgument,
                            "edge endpoint not present at time " + slice.time);
            }
        }
        for (auto& edge : slice.edges) {
            if (edge.source > edge.target) std::swap(edge.source, edge.target);
        }
        std::sort(slice.edges.begin(), slice.edges.end(), [](const Edge& a, const Edge& b) {
            return std::pair{a.source, a.target} < std::pair{b.source, b.target};
        });
        std::vector<Edge> merged;
        for (const auto& edge : slice.edges) {
            if (!merged.empty() && merged.back().source == edge.source && merged.back().target == edge.target) {
                merged.back().weight += edge.weight;
            } else {
                merged.push_back(edge);
            }
        }
        slice.edges = std::move(merged);
    }
}

NodeId TimeSlicedGraph::node_index(const std::string& id) const {
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id == id) return i;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown node '" + id + "'");
}

bool time_labels_numeric(const std::vector<std::string>& labels) {
    return std::all_of(labels.begin(), labels.end(),
                       [](const std::string& l) { return parse_number(l).has_value(); });
}

void order_time_labels(std::vector<std::string>& labels) {
    if (time_labels_numeric(labels)) {
        std::stable_sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
            return *parse_number(a) < *parse_number(b);
        });
    } else {
        std::sort(labels.begin(), labels.end());
    }
}

double edge_dissimilarity(double weight, DistanceTransform transform) {
    double d = 0.0;
    switch (transform) {
        case DistanceTransform::Explicit: d = weight; break;
        case DistanceTransform::Reciprocal: d = 1.0 / weight; break;
        case DistanceTransform::OneMinusCosine: d = 1.0 - weight; break;
    }
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw Error(ErrorCode::InvalidWeight, "weight " + std::to_string(weight) + " gives dissimilarity " +
                                                  std::to_string(d) + " under transform " +
                                                  to_string(transform));
    }
    return d;
}

std::optional<DistanceTransform> parse_distance_transform(const std::string& name) {
    if (name == "explicit") return DistanceTransform::Explicit;
    if (name == "reciprocal" || name == "reciprocal-weight") return DistanceTransform::Reciprocal;
    if (name == "one-minus-cosine") return DistanceTransform::OneMinusCosine;
    return std::nullopt;
}

std::string to_string(DistanceTransform transform) {
    switch (transform) {
        case DistanceTransform::Explicit: return "explicit";
        case DistanceTransform::Reciprocal: return "reciprocal";
        case DistanceTransform::OneMinusCosine: return "one-minus-cosine";
    }
    return "explicit";
}

DistanceMatrix::DistanceMatrix(std::vector<NodeId> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    const std::size_t n = nodes_.size();
    if (values_.size() != n * n) {
        throw Error(ErrorCode::InvalidArgument, "distance matrix needs n*n entries");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (values_[i * n + i] != 0.0) throw Error(ErrorCode::InvalidArgument, "non-zero diagonal");
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = values_[i * n + j];
            const double b = values_[j * n + i];
            if (a != b) throw Error(ErrorCode::InvalidArgument, "distance matrix is not symmetric");
            if (!(a > 0.0)) {
                throw Error(ErrorCode::InvalidArgument, "off-diagonal distances must be positive");
            }
        }
    }
}

}  // namespace scidyn
