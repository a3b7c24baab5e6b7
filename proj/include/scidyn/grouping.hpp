#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scidyn/tensor.hpp"

namespace scidyn {

/// A node of a grouping hierarchy. Interior nodes hold children; leaves hold
/// the category labels that belong to them.
struct GroupNode {
    std::string label;
    std::vector<GroupNode> children;
    std::vector<std::string> categories;

    bool is_leaf() const noexcept { return children.empty(); }
    /// Every category under this node, in tree order.
    std::vector<std::string> all_categories() const;

    friend bool operator==(const GroupNode&, const GroupNode&) = default;
};

/// A group selected at some level, with its slash-joined path from level 1.
struct GroupRef {
    const GroupNode* node = nullptr;
    std::string path;
};

/// A (possibly nested) partition of one axis's categories. Level 1 holds the
/// coarsest groups; the root itself is level 0 and is never a group.
class GroupingTree {
  public:
    /// Throws InvalidArgument if the root has no children, or OverlapError if
    /// a category appears in more than one leaf.
    GroupingTree(std::string target_axis, GroupNode root);

    /// One-level grouping, convenient for tests and the library API.
    static GroupingTree flat(std::string target_axis,
                             std::vector<std::pair<std::string, std::vector<std::string>>> groups);

    /// Empty when the tree was read without naming its axis; such a tree binds
    /// to any one-dimensional distribution whose categories it partitions.
    const std::string& target_axis() const noexcept { return target_axis_; }
    const GroupNode& root() const noexcept { return root_; }
    std::size_t depth() const noexcept { return depth_; }

    /// Groups at the requested level. Leaves shallower than the level stand in
    /// for themselves at every deeper level. Throws BadDepth.
    std::vector<GroupRef> groups_at(std::size_t level) const;

    /// Throws AxisMismatch unless the leaf-sets partition the axis exactly and
    /// the axis name agrees with target_axis (when set).
    void check_partition(const Axis& axis) const;

    friend bool operator==(const GroupingTree&, const GroupingTree&) = default;

  private:
    std::string target_axis_;
    GroupNode root_;
    std::size_t depth_ = 0;
};

/// Sums a one-dimensional distribution into one probability per group at the
/// requested level. The result's single axis is named "level<N>" and labelled
/// with the group paths.
ProbabilityDistribution group_aggregate(const ProbabilityDistribution& dist,
                                        const GroupingTree& grouping, std::size_t level);

}  // namespace scidyn
