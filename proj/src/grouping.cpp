#include "scidyn/grouping.hpp"

#include <algorithm>
#include <set>

#include "scidyn/error.hpp"

namespace scidyn {

namespace {

std::size_t tree_depth(const GroupNode& node) {
    std::size_t deepest = 0;
    for (const auto& child : node.children) deepest = std::max(deepest, tree_depth(child));
    return node.is_leaf() ? 0 : deepest + 1;
}

void collect(const GroupNode& node, const std::string& path, std::size_t level, std::size_t target,
             std::vector<GroupRef>& out) {
    if (level == target || node.is_leaf()) {
        out.push_back(GroupRef{&node, path});
        return;
    }
    for (const auto& child : node.children) {
        collect(child, path + "/" + child.label, level + 1, target, out);
    }
}

void collect_categories(const GroupNode& node, std::vector<std::string>& out) {
    out.insert(out.end(), node.categories.begin(), node.categories.end());
    for (const auto& child : node.children) collect_categories(child, out);
}

void check_node(const GroupNode& node, bool is_root) {
    if (!node.children.empty() && !node.categories.empty()) {
        throw Error(ErrorCode::InvalidArgument,
                    "group '" + node.label + "' holds both subgroups and categories");
    }
    if (!is_root && node.children.empty() && node.categories.empty()) {
        throw Error(ErrorCode::InvalidArgument, "group '" + node.label + "' is empty");
    }
    for (const auto& child : node.children) check_node(child, false);
}

}  // namespace

std::vector<std::string> GroupNode::all_categories() const {
    std::vector<std::string> out;
    collect_categories(*this, out);
    return out;
}

GroupingTree::GroupingTree(std::string target_axis, GroupNode root)
    : target_axis_(std::move(target_axis)), root_(std::move(root)) {
    if (root_.children.empty()) {
        throw Error(ErrorCode::InvalidArgument, "a grouping needs at least one level of groups");
    }
    check_node(root_, true);
    const auto categories = root_.all_categories();
    std::set<std::string> seen;
    for (const auto& c : categories) {
        if (!seen.insert(c).second) {
            throw Error(ErrorCode::OverlapError, "category '" + c + "' appears in more than one group");
        }
    }
    depth_ = tree_depth(root_);
}

GroupingTree GroupingTree::flat(std::string target_axis,
                                std::vector<std::pair<std::string, std::vector<std::string>>> groups) {
    GroupNode root{"", {}, {}};
    for (auto& [label, categories] : groups) {
        root.children.push_back(GroupNode{std::move(label), {}, std::move(categories)});
    }
    return GroupingTree(std::move(target_axis), std::move(root));
}

std::vector<GroupRef> GroupingTree::groups_at(std::size_t level) const {
    if (level < 1 || level > depth_) {
        throw Error(ErrorCode::BadDepth, "level " + std::to_string(level) + " outside 1.." +
                                             std::to_string(depth_));
    }
    std::vector<GroupRef> out;
    for (const auto& child : root_.children) collect(child, child.label, 1, level, out);
    return out;
}

void GroupingTree::check_partition(const Axis& axis) const {
    if (!target_axis_.empty() && target_axis_ != axis.name) {
        throw Error(ErrorCode::AxisMismatch,
                    "grouping targets axis '" + target_axis_ + "', got '" + axis.name + "'");
    }
    auto listed = root_.all_categories();
    auto expected = axis.categories;
    std::sort(listed.begin(), listed.end());
    std::sort(expected.begin(), expected.end());
    if (listed != expected) {
        throw Error(ErrorCode::AxisMismatch,
                    "grouping does not partition the categories of axis '" + axis.name + "'");
    }
}

ProbabilityDistribution group_aggregate(const ProbabilityDistribution& dist,
                                        const GroupingTree& grouping, std::size_t level) {
    if (dist.rank() != 1) {
        throw Error(ErrorCode::AxisMismatch, "grouping needs a one-dimensional distribution");
    }
    const Axis& axis = dist.axes().front();
    grouping.check_partition(axis);
    const auto groups = grouping.groups_at(level);

    Axis out_axis{"level" + std::to_string(level), {}};
    std::vector<double> shares;
    for (const auto& group : groups) {
        double share = 0.0;
        for (const auto& c : group.node->all_categories()) share += dist.at_linear(axis.index_of(c));
        out_axis.categories.push_back(group.path);
        shares.push_back(std::min(share, 1.0));
    }
    return ProbabilityDistribution::from_probabilities({std::move(out_axis)}, std::move(shares));
}

}  // namespace scidyn
