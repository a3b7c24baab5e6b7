#include "scidyn/entropy.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "scidyn/error.hpp"

namespace scidyn {

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

/// Entropy of masses scaled by 1 / mass; zero mass yields 0.
double conditional_entropy(const std::vector<double>& masses, double mass) {
    if (!(mass > 0.0)) return 0.0;
    double h = 0.0;
    for (double m : masses) h -= plogp(m / mass);
    return h;
}

double sum(const std::vector<double>& values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

const Axis& single_axis(const ProbabilityDistribution& dist, const GroupingTree& grouping) {
    if (dist.rank() != 1) {
        throw Error(ErrorCode::AxisMismatch, "decomposition needs a one-dimensional distribution");
    }
    grouping.check_partition(dist.axes().front());
    return dist.axes().front();
}

/// Probabilities of the categories under a node, in the node's category order.
std::vector<double> masses_under(const GroupNode& node,
                                 const std::unordered_map<std::string, std::size_t>& lookup,
                                 const ProbabilityDistribution& dist) {
    std::vector<double> out;
    for (const auto& c : node.all_categories()) out.push_back(dist.at_linear(lookup.at(c)));
    return out;
}

std::unordered_map<std::string, std::size_t> category_lookup(const Axis& axis) {
    std::unordered_map<std::string, std::size_t> lookup;
    for (std::size_t i = 0; i < axis.size(); ++i) lookup.emplace(axis.categories[i], i);
    return lookup;
}

DecompositionReport decompose_node(const GroupNode& node,
                                   const std::unordered_map<std::string, std::size_t>& lookup,
                                   const ProbabilityDistribution& dist) {
    const auto all = masses_under(node, lookup, dist);
    const double node_mass = sum(all);

    DecompositionReport report;
    report.total_bits = conditional_entropy(all, node_mass);
    std::vector<double> child_masses;
    for (const auto& child : node.children) {
        const auto masses = masses_under(child, lookup, dist);
        const double child_mass = sum(masses);
        child_masses.push_back(child_mass);

        GroupEntropy group;
        group.label = child.label;
        group.share = node_mass > 0.0 ? child_mass / node_mass : 0.0;
        if (child.is_leaf()) {
            group.within_bits = conditional_entropy(masses, child_mass);
        } else {
            group.children = decompose_node(child, lookup, dist);
            group.within_bits = child_mass > 0.0 ? group.children->total_bits : 0.0;
        }
        report.groups.push_back(std::move(group));
    }
    report.between_bits = conditional_entropy(child_masses, node_mass);
    return report;
}

ProbabilityDistribution smoothed(const ProbabilityDistribution& dist) {
    auto values = dist.values();
    const double scale = 1.0 + smoothing_epsilon * static_cast<double>(values.size());
    for (double& v : values) v = (v + smoothing_epsilon) / scale;
    return ProbabilityDistribution::from_probabilities(dist.axes(), std::move(values));
}

void check_shapes(const ProbabilityDistribution& q, const ProbabilityDistribution& p) {
    if (!q.same_shape(p)) {
        throw Error(ErrorCode::ShapeMismatch, "posterior and prior differ in axes or labels");
    }
}

std::vector<std::string> axis_names(const ProbabilityDistribution& dist) {
    std::vector<std::string> names;
    for (const auto& axis : dist.axes()) names.push_back(axis.name);
    return names;
}

double marginal_entropy(const ProbabilityDistribution& joint, std::vector<std::string> keep) {
    return shannon_entropy(marginalize(joint, keep));
}

}  // namespace

double shannon_entropy(const ProbabilityDistribution& dist) {
    double h = 0.0;
    dist.for_each_nonzero([&](std::size_t, double p) { h -= plogp(p); });
    return h;
}

DecompositionReport theil_decompose(const ProbabilityDistribution& dist, const GroupingTree& grouping,
                                    std::size_t level) {
    const Axis& axis = single_axis(dist, grouping);
    const auto lookup = category_lookup(axis);

    DecompositionReport report;
    report.total_bits = shannon_entropy(dist);
    std::vector<double> shares;
    for (const auto& group : grouping.groups_at(level)) {
        const auto masses = masses_under(*group.node, lookup, dist);
        const double share = sum(masses);
        shares.push_back(share);
        report.groups.push_back(GroupEntropy{group.path, share, conditional_entropy(masses, share), {}});
    }
    report.between_bits = conditional_entropy(shares, 1.0);
    return report;
}

DecompositionReport nested_decompose(const ProbabilityDistribution& dist, const GroupingTree& grouping) {
    const Axis& axis = single_axis(dist, grouping);
    return decompose_node(grouping.root(), category_lookup(axis), dist);
}

double flatten(const DecompositionReport& report) {
    double total = report.between_bits;
    for (const auto& group : report.groups) {
        total += group.share * (group.children ? flatten(*group.children) : group.within_bits);
    }
    return total;
}

double kl_divergence(const ProbabilityDistribution& posterior, const ProbabilityDistribution& prior,
                     SupportPolicy policy) {
    check_shapes(posterior, prior);
    if (policy == SupportPolicy::Smoothed) {
        return kl_divergence(smoothed(posterior), smoothed(prior), SupportPolicy::Strict);
    }
    double bits = 0.0;
    posterior.for_each_nonzero([&](std::size_t i, double q) {
        const double p = prior.at_linear(i);
        if (p == 0.0) {
            throw Error(ErrorCode::SupportViolation,
                        "posterior has mass where the prior has none (cell " + std::to_string(i) + ")");
        }
        bits += q * std::log2(q / p);
    });
    return bits;
}

DivergenceReport kl_decompose(const ProbabilityDistribution& posterior,
                              const ProbabilityDistribution& prior, const GroupingTree& grouping,
                              SupportPolicy policy, std::size_t level) {
    check_shapes(posterior, prior);
    if (policy == SupportPolicy::Smoothed) {
        return kl_decompose(smoothed(posterior), smoothed(prior), grouping, SupportPolicy::Strict, level);
    }
    const Axis& axis = single_axis(posterior, grouping);
    const auto lookup = category_lookup(axis);

    DivergenceReport report;
    report.total_bits = kl_divergence(posterior, prior);
    for (const auto& group : grouping.groups_at(level)) {
        const auto q = masses_under(*group.node, lookup, posterior);
        const auto p = masses_under(*group.node, lookup, prior);
        const double q_share = sum(q);
        const double p_share = sum(p);

        GroupDivergence entry{group.path, q_share, p_share, 0.0};
        if (q_share > 0.0) {
            report.between_bits += q_share * std::log2(q_share / p_share);
            for (std::size_t i = 0; i < q.size(); ++i) {
                if (q[i] > 0.0) {
                    const double qc = q[i] / q_share;
                    entry.within_bits += qc * std::log2(qc / (p[i] / p_share));
                }
            }
        }
        report.groups.push_back(std::move(entry));
    }
    return report;
}

double mutual_information2(const ProbabilityDistribution& joint) {
    if (joint.rank() != 2) {
        throw Error(ErrorCode::WrongArity, "mutual information needs exactly two axes, got " +
                                               std::to_string(joint.rank()));
    }
    const auto names = axis_names(joint);
    return marginal_entropy(joint, {names[0]}) + marginal_entropy(joint, {names[1]}) -
           shannon_entropy(joint);
}

double interaction_information3(const ProbabilityDistribution& joint) {
    if (joint.rank() != 3) {
        throw Error(ErrorCode::WrongArity, "interaction information needs exactly three axes, got " +
                                               std::to_string(joint.rank()));
    }
    const auto n = axis_names(joint);
    const double hx = marginal_entropy(joint, {n[0]});
    const double hy = marginal_entropy(joint, {n[1]});
    const double hz = marginal_entropy(joint, {n[2]});
    const double hxy = marginal_entropy(joint, {n[0], n[1]});
    const double hxz = marginal_entropy(joint, {n[0], n[2]});
    const double hyz = marginal_entropy(joint, {n[1], n[2]});
    const double hxyz = shannon_entropy(joint);
    return hx + hy + hz - hxy - hxz - hyz + hxyz;
}

std::vector<TransitionStep> transition_information(const std::vector<ProbabilityDistribution>& series,
                                                   const std::optional<GroupingTree>& grouping,
                                                   SupportPolicy policy,
                                                   const std::vector<std::string>& labels) {
    if (series.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "transition information needs at least two states");
    }
    if (!labels.empty() && labels.size() != series.size()) {
        throw Error(ErrorCode::InvalidArgument, "one label per state expected");
    }
    std::vector<TransitionStep> steps;
    for (std::size_t t = 0; t + 1 < series.size(); ++t) {
        TransitionStep step;
        step.label = labels.empty() ? std::to_string(t) + "->" + std::to_string(t + 1)
                                    : labels[t] + "->" + labels[t + 1];
        try {
            step.bits = kl_divergence(series[t + 1], series[t], policy);
            if (grouping) step.decomposition = kl_decompose(series[t + 1], series[t], *grouping, policy);
        } catch (const Error& e) {
            throw Error(e.code(), "step " + std::to_string(t) + " (" + step.label + "): " + e.what());
        }
        steps.push_back(std::move(step));
    }
    return steps;
}

double thermodynamic_entropy(double h_bits) {
    if (h_bits < 0.0) throw Error(ErrorCode::NegativeEntropy, "entropy in bits must be non-negative");
    return thermodynamic_entropy_nats(h_bits * std::numbers::ln2);
}

double thermodynamic_entropy_nats(double h_nats) {
    if (h_nats < 0.0) throw Error(ErrorCode::NegativeEntropy, "entropy in nats must be non-negative");
    return boltzmann_constant * h_nats;
}

}  // namespace scidyn
