#pragma once

// Information-theoretic measures over labeled distributions. Everything is in
// bits (log base 2) and treats 0 * log 0 as 0.

#include <optional>
#include <string>
#include <vector>

#include "scidyn/grouping.hpp"
#include "scidyn/tensor.hpp"

namespace scidyn {

struct GroupEntropy;

/// Entropy of a one-dimensional distribution split into a between-group term
/// and share-weighted within-group terms:
///   total = between + sum(share * within).
struct DecompositionReport {
    double total_bits = 0.0;
    double between_bits = 0.0;
    std::vector<GroupEntropy> groups;
};

struct GroupEntropy {
    std::string label;
    double share = 0.0;
    double within_bits = 0.0;
    /// Present for interior groups of a nested decomposition; its total_bits
    /// equals within_bits.
    std::optional<DecompositionReport> children;
};

struct GroupDivergence {
    std::string label;
    double posterior_share = 0.0;
    double prior_share = 0.0;
    double within_bits = 0.0;
};

/// Kullback-Leibler divergence split over groups:
///   total = between + sum(posterior_share * within).
struct DivergenceReport {
    double total_bits = 0.0;
    double between_bits = 0.0;
    std::vector<GroupDivergence> groups;
};

enum class SupportPolicy {
    Strict,    // SupportViolation when q > 0 where p = 0
    Smoothed,  // add smoothing_epsilon to every cell of both inputs, renormalize
};

inline constexpr double smoothing_epsilon = 1e-6;

/// Boltzmann constant in J/K.
inline constexpr double boltzmann_constant = 1.380649e-23;

/// -sum p log2 p over every cell.
double shannon_entropy(const ProbabilityDistribution& dist);

/// Single-level decomposition at the given grouping level. Groups with zero
/// share contribute nothing and report within_bits = 0.
DecompositionReport theil_decompose(const ProbabilityDistribution& dist, const GroupingTree& grouping,
                                    std::size_t level = 1);

/// Applies the decomposition recursively down every branch of the tree.
DecompositionReport nested_decompose(const ProbabilityDistribution& dist, const GroupingTree& grouping);

/// Recomputes the total from the parts: between + sum(share * within), where
/// interior groups contribute the flattened value of their child report.
double flatten(const DecompositionReport& report);

/// I(q|p) = sum q log2(q / p), the information of the update from prior p to
/// posterior q. Throws ShapeMismatch or SupportViolation.
double kl_divergence(const ProbabilityDistribution& posterior, const ProbabilityDistribution& prior,
                     SupportPolicy policy = SupportPolicy::Strict);

DivergenceReport kl_decompose(const ProbabilityDistribution& posterior,
                              const ProbabilityDistribution& prior, const GroupingTree& grouping,
                              SupportPolicy policy = SupportPolicy::Strict, std::size_t level = 1);

/// H(X) + H(Y) - H(XY). Throws WrongArity unless the joint has two axes.
double mutual_information2(const ProbabilityDistribution& joint);

/// Three-way interaction information
///   H(X) + H(Y) + H(Z) - H(XY) - H(XZ) - H(YZ) + H(XYZ).
///
/// Sign convention: positive values mean redundancy among the three variables
/// (e.g. X = Y = Z gives +1 bit); negative values mean synergy generated in the
/// interaction (Z = X xor Y gives -1 bit). Throws WrongArity unless the joint
/// has three axes.
double interaction_information3(const ProbabilityDistribution& joint);

struct TransitionStep {
    std::string label;
    double bits = 0.0;
    std::optional<DivergenceReport> decomposition;
};

/// Divergence of each state from its predecessor, i.e. how much the next
/// observation departs from the "no change" prediction. Labels default to
/// "0->1", "1->2", ... Errors are rethrown with the failing step index.
std::vector<TransitionStep> transition_information(const std::vector<ProbabilityDistribution>& series,
                                                   const std::optional<GroupingTree>& grouping = {},
                                                   SupportPolicy policy = SupportPolicy::Strict,
                                                   const std::vector<std::string>& labels = {});

/// Gibbs coupling S = k_B * H with H converted from bits to nats.
/// Throws NegativeEntropy.
double thermodynamic_entropy(double h_bits);

/// Same, for an entropy already in nats.
double thermodynamic_entropy_nats(double h_nats);

}  // namespace scidyn
