#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "doctest.h"
#include "scidyn/entropy.hpp"
#include "support.hpp"

using namespace scidyn;
using namespace testing;

namespace {

const Axis abcd{"x", {"a", "b", "c", "d"}};

GroupingTree pairs() { return GroupingTree::flat("x", {{"ab", {"a", "b"}}, {"cd", {"c", "d"}}}); }

ProbabilityDistribution vec(std::vector<double> p) { return ProbabilityDistribution::vector(std::move(p)); }

}  // namespace

TEST_CASE("shannon entropy examples") {
    CHECK(shannon_entropy(vec({0.25, 0.25, 0.25, 0.25})) == 2.0);
    CHECK(shannon_entropy(vec({0.0, 1.0, 0.0})) == 0.0);
    CHECK(shannon_entropy(vec({0.5, 0.25, 0.25})) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("property: entropy bounds") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> size(1, 64);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = size(rng);
        const double hx = shannon_entropy(vec(random_probabilities(rng, n, true)));
        CHECK(hx >= 0.0);
        CHECK(hx <= std::log2(static_cast<double>(n)) + 1e-12);
        CHECK(std::abs(shannon_entropy(vec(std::vector<double>(n, 1.0 / static_cast<double>(n)))) -
                       std::log2(static_cast<double>(n))) < 1e-12);
        std::vector<double> point(n, 0.0);
        point[n - 1] = 1.0;
        CHECK(shannon_entropy(vec(point)) == 0.0);
    }
}

TEST_CASE("property: entropy is additive over independent axes") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const auto px = random_probabilities(rng, 2 + trial % 5);
        const auto py = random_probabilities(rng, 2 + trial % 3, true);
        std::vector<double> joint;
        for (double a : px) {
            for (double b : py) joint.push_back(a * b);
        }
        const double hxy = shannon_entropy(distribution({axis("x", px.size()), axis("y", py.size())}, joint));
        CHECK(std::abs(hxy - (h(px) + h(py))) < 1e-9);
    }
}

TEST_CASE("theil decomposition examples") {
    const auto uniform = theil_decompose(distribution({abcd}, {0.25, 0.25, 0.25, 0.25}), pairs());
    CHECK(uniform.total_bits == 2.0);
    CHECK(uniform.between_bits == 1.0);
    REQUIRE(uniform.groups.size() == 2);
    CHECK(uniform.groups[0].within_bits == 1.0);
    CHECK(uniform.groups[1].within_bits == 1.0);

    const auto all = GroupingTree::flat("x", {{"all", {"a", "b", "c", "d"}}});
    const auto p = distribution({abcd}, {0.1, 0.2, 0.3, 0.4});
    const auto single = theil_decompose(p, all);
    CHECK(single.between_bits == 0.0);
    CHECK(std::abs(single.groups[0].within_bits - single.total_bits) < 1e-12);

    const auto half = theil_decompose(distribution({abcd}, {0.5, 0.5, 0.0, 0.0}), pairs());
    CHECK(half.total_bits == 1.0);
    CHECK(half.between_bits == 0.0);
    CHECK(half.groups[0].within_bits == 1.0);
    CHECK(half.groups[1].share == 0.0);
    CHECK(half.groups[1].within_bits == 0.0);
}

TEST_CASE("theil decomposition rejects mismatched axes") {
    const auto joint = distribution({axis("x", 2), axis("y", 2)}, {0.25, 0.25, 0.25, 0.25});
    CHECK(error_code([&] { theil_decompose(joint, pairs()); }) == ErrorCode::AxisMismatch);
    const auto other = distribution({Axis{"y", {"a", "b", "c", "d"}}}, {0.25, 0.25, 0.25, 0.25});
    CHECK(error_code([&] { theil_decompose(other, pairs()); }) == ErrorCode::AxisMismatch);
    CHECK(error_code([&] { nested_decompose(joint, pairs()); }) == ErrorCode::AxisMismatch);
}

TEST_CASE("nested decomposition") {
    const auto p = distribution({abcd}, {0.1, 0.2, 0.3, 0.4});
    const auto flat = theil_decompose(p, pairs());
    const auto nested = nested_decompose(p, pairs());
    CHECK(nested.total_bits == flat.total_bits);
    CHECK(nested.between_bits == flat.between_bits);
    for (std::size_t g = 0; g < 2; ++g) CHECK(nested.groups[g].within_bits == flat.groups[g].within_bits);

    // Uniform over 8 with a binary tree of depth 3: one bit between at every level.
    const Axis eight = axis("x", 8);
    auto leaf = [&](std::size_t i) { return GroupNode{eight.categories[i], {}, {eight.categories[i]}}; };
    auto pair_of = [&](std::size_t i) { return GroupNode{"p" + std::to_string(i), {leaf(i), leaf(i + 1)}, {}}; };
    GroupNode root;
    root.children = {GroupNode{"L", {pair_of(0), pair_of(2)}, {}}, GroupNode{"R", {pair_of(4), pair_of(6)}, {}}};
    const GroupingTree tree("x", root);
    CHECK(tree.depth() == 3);
    const auto report = nested_decompose(distribution({eight}, std::vector<double>(8, 0.125)), tree);
    CHECK(report.total_bits == 3.0);
    CHECK(report.between_bits == 1.0);
    for (const auto& g1 : report.groups) {
        REQUIRE(g1.children.has_value());
        CHECK(g1.children->between_bits == 1.0);
        for (const auto& g2 : g1.children->groups) {
            REQUIRE(g2.children.has_value());
            CHECK(g2.children->between_bits == 1.0);
        }
    }
    CHECK(flatten(report) == 3.0);
}

TEST_CASE("property: decompositions reproduce totals") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> size(2, 64);
    for (int trial = 0; trial < 300; ++trial) {
        const Axis x = axis("x", size(rng));
        const auto p = random_probabilities(rng, x.size(), true);
        const auto tree = random_tree(rng, x, 1 + trial % 4);
        for (std::size_t level = 1; level <= tree.depth(); ++level) {
            const auto report = theil_decompose(distribution({x}, p), tree, level);
            double sum = report.between_bits;
            for (const auto& g : report.groups) sum += g.share * g.within_bits;
            CHECK(std::abs(sum - h(p)) < 1e-9);
        }
        CHECK(std::abs(flatten(nested_decompose(distribution({x}, p), tree)) - h(p)) < 1e-9);
    }
}

TEST_CASE("kl divergence examples") {
    const auto p = vec({0.5, 0.5});
    CHECK(kl_divergence(p, p) == 0.0);
    CHECK(kl_divergence(vec({0.75, 0.25}), p) == doctest::Approx(0.18872).epsilon(1e-5));
    CHECK(std::abs(kl_divergence(vec({0.75, 0.25}), p) - (0.75 * std::log2(1.5) + 0.25 * std::log2(0.5))) < 1e-15);
    CHECK(error_code([] { kl_divergence(vec({0.5, 0.5}), vec({1.0, 0.0})); }) == ErrorCode::SupportViolation);
    CHECK(error_code([] { kl_divergence(vec({0.5, 0.5}), vec({0.2, 0.3, 0.5})); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("smoothing admits zero-support priors") {
    const double smoothed = kl_divergence(vec({0.5, 0.5}), vec({1.0, 0.0}), SupportPolicy::Smoothed);
    const double e = smoothing_epsilon;
    const std::vector<double> q{(0.5 + e) / (1 + 2 * e), (0.5 + e) / (1 + 2 * e)};
    const std::vector<double> p{(1.0 + e) / (1 + 2 * e), e / (1 + 2 * e)};
    CHECK(std::isfinite(smoothed));
    CHECK(std::abs(smoothed - kl(q, p)) < 1e-9);
}

TEST_CASE("kl decomposition examples") {
    const auto uniform = distribution({abcd}, {0.25, 0.25, 0.25, 0.25});
    const auto same = kl_decompose(uniform, uniform, pairs());
    CHECK(same.total_bits == 0.0);
    CHECK(same.between_bits == 0.0);
    for (const auto& g : same.groups) CHECK(g.within_bits == 0.0);

    const auto q = distribution({abcd}, {0.4, 0.4, 0.1, 0.1});
    const auto report = kl_decompose(q, uniform, pairs());
    CHECK(report.groups[0].within_bits == doctest::Approx(0.0));
    CHECK(report.groups[1].within_bits == doctest::Approx(0.0));
    CHECK(report.between_bits == doctest::Approx(0.27807).epsilon(1e-5));
    CHECK(std::abs(report.total_bits - report.between_bits) < 1e-12);

    const auto holes = distribution({abcd}, {0.5, 0.5, 0.0, 0.0});
    CHECK(error_code([&] { kl_decompose(uniform, holes, pairs()); }) == ErrorCode::SupportViolation);
}

TEST_CASE("property: kl decomposition identity") {
    std::mt19937_64 rng(24);
    std::uniform_int_distribution<std::size_t> size(2, 40);
    for (int trial = 0; trial < 300; ++trial) {
        const Axis x = axis("x", size(rng));
        const auto q = random_probabilities(rng, x.size(), true);
        const auto p = random_probabilities(rng, x.size());
        const auto grouping = random_flat_grouping(rng, x);
        const auto report = kl_decompose(distribution({x}, q), distribution({x}, p), grouping);
        double sum = report.between_bits;
        for (const auto& g : report.groups) sum += g.posterior_share * g.within_bits;
        CHECK(std::abs(sum - kl_divergence(distribution({x}, q), distribution({x}, p))) < 1e-9);
        CHECK(kl_divergence(distribution({x}, q), distribution({x}, p)) >= 0.0);
    }
}

TEST_CASE("mutual information examples") {
    const std::vector<Axis> xy{axis("x", 2), axis("y", 2)};
    CHECK(std::abs(mutual_information2(distribution(xy, {0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4}))) < 1e-12);
    CHECK(mutual_information2(distribution(xy, {0.5, 0.0, 0.0, 0.5})) == 1.0);
    const std::vector<double> p{0.4, 0.1, 0.1, 0.4};
    const double expected = 2 * h({0.5, 0.5}) - h(p);
    CHECK(std::abs(mutual_information2(distribution(xy, p)) - expected) < 1e-12);
    CHECK(mutual_information2(distribution(xy, p)) == doctest::Approx(0.27807).epsilon(1e-5));
    CHECK(error_code([] { mutual_information2(vec({0.5, 0.5})); }) == ErrorCode::WrongArity);
}

TEST_CASE("property: mutual information is non-negative") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t a = 2 + trial % 4, b = 2 + trial % 3;
        CHECK(mutual_information2(distribution({axis("x", a), axis("y", b)}, random_probabilities(rng, a * b, true))) >=
              -1e-12);
    }
}

TEST_CASE("interaction information examples and sign convention") {
    const std::vector<Axis> bits{axis("x", 2), axis("y", 2), axis("z", 2)};
    CHECK(std::abs(interaction_information3(distribution(bits, std::vector<double>(8, 0.125)))) < 1e-12);
    std::vector<double> xor_cells(8, 0.0);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) xor_cells[(a * 2 + b) * 2 + (a ^ b)] = 0.25;
    }
    CHECK(interaction_information3(distribution(bits, xor_cells)) == -1.0);
    std::vector<double> same(8, 0.0);
    same[0] = same[7] = 0.5;
    CHECK(interaction_information3(distribution(bits, same)) == 1.0);
    CHECK(error_code([] { interaction_information3(distribution({axis("x", 2), axis("y", 2)}, {0.25, 0.25, 0.25, 0.25})); }) ==
          ErrorCode::WrongArity);
}

TEST_CASE("property: interaction information matches enumeration on 2x2x2 and 3x3x3") {
    std::mt19937_64 rng(26);
    for (std::size_t n : {2u, 3u}) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto p = random_probabilities(rng, n * n * n, trial % 2 == 0);
            const double value = interaction_information3(distribution({axis("x", n), axis("y", n), axis("z", n)}, p));
            CHECK(std::abs(value - interaction_oracle(p, n, n, n)) < 1e-9);
        }
    }
}

TEST_CASE("property: measures are invariant under category permutation") {
    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 50; ++trial) {
        const auto cells = random_probabilities(rng, 12);
        std::vector<std::size_t> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> permuted(12);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 3; ++j) permuted[i * 3 + j] = cells[perm[i] * 3 + j];
        }
        const std::vector<Axis> axes{axis("x", 4), axis("y", 3)};
        CHECK(std::abs(shannon_entropy(distribution(axes, cells)) - shannon_entropy(distribution(axes, permuted))) < 1e-12);
        CHECK(std::abs(mutual_information2(distribution(axes, cells)) -
                       mutual_information2(distribution(axes, permuted))) < 1e-12);
        const auto prior = random_probabilities(rng, 12);
        std::vector<double> prior_permuted(12);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 3; ++j) prior_permuted[i * 3 + j] = prior[perm[i] * 3 + j];
        }
        CHECK(std::abs(kl_divergence(distribution(axes, cells), distribution(axes, prior)) -
                       kl_divergence(distribution(axes, permuted), distribution(axes, prior_permuted))) < 1e-12);
    }
}

TEST_CASE("transition information") {
    const auto half = vec({0.5, 0.5});
    const auto skew = vec({0.75, 0.25});
    const auto stationary = transition_information({half, half, half});
    REQUIRE(stationary.size() == 2);
    for (const auto& step : stationary) CHECK(step.bits == 0.0);

    const auto one = transition_information({half, skew});
    REQUIRE(one.size() == 1);
    CHECK(one[0].bits == doctest::Approx(0.18872).epsilon(1e-5));

    const auto third = vec({0.1, 0.9});
    const auto three = transition_information({half, skew, third}, std::nullopt, SupportPolicy::Strict,
                                              {"1999", "2000", "2001"});
    REQUIRE(three.size() == 2);
    CHECK(three[0].bits == kl_divergence(skew, half));
    CHECK(three[1].bits == kl_divergence(third, skew));
    CHECK(three[1].label == "2000->2001");

    const auto grouped = transition_information({distribution({abcd}, {0.25, 0.25, 0.25, 0.25}),
                                                 distribution({abcd}, {0.4, 0.4, 0.1, 0.1})},
                                                pairs());
    REQUIRE(grouped[0].decomposition.has_value());
    CHECK(grouped[0].decomposition->between_bits == doctest::Approx(0.27807).epsilon(1e-5));

    CHECK(error_code([&] { transition_information({half}); }) == ErrorCode::InvalidArgument);
    const auto point = vec({1.0, 0.0});
    std::string message;
    try {
        transition_information({half, half, point, half});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SupportViolation);
        message = e.what();
    }
    CHECK(message.find("step 2") != std::string::npos);
}

TEST_CASE("thermodynamic entropy") {
    CHECK(thermodynamic_entropy(0.0) == 0.0);
    CHECK(thermodynamic_entropy(1.0) == doctest::Approx(9.56994e-24).epsilon(1e-5));
    CHECK(thermodynamic_entropy(1.0) == boltzmann_constant * std::numbers::ln2);
    CHECK(thermodynamic_entropy(2.0) == 2.0 * thermodynamic_entropy(1.0));
    CHECK(thermodynamic_entropy_nats(1.0) == boltzmann_constant);
    CHECK(error_code([] { thermodynamic_entropy(-1.0); }) == ErrorCode::NegativeEntropy);
}
