#include <algorithm>
#include <cmath>

#include "scidyn/error.hpp"
#include "scidyn/layout.hpp"

namespace scidyn {

namespace {

constexpr std::size_t max_power_iterations = 20000;
constexpr double power_tolerance = 1e-13;
constexpr double separation_tolerance = 1e-6;
constexpr double zero_eigenvalue = 1e-9;

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

std::vector<double> multiply(const std::vector<double>& matrix, const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out[i] += matrix[i * n + j] * v[j];
    }
    return out;
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Dominant eigenpair of a symmetric positive semi-definite matrix, started
/// from a fixed vector orthogonal to the eigenvectors already found.
EigenPair power_iteration(const std::vector<double>& matrix, std::size_t n,
                          const std::vector<EigenPair>& found) {
    std::vector<double> v(n);
    const double phase = 0.7 * static_cast<double>(found.size() + 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::cos(phase * static_cast<double>(i + 1));
    for (const auto& prior : found) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += v[i] * prior.vector[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * prior.vector[i];
    }
    double len = norm(v);
    if (len < 1e-12) {
        std::fill(v.begin(), v.end(), 0.0);
        v[found.size() % n] = 1.0;
        len = 1.0;
    }
    for (double& x : v) x /= len;

    double value = 0.0;
    for (std::size_t iter = 0; iter < max_power_iterations; ++iter) {
        auto w = multiply(matrix, v);
        len = norm(w);
        if (len == 0.0) return EigenPair{0.0, v};
        for (double& x : w) x /= len;
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(w[i] - v[i]));
        v = std::move(w);
        value = len;
        if (change < power_tolerance) break;
    }
    // Rayleigh quotient for the final estimate.
    const auto av = multiply(matrix, v);
    value = 0.0;
    for (std::size_t i = 0; i < n; ++i) value += v[i] * av[i];

    // Sign: largest-magnitude loading positive.
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(v[i]) > std::abs(v[pivot]) + 1e-12) pivot = i;
    }
    if (v[pivot] < 0.0) {
        for (double& x : v) x = -x;
    }
    return EigenPair{value, v};
}

}  // namespace

std::vector<double> column_correlation(const ContingencyTensor& table) {
    if (table.rank() != 2) throw Error(ErrorCode::WrongArity, "correlation needs a two-axis table");
    const std::size_t rows = table.axes()[0].size();
    const std::size_t cols = table.axes()[1].size();
    if (rows < 2) throw Error(ErrorCode::InvalidArgument, "correlation needs at least two observations");

    const auto values = table.values();
    std::vector<double> mean(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) mean[c] += values[r * cols + c];
    }
    for (double& m : mean) m /= static_cast<double>(rows);

    std::vector<double> cov(cols * cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t a = 0; a < cols; ++a) {
            const double da = values[r * cols + a] - mean[a];
            for (std::size_t b = 0; b < cols; ++b) cov[a * cols + b] += da * (values[r * cols + b] - mean[b]);
        }
    }
    std::vector<double> corr(cols * cols, 0.0);
    for (std::size_t a = 0; a < cols; ++a) {
        for (std::size_t b = 0; b < cols; ++b) {
            const double denom = std::sqrt(cov[a * cols + a] * cov[b * cols + b]);
            if (a == b) {
                corr[a * cols + b] = 1.0;
            } else if (denom > 0.0) {
                corr[a * cols + b] = std::clamp(cov[a * cols + b] / denom, -1.0, 1.0);
            }
        }
    }
    return corr;
}

std::vector<Construct> eigenvector_overlay(const ContingencyTensor& table,
                                           const std::map<std::string, Point2>& positions,
                                           std::size_t k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "at least one component requested");
    auto matrix = column_correlation(table);
    const auto& variables = table.axes()[1].categories;
    const std::size_t n = variables.size();
    for (const auto& name : variables) {
        if (!positions.contains(name)) {
            throw Error(ErrorCode::MissingPosition, "no position for variable '" + name + "'");
        }
    }
    k = std::min(k, n);

    // One extra pair so the last requested eigenvalue can be checked for a tie.
    std::vector<EigenPair> pairs;
    for (std::size_t m = 0; m < std::min(k + 1, n); ++m) {
        auto pair = power_iteration(matrix, n, pairs);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                matrix[i * n + j] -= pair.value * pair.vector[i] * pair.vector[j];
            }
        }
        pairs.push_back(std::move(pair));
    }

    auto tied = [&](std::size_t a, std::size_t b) {
        const double scale = std::max(1.0, std::abs(pairs[a].value));
        return std::abs(pairs[a].value - pairs[b].value) < separation_tolerance * scale;
    };

    std::vector<Construct> constructs;
    for (std::size_t m = 0; m < k; ++m) {
        Construct c;
        c.label = "PC" + std::to_string(m + 1);
        c.eigenvalue = pairs[m].value;
        c.rank_deficient = pairs[m].value <= zero_eigenvalue * static_cast<double>(n);
        c.degenerate = (m > 0 && tied(m, m - 1)) || (m + 1 < pairs.size() && tied(m, m + 1));

        double weight_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double loading = pairs[m].vector[i];
            c.loadings.emplace_back(variables[i], loading);
            const double w = loading * loading;
            const auto& p = positions.at(variables[i]);
            c.position[0] += w * p[0];
            c.position[1] += w * p[1];
            weight_sum += w;
        }
        if (weight_sum > 0.0) {
            c.position[0] /= weight_sum;
            c.position[1] /= weight_sum;
        }
        constructs.push_back(std::move(c));
    }
    return constructs;
}

}  // namespace scidyn
