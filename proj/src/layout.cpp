#include "scidyn/layout.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <random>

#include <Eigen/Dense>

#include "scidyn/error.hpp"

namespace scidyn {

namespace {

constexpr double reappear_jitter = 0.01;

struct CompensatedSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + compensation; }
};

struct FrameStress {
    double weighted = 0.0;
    double stress1 = 0.0;
};

FrameStress frame_stress(const DistanceMatrix& d, const std::function<std::span<const double>(std::size_t)>& point) {
    CompensatedSum weighted;
    CompensatedSum raw;
    CompensatedSum norm;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!d.reachable(i, j)) continue;
            const double target = d(i, j);
            const double actual = distance(point(i), point(j));
            const double residual = actual - target;
            weighted.add(residual * residual / (target * target));
            raw.add(residual * residual);
            norm.add(actual * actual);
        }
    }
    FrameStress out;
    out.weighted = weighted.value();
    const double num = raw.value();
    const double den = norm.value();
    if (den > 0.0) {
        out.stress1 = std::sqrt(num / den);
    } else {
        out.stress1 = num > 0.0 ? 1.0 : 0.0;
    }
    return out;
}

std::uint64_t jitter_seed(std::uint64_t seed, NodeId node, std::size_t t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(node), static_cast<std::uint32_t>(t), 0x6a177e5u};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

using Positions = std::vector<std::vector<double>>;

/// Seeded start in `dims` dimensions. A node returning after a gap starts
/// at its base position plus a small seeded jitter.
Positions seeded_start(const std::vector<DistanceMatrix>& distances, std::uint64_t seed, std::size_t dims) {
    Positions positions(distances.size());
    std::map<NodeId, std::size_t> last_seen;
    for (std::size_t t = 0; t < distances.size(); ++t) {
        const auto& nodes = distances[t].nodes();
        auto& x = positions[t];
        x.reserve(nodes.size() * dims);
        for (NodeId node : nodes) {
            std::vector<double> start = initial_position(seed, node, dims);
            auto seen = last_seen.find(node);
            if (seen != last_seen.end() && seen->second + 1 < t) {
                std::mt19937_64 rng(jitter_seed(seed, node, t));
                std::uniform_real_distribution<double> jitter(-reappear_jitter, reappear_jitter);
                for (double& c : start) c += jitter(rng);
            }
            x.insert(x.end(), start.begin(), start.end());
            last_seen[node] = t;
        }
    }
    return positions;
}

/// Rotates points onto their principal axes and keeps the leading `to`
/// coordinates. With `joint` all frames share one centre and rotation;
/// otherwise each frame is projected on its own.
Positions project(const Positions& positions, std::size_t from, std::size_t to, bool joint) {
    auto fit = [&](std::size_t first, std::size_t last) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(from));
        std::size_t count = 0;
        for (std::size_t t = first; t < last; ++t) {
            for (std::size_t k = 0; k < positions[t].size(); k += from) {
                mean += Eigen::Map<const Eigen::VectorXd>(positions[t].data() + k, static_cast<Eigen::Index>(from));
                ++count;
            }
        }
        if (count > 0) mean /= static_cast<double>(count);
        Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(from));
        for (std::size_t t = first; t < last; ++t) {
            for (std::size_t k = 0; k < positions[t].size(); k += from) {
                const Eigen::VectorXd c =
                    Eigen::Map<const Eigen::VectorXd>(positions[t].data() + k, static_cast<Eigen::Index>(from)) - mean;
                scatter += c * c.transpose();
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(scatter);
        // Eigenvalues ascend; take the last `to` columns, largest first.
        Eigen::MatrixXd axes = eigen.eigenvectors().rightCols(static_cast<Eigen::Index>(to)).rowwise().reverse();
        return std::pair{mean, axes};
    };
    Positions out(positions.size());
    auto apply = [&](std::size_t t, const Eigen::VectorXd& mean, const Eigen::MatrixXd& axes) {
        for (std::size_t k = 0; k < positions[t].size(); k += from) {
            const Eigen::VectorXd c =
                Eigen::Map<const Eigen::VectorXd>(positions[t].data() + k, static_cast<Eigen::Index>(from)) - mean;
            const Eigen::VectorXd p = axes.transpose() * c;
            out[t].insert(out[t].end(), p.data(), p.data() + p.size());
        }
    };
    if (joint) {
        const auto [mean, axes] = fit(0, positions.size());
        for (std::size_t t = 0; t < positions.size(); ++t) apply(t, mean, axes);
    } else {
        for (std::size_t t = 0; t < positions.size(); ++t) {
            const auto [mean, axes] = fit(t, t + 1);
            apply(t, mean, axes);
        }
    }
    return out;
}

/// Joint majorization over a sequence of frames. Each node update replaces
/// the node's position by the minimizer of the majorizing quadratic of S with
/// all other positions fixed, so S never increases.
class MajorizationSolver {
  public:
    MajorizationSolver(const std::vector<DistanceMatrix>& distances, const LayoutConfig& config,
                       Positions start, std::size_t prior_iterations = 0)
        : distances_(distances), config_(config), positions_(std::move(start)), iterations_(prior_iterations) {
        const std::size_t frames = distances.size();
        prev_.resize(frames);
        next_.resize(frames);

        std::vector<std::map<NodeId, std::size_t>> index(frames);
        for (std::size_t t = 0; t < frames; ++t) {
            const auto& nodes = distances[t].nodes();
            for (std::size_t k = 0; k < nodes.size(); ++k) index[t].emplace(nodes[k], k);
        }
        for (std::size_t t = 0; t < frames; ++t) {
            const auto& nodes = distances[t].nodes();
            prev_[t].assign(nodes.size(), npos);
            next_[t].assign(nodes.size(), npos);
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                if (t > 0) {
                    if (auto it = index[t - 1].find(nodes[k]); it != index[t - 1].end()) prev_[t][k] = it->second;
                }
                if (t + 1 < frames) {
                    if (auto it = index[t + 1].find(nodes[k]); it != index[t + 1].end()) next_[t][k] = it->second;
                }
            }
        }
    }

    void run() {
        if (config_.omega == 0.0) {
            run_decoupled();
            return;
        }
        double current = total();
        trace_.push_back(current);
        for (std::size_t sweep = 0; sweep < config_.max_iterations; ++sweep) {
            const std::size_t frames = distances_.size();
            for (std::size_t step = 0; step < frames; ++step) {
                const std::size_t t = sweep % 2 == 0 ? step : frames - 1 - step;
                for (std::size_t k = 0; k < distances_[t].size(); ++k) update(t, k);
            }
            const double next = total();
            trace_.push_back(next);
            ++iterations_;
            if (settled(current, next)) {
                converged_ = true;
                break;
            }
            current = next;
        }
    }

    StressReport report() const {
        StressReport out;
        CompensatedSum total_sum;
        for (std::size_t t = 0; t < distances_.size(); ++t) {
            const auto stress = frame_stress(distances_[t], [&](std::size_t k) { return point(t, k); });
            out.static_terms.push_back(stress.weighted);
            out.stress1.push_back(stress.stress1);
            total_sum.add(stress.weighted);
        }
        out.displacement = displacement();
        out.temporal_term = config_.omega * out.displacement;
        total_sum.add(out.temporal_term);
        out.total = total_sum.value();
        return out;
    }

    Layout layout(std::size_t t) const {
        return Layout{config_.dims, distances_[t].nodes(), positions_[t]};
    }

    const std::vector<double>& trace() const { return trace_; }
    const Positions& positions() const { return positions_; }
    std::size_t iterations() const { return iterations_; }
    SolverInfo info() const { return SolverInfo{iterations_, converged_, config_.omega, config_.seed}; }

  private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool settled(double before, double after) const {
        return after == 0.0 || before - after <= config_.relative_tolerance * before;
    }

    double frame_total(std::size_t t) const {
        return frame_stress(distances_[t], [&](std::size_t k) { return point(t, k); }).weighted;
    }

    /// Without temporal coupling every frame is its own problem and stops on
    /// its own criterion, exactly as a static run would.
    void run_decoupled() {
        const std::size_t frames = distances_.size();
        std::vector<double> current(frames);
        std::vector<bool> done(frames, false);
        for (std::size_t t = 0; t < frames; ++t) current[t] = frame_total(t);
        trace_.push_back(total());
        for (std::size_t sweep = 0; sweep < config_.max_iterations; ++sweep) {
            for (std::size_t t = 0; t < frames; ++t) {
                if (done[t]) continue;
                for (std::size_t k = 0; k < distances_[t].size(); ++k) update(t, k);
                const double next = frame_total(t);
                done[t] = settled(current[t], next);
                current[t] = next;
            }
            trace_.push_back(total());
            ++iterations_;
            if (std::all_of(done.begin(), done.end(), [](bool d) { return d; })) {
                converged_ = true;
                break;
            }
        }
    }

    std::span<const double> point(std::size_t t, std::size_t k) const {
        return {positions_[t].data() + k * config_.dims, config_.dims};
    }

    double displacement() const {
        CompensatedSum sum;
        for (std::size_t t = 0; t + 1 < distances_.size(); ++t) {
            for (std::size_t k = 0; k < distances_[t].size(); ++k) {
                if (next_[t][k] == npos) continue;
                const double step = distance(point(t, k), point(t + 1, next_[t][k]));
                sum.add(step * step);
            }
        }
        return sum.value();
    }

    double total() const {
        CompensatedSum sum;
        for (std::size_t t = 0; t < distances_.size(); ++t) {
            sum.add(frame_stress(distances_[t], [&](std::size_t k) { return point(t, k); }).weighted);
        }
        if (config_.omega > 0.0) sum.add(config_.omega * displacement());
        return sum.value();
    }

    void update(std::size_t t, std::size_t k) {
        const DistanceMatrix& d = distances_[t];
        const std::size_t dims = config_.dims;
        std::array<double, 4> numerator{};
        double denominator = 0.0;
        const auto xk = point(t, k);

        for (std::size_t j = 0; j < d.size(); ++j) {
            if (j == k || !d.reachable(k, j)) continue;
            const double target = d(k, j);
            const double weight = 1.0 / (target * target);
            const auto xj = point(t, j);
            const double actual = distance(xk, xj);
            for (std::size_t c = 0; c < dims; ++c) {
                double pull = xj[c];
                if (actual > 0.0) pull += target * (xk[c] - xj[c]) / actual;
                numerator[c] += weight * pull;
            }
            denominator += weight;
        }
        if (config_.omega > 0.0) {
            if (prev_[t][k] != npos) {
                const auto xp = point(t - 1, prev_[t][k]);
                for (std::size_t c = 0; c < dims; ++c) numerator[c] += config_.omega * xp[c];
                denominator += config_.omega;
            }
            if (next_[t][k] != npos) {
                const auto xn = point(t + 1, next_[t][k]);
                for (std::size_t c = 0; c < dims; ++c) numerator[c] += config_.omega * xn[c];
                denominator += config_.omega;
            }
        }
        if (denominator > 0.0) {
            double* out = positions_[t].data() + k * dims;
            for (std::size_t c = 0; c < dims; ++c) out[c] = numerator[c] / denominator;
        }
    }

    const std::vector<DistanceMatrix>& distances_;
    LayoutConfig config_;
    Positions positions_;
    std::vector<std::vector<std::size_t>> prev_;
    std::vector<std::vector<std::size_t>> next_;
    std::vector<double> trace_;
    std::size_t iterations_ = 0;
    bool converged_ = false;
};

/// Without a warm start the layout is first majorized one dimension higher
/// from the seeded start, then projected onto its principal axes and
/// majorized again in the requested dimension. Only the final stage is
/// traced.
MajorizationSolver solve(const std::vector<DistanceMatrix>& frames, const LayoutConfig& config,
                         const std::optional<Layout>& warm_start) {
    if (warm_start) {
        Positions start = seeded_start(frames, config.seed, config.dims);
        if (warm_start->dims == config.dims) {
            for (std::size_t t = 0; t < frames.size(); ++t) {
                const auto& nodes = frames[t].nodes();
                for (std::size_t k = 0; k < nodes.size(); ++k) {
                    if (auto i = warm_start->find(nodes[k])) {
                        auto p = warm_start->point(*i);
                        std::copy(p.begin(), p.end(), start[t].begin() + static_cast<std::ptrdiff_t>(k * config.dims));
                    }
                }
            }
        }
        MajorizationSolver solver(frames, config, std::move(start));
        solver.run();
        return solver;
    }
    LayoutConfig lifted = config;
    lifted.dims = config.dims + 1;
    MajorizationSolver coarse(frames, lifted, seeded_start(frames, config.seed, lifted.dims));
    coarse.run();
    MajorizationSolver solver(frames, config,
                              project(coarse.positions(), lifted.dims, config.dims, config.omega > 0.0),
                              coarse.iterations());
    solver.run();
    return solver;
}

}  // namespace

void LayoutConfig::validate() const {
    if (!(omega >= 0.0) || !std::isfinite(omega)) {
        throw Error(ErrorCode::InvalidArgument, "omega must be a non-negative number");
    }
    if (dims != 2 && dims != 3) throw Error(ErrorCode::InvalidArgument, "dims must be 2 or 3");
    if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
    if (!(relative_tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
}

std::optional<std::size_t> Layout::find(NodeId node) const {
    auto it = std::find(nodes.begin(), nodes.end(), node);
    if (it == nodes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin());
}

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double delta = a[c] - b[c];
        s += delta * delta;
    }
    return std::sqrt(s);
}

DistanceMatrix graph_distances(const GraphSlice& slice, DistanceTransform transform) {
    const auto& nodes = slice.present;
    const std::size_t n = nodes.size();
    if (n < 2) {
        throw Error(ErrorCode::EmptySlice, "slice " + slice.time + " has fewer than two nodes");
    }
    std::map<NodeId, std::size_t> local;
    for (std::size_t k = 0; k < n; ++k) local.emplace(nodes[k], k);

    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency(n);
    for (const auto& edge : slice.edges) {
        const double length = edge_dissimilarity(edge.weight, transform);
        const std::size_t a = local.at(edge.source);
        const std::size_t b = local.at(edge.target);
        adjacency[a].emplace_back(b, length);
        adjacency[b].emplace_back(a, length);
    }

    std::vector<double> values(n * n, DistanceMatrix::unreachable);
    using Item = std::pair<double, std::size_t>;
    for (std::size_t source = 0; source < n; ++source) {
        double* row = values.data() + source * n;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        row[source] = 0.0;
        queue.emplace(0.0, source);
        while (!queue.empty()) {
            auto [dist, v] = queue.top();
            queue.pop();
            if (dist > row[v]) continue;
            for (auto [w, length] : adjacency[v]) {
                if (dist + length < row[w]) {
                    row[w] = dist + length;
                    queue.emplace(row[w], w);
                }
            }
        }
    }
    // Summation order can differ between the two directions of a pair.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = std::min(values[i * n + j], values[j * n + i]);
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    return DistanceMatrix(nodes, std::move(values));
}

StressReport static_stress(const Layout& layout, const DistanceMatrix& distances) {
    std::vector<std::size_t> rows;
    for (NodeId node : distances.nodes()) {
        auto i = layout.find(node);
        if (!i) throw Error(ErrorCode::MissingPosition, "no position for node " + std::to_string(node));
        rows.push_back(*i);
    }
    const auto stress = frame_stress(distances, [&](std::size_t k) { return layout.point(rows[k]); });
    StressReport out;
    out.static_terms = {stress.weighted};
    out.stress1 = {stress.stress1};
    out.total = stress.weighted;
    return out;
}

std::vector<double> initial_position(std::uint64_t seed, NodeId node, std::size_t dims) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(node), static_cast<std::uint32_t>(node >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p(dims);
    for (double& c : p) c = unit(rng);
    return p;
}

StaticLayoutResult majorize_static(const DistanceMatrix& distances, const LayoutConfig& config,
                                   const std::optional<Layout>& warm_start) {
    config.validate();
    if (distances.size() < 2) throw Error(ErrorCode::EmptySlice, "layout needs at least two nodes");
    const std::vector<DistanceMatrix> frames{distances};
    const MajorizationSolver solver = solve(frames, config, warm_start);
    return StaticLayoutResult{solver.layout(0), solver.report(), solver.trace(), solver.info()};
}

DynamicLayoutResult majorize_dynamic(const std::vector<DistanceMatrix>& frames, const LayoutConfig& config,
                                     std::vector<std::string> time_labels,
                                     std::vector<std::string> node_ids) {
    config.validate();
    if (frames.empty()) throw Error(ErrorCode::EmptySeries, "no frames to lay out");
    if (time_labels.empty()) time_labels = numbered_labels(frames.size(), "");
    if (time_labels.size() != frames.size()) {
        throw Error(ErrorCode::LabelMismatch, "one time label per frame expected");
    }
    if (node_ids.empty()) {
        NodeId largest = 0;
        for (const auto& frame : frames) {
            for (NodeId node : frame.nodes()) largest = std::max(largest, node);
        }
        node_ids = numbered_labels(largest + 1, "");
    }

    const MajorizationSolver solver = solve(frames, config, std::nullopt);
    const StressReport stress = solver.report();

    AnimationTrack track;
    track.node_ids = std::move(node_ids);
    for (std::size_t t = 0; t < frames.size(); ++t) {
        track.slices.push_back(TrackSlice{time_labels[t], solver.layout(t), stress.static_terms[t],
                                          stress.stress1[t]});
    }
    track.temporal_stress = stress.temporal_term;
    track.total_stress = stress.total;
    track.solver = solver.info();
    return DynamicLayoutResult{std::move(track), stress, solver.trace()};
}

DynamicLayoutResult layout_graph(const TimeSlicedGraph& graph, const LayoutConfig& config) {
    std::vector<DistanceMatrix> frames;
    std::vector<std::string> labels;
    for (const auto& slice : graph.slices()) {
        frames.push_back(graph_distances(slice, config.transform));
        labels.push_back(slice.time);
    }
    std::vector<std::string> ids;
    for (const auto& node : graph.nodes()) ids.push_back(node.id);
    return majorize_dynamic(frames, config, std::move(labels), std::move(ids));
}

}  // namespace scidyn
