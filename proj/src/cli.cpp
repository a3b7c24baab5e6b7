#include "scidyn/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "scidyn/centrality.hpp"
#include "scidyn/csv.hpp"
#include "scidyn/entropy.hpp"
#include "scidyn/error.hpp"
#include "scidyn/layout.hpp"
#include "scidyn/render.hpp"
#include "scidyn/report_json.hpp"

namespace scidyn {

namespace {

using nlohmann::json;

constexpr std::uint64_t default_seed = 42;

struct Options {
    std::string input;
    std::string prior;
    std::string grouping;
    std::string presence;
    std::string out;
    std::string out_dir;
    std::string time_axis = "time";
    std::string transform = "reciprocal";
    std::string smoothing = "off";
    std::string radius_rule = "fixed";
    std::string color_rule = "betweenness";
    std::optional<std::size_t> level;
    std::optional<std::uint64_t> seed;
    double omega = 1.0;
    std::size_t dims = 2;
    std::size_t max_iterations = 500;
    std::size_t interpolation_steps = 10;
    double spike_threshold = default_spike_threshold;
    bool weighted = false;
    bool no_labels = false;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const Options& options) {
    if (options.seed) return *options.seed;
    const char* env = std::getenv("SCIDYN_SEED");
    if (env == nullptr || *env == '\0') return default_seed;
    std::uint64_t value = 0;
    const char* last = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, last, value);
    if (ec != std::errc{} || ptr != last) throw UsageError("SCIDYN_SEED is not an unsigned integer: " + std::string(env));
    return value;
}

SupportPolicy support_policy(const Options& options) {
    return options.smoothing == "epsilon" ? SupportPolicy::Smoothed : SupportPolicy::Strict;
}

DistanceTransform distance_transform(const Options& options) {
    auto transform = parse_distance_transform(options.transform);
    if (!transform) throw UsageError("unknown transform '" + options.transform + "'");
    return *transform;
}

std::optional<GroupingTree> load_grouping(const Options& options) {
    if (options.grouping.empty()) return std::nullopt;
    return parse_grouping(std::filesystem::path(options.grouping));
}

ProbabilityDistribution load_distribution(const std::string& path) {
    return normalize(parse_contingency_csv(std::filesystem::path(path)));
}

TimeSlicedGraph load_graph(const Options& options) {
    std::optional<std::filesystem::path> presence;
    if (!options.presence.empty()) presence = options.presence;
    return parse_timesliced_edges(std::filesystem::path(options.input), presence);
}

LayoutConfig layout_config(const Options& options) {
    LayoutConfig config;
    config.omega = options.omega;
    config.dims = options.dims;
    config.max_iterations = options.max_iterations;
    config.seed = resolve_seed(options);
    config.transform = distance_transform(options);
    return config;
}

/// Splits a count tensor along `axis` into one distribution per category,
/// in time-label order.
std::pair<std::vector<ProbabilityDistribution>, std::vector<std::string>> split_series(
    const ContingencyTensor& tensor, const std::string& axis) {
    const std::size_t time = tensor.axis_index(axis);
    if (tensor.rank() < 2) throw Error(ErrorCode::WrongArity, "a time series needs at least one axis besides '" + axis + "'");
    std::vector<Axis> rest;
    for (std::size_t a = 0; a < tensor.rank(); ++a) {
        if (a != time) rest.push_back(tensor.axes()[a]);
    }
    const Axis& time_axis = tensor.axes()[time];
    std::vector<std::vector<Cell>> cells(time_axis.size());
    tensor.for_each_nonzero([&](std::size_t linear, double value) {
        auto index = tensor.unravel(linear);
        const std::size_t t = index[time];
        index.erase(index.begin() + static_cast<std::ptrdiff_t>(time));
        cells[t].push_back(Cell{std::move(index), value});
    });
    std::vector<std::string> labels = time_axis.categories;
    order_time_labels(labels);
    std::vector<ProbabilityDistribution> series;
    for (const auto& label : labels) {
        const std::size_t t = time_axis.index_of(label);
        try {
            series.push_back(normalize(ContingencyTensor::from_cells(rest, cells[t])));
        } catch (const Error& e) {
            throw Error(e.code(), "time '" + label + "': " + e.what());
        }
    }
    return {std::move(series), std::move(labels)};
}

void emit(const json& doc, const Options& options, std::ostream& out) {
    if (options.out.empty()) {
        out << dump_report(doc);
    } else {
        export_json(doc, options.out);
    }
}

json run_entropy(const Options& options) {
    const auto dist = load_distribution(options.input);
    const double bits = shannon_entropy(dist);
    json axes = json::array();
    for (const auto& axis : dist.axes()) axes.push_back(axis.name);
    return tagged("entropy", json{{"bits", bits},
                                  {"axes", std::move(axes)},
                                  {"thermodynamic_j_per_k", thermodynamic_entropy(bits)}});
}

json run_decompose(const Options& options) {
    const auto dist = load_distribution(options.input);
    const auto grouping = load_grouping(options);
    if (!grouping) throw UsageError("decompose requires --grouping");
    if (options.level) return tagged("decomposition", to_json(theil_decompose(dist, *grouping, *options.level)));
    return tagged("decomposition", to_json(nested_decompose(dist, *grouping)));
}

json run_kl(const Options& options) {
    const auto posterior = load_distribution(options.input);
    const auto prior = load_distribution(options.prior);
    const auto policy = support_policy(options);
    json body{{"bits", kl_divergence(posterior, prior, policy)}, {"smoothing", options.smoothing}};
    if (const auto grouping = load_grouping(options)) {
        body["decomposition"] = to_json(kl_decompose(posterior, prior, *grouping, policy, options.level.value_or(1)));
    }
    return tagged("divergence", std::move(body));
}

json run_mutual_info(const Options& options) {
    return tagged("mutual_information", json{{"bits", mutual_information2(load_distribution(options.input))}});
}

json run_triple_helix(const Options& options) {
    return tagged("interaction_information",
                  json{{"bits", interaction_information3(load_distribution(options.input))}});
}

json run_transition(const Options& options) {
    const auto tensor = parse_contingency_csv(std::filesystem::path(options.input));
    auto [series, labels] = split_series(tensor, options.time_axis);
    const auto steps = transition_information(series, load_grouping(options), support_policy(options), labels);
    return tagged("transition", json{{"steps", to_json(steps)}, {"times", labels}});
}

json run_layout(const Options& options) {
    const auto graph = load_graph(options);
    const auto result = layout_graph(graph, layout_config(options));
    json doc = to_json(result.track);
    doc["stress"] = to_json(result.stress);
    doc["transform"] = options.transform;
    return tagged("track", std::move(doc));
}

json run_animate(const Options& options) {
    const auto graph = load_graph(options);
    const auto result = layout_graph(graph, layout_config(options));
    RenderSpec spec;
    spec.interpolation_steps = options.interpolation_steps;
    spec.radius_rule = options.radius_rule == "sqrt-degree" || options.radius_rule == "sqrt-betweenness"
                           ? RadiusRule::SqrtAttribute
                           : RadiusRule::Fixed;
    spec.radius_attribute = options.radius_rule == "sqrt-betweenness" ? NodeAttribute::Betweenness
                                                                       : NodeAttribute::Degree;
    spec.color_rule = options.color_rule == "fixed" ? ColorRule::Fixed : ColorRule::Betweenness;
    spec.labels = options.no_labels ? LabelRule::None : LabelRule::All;
    const std::size_t frames = render_animation(result.track, graph, spec, options.out_dir);
    return tagged("animation", json{{"frames", frames},
                                    {"slices", graph.slice_count()},
                                    {"interpolation_steps", spec.interpolation_steps},
                                    {"animation", "animation.svg"},
                                    {"track", to_json(result.track)}});
}

json run_betweenness(const Options& options) {
    const auto graph = load_graph(options);
    const auto series = centrality_series(graph, options.spike_threshold, options.weighted, distance_transform(options));
    json doc = to_json(series, graph);
    doc["weighted"] = options.weighted;
    doc["spike_threshold"] = options.spike_threshold;
    return tagged("betweenness", std::move(doc));
}

void add_input(CLI::App* cmd, Options& o, const std::string& what) {
    cmd->add_option("--input", o.input, what)->required();
}

void add_grouping(CLI::App* cmd, Options& o, bool required) {
    auto* opt = cmd->add_option("--grouping", o.grouping, "Grouping CSV (category, level1, level2, ...)");
    if (required) opt->required();
}

void add_out(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out, "Write the JSON report here instead of stdout");
}

void add_smoothing(CLI::App* cmd, Options& o) {
    cmd->add_option("--smoothing", o.smoothing, "Zero-support handling")
        ->check(CLI::IsMember({"off", "epsilon"}))
        ->capture_default_str();
}

void add_graph_input(CLI::App* cmd, Options& o) {
    add_input(cmd, o, "Edge list CSV (time, source, target, weight)");
    cmd->add_option("--presence", o.presence, "Presence CSV (time, node) for isolated nodes");
}

void add_transform(CLI::App* cmd, Options& o) {
    cmd->add_option("--transform", o.transform, "Edge weight to dissimilarity")
        ->check(CLI::IsMember({"explicit", "reciprocal", "reciprocal-weight", "one-minus-cosine"}))
        ->capture_default_str();
}

void add_layout_flags(CLI::App* cmd, Options& o) {
    add_transform(cmd, o);
    cmd->add_option("--omega", o.omega, "Temporal coupling weight")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--seed", o.seed, "Seed for initial positions (overrides SCIDYN_SEED)");
    cmd->add_option("--dims", o.dims, "Layout dimension")->check(CLI::IsMember({2, 3}))->capture_default_str();
    cmd->add_option("--max-iterations", o.max_iterations, "Sweep limit")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Information-theoretic and dynamic network analysis", "scidyn"};
    app.require_subcommand(1, 1);
    app.fallthrough(false);
    Options o;

    auto* entropy = app.add_subcommand("entropy", "Shannon entropy of a count table");
    add_input(entropy, o, "Count table CSV (axis columns..., count)");
    add_out(entropy, o);

    auto* decompose = app.add_subcommand("decompose", "Between/within entropy decomposition");
    add_input(decompose, o, "Count table CSV over one axis");
    add_grouping(decompose, o, true);
    decompose->add_option("--level", o.level, "Decompose at one level instead of the whole hierarchy")
        ->check(CLI::PositiveNumber);
    add_out(decompose, o);

    auto* kl = app.add_subcommand("kl", "Expected information content of a posterior against a prior");
    add_input(kl, o, "Posterior count table CSV");
    kl->add_option("--prior", o.prior, "Prior count table CSV")->required();
    add_grouping(kl, o, false);
    kl->add_option("--level", o.level, "Grouping level for the decomposition")->check(CLI::PositiveNumber);
    add_smoothing(kl, o);
    add_out(kl, o);

    auto* mutual = app.add_subcommand("mutual-info", "Two-way mutual information");
    add_input(mutual, o, "Two-axis count table CSV");
    add_out(mutual, o);

    auto* triple = app.add_subcommand("triple-helix", "Three-way interaction information");
    add_input(triple, o, "Three-axis count table CSV");
    add_out(triple, o);

    auto* transition = app.add_subcommand("transition", "Information between consecutive time slices");
    add_input(transition, o, "Count table CSV with a time axis");
    transition->add_option("--time-axis", o.time_axis, "Name of the time axis")->capture_default_str();
    add_grouping(transition, o, false);
    add_smoothing(transition, o);
    add_out(transition, o);

    auto* layout = app.add_subcommand("layout", "Dynamic stress-majorization layout");
    add_graph_input(layout, o);
    add_layout_flags(layout, o);
    add_out(layout, o);

    auto* animate = app.add_subcommand("animate", "Layout plus SVG frames and a SMIL animation");
    add_graph_input(animate, o);
    add_layout_flags(animate, o);
    animate->add_option("--out-dir", o.out_dir, "Directory for frame_%05d.svg and animation.svg")->required();
    animate->add_option("--interpolation-steps", o.interpolation_steps, "Frames per transition")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    animate->add_option("--radius", o.radius_rule, "Node radius rule")
        ->check(CLI::IsMember({"fixed", "sqrt-degree", "sqrt-betweenness"}))
        ->capture_default_str();
    animate->add_option("--color", o.color_rule, "Node color rule")
        ->check(CLI::IsMember({"fixed", "betweenness"}))
        ->capture_default_str();
    animate->add_flag("--no-labels", o.no_labels, "Hide node labels");
    add_out(animate, o);

    auto* betweenness = app.add_subcommand("betweenness", "Betweenness centrality per slice with spike flags");
    add_graph_input(betweenness, o);
    add_transform(betweenness, o);
    betweenness->add_flag("--weighted", o.weighted, "Use weighted shortest paths");
    betweenness->add_option("--spike-threshold", o.spike_threshold, "Normalized rise that flags a broker")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_out(betweenness, o);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const auto* selected = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        out << selected->help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    const std::map<const CLI::App*, json (*)(const Options&)> handlers{
        {entropy, run_entropy},       {decompose, run_decompose},   {kl, run_kl},
        {mutual, run_mutual_info},    {triple, run_triple_helix},   {transition, run_transition},
        {layout, run_layout},         {animate, run_animate},       {betweenness, run_betweenness},
    };
    const CLI::App* selected = app.get_subcommands().front();
    try {
        emit(handlers.at(selected)(o), o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << selected->help();
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
    return exit_ok;
}

}  // namespace scidyn
