#include "scidyn/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "scidyn/centrality.hpp"
#include "scidyn/error.hpp"

namespace scidyn {

namespace {

using EdgeKey = std::pair<NodeId, NodeId>;

struct NodeView {
    bool present = false;
    double x = 0.0;
    double y = 0.0;
    double radius = 0.0;
    double heat = 0.0;
};

struct Scene {
    std::vector<std::vector<NodeView>> slices;
    std::vector<std::set<EdgeKey>> edges;
};

std::string fixed(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", v);
    std::string s(buffer);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string fraction(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", v);
    return buffer;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string heat_color(double heat, const RenderSpec& spec) {
    if (spec.color_rule == ColorRule::Fixed) return spec.fixed_color;
    const double cold[3] = {198.0, 219.0, 239.0};
    const double hot[3] = {8.0, 48.0, 107.0};
    char buffer[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(cold[c] + (hot[c] - cold[c]) * heat));
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buffer;
}

void check_consistency(const AnimationTrack& track, const TimeSlicedGraph& graph) {
    if (track.slices.size() != graph.slice_count()) {
        throw Error(ErrorCode::LabelMismatch, "track and graph have different slice counts");
    }
    if (track.node_ids.size() != graph.nodes().size()) {
        throw Error(ErrorCode::LabelMismatch, "track and graph have different node universes");
    }
    for (NodeId i = 0; i < track.node_ids.size(); ++i) {
        if (track.node_ids[i] != graph.nodes()[i].id) {
            throw Error(ErrorCode::LabelMismatch, "node '" + track.node_ids[i] + "' not in graph at that index");
        }
    }
    for (std::size_t t = 0; t < track.slices.size(); ++t) {
        if (track.slices[t].time != graph.slice(t).time) {
            throw Error(ErrorCode::LabelMismatch, "slice label '" + track.slices[t].time + "' differs from '" +
                                                      graph.slice(t).time + "'");
        }
        auto nodes = track.slices[t].layout.nodes;
        std::sort(nodes.begin(), nodes.end());
        if (nodes != graph.slice(t).present) {
            throw Error(ErrorCode::LabelMismatch, "positions at " + graph.slice(t).time +
                                                      " do not match the present nodes");
        }
    }
}

Scene build_scene(const AnimationTrack& track, const TimeSlicedGraph& graph, const RenderSpec& spec) {
    check_consistency(track, graph);
    const CanvasMap map = CanvasMap::fit(track, spec);
    const std::size_t n = graph.nodes().size();

    Scene scene;
    std::vector<std::vector<double>> attribute(track.slices.size(), std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> heat(track.slices.size(), std::vector<double>(n, 0.0));
    double max_attribute = 0.0;
    double max_heat = 0.0;
    for (std::size_t t = 0; t < track.slices.size(); ++t) {
        const auto& slice = graph.slice(t);
        std::set<EdgeKey> edges;
        std::vector<double> degree(n, 0.0);
        for (const auto& e : slice.edges) {
            edges.emplace(std::min(e.source, e.target), std::max(e.source, e.target));
            degree[e.source] += 1.0;
            degree[e.target] += 1.0;
        }
        scene.edges.push_back(std::move(edges));
        NodeValues betweenness;
        if (!slice.present.empty()) betweenness = normalize_betweenness(betweenness_centrality(slice, false));
        for (const auto& [node, value] : betweenness) {
            heat[t][node] = value;
            max_heat = std::max(max_heat, value);
        }
        for (NodeId node : slice.present) {
            attribute[t][node] = spec.radius_attribute == NodeAttribute::Degree ? degree[node] : betweenness[node];
            max_attribute = std::max(max_attribute, attribute[t][node]);
        }
    }

    for (std::size_t t = 0; t < track.slices.size(); ++t) {
        const Layout& layout = track.slices[t].layout;
        std::vector<NodeView> views(n);
        for (std::size_t k = 0; k < layout.size(); ++k) {
            const NodeId node = layout.nodes[k];
            const auto p = layout.point(k);
            auto [x, y] = map(p[0], p[1]);
            NodeView& view = views[node];
            view.present = true;
            view.x = x;
            view.y = y;
            view.heat = max_heat > 0.0 ? heat[t][node] / max_heat : 0.0;
            if (spec.radius_rule == RadiusRule::Fixed || max_attribute <= 0.0) {
                view.radius = spec.radius;
            } else {
                view.radius = std::max(1.5, spec.radius * std::sqrt(attribute[t][node] / max_attribute));
            }
        }
        scene.slices.push_back(std::move(views));
    }
    return scene;
}

std::string svg_open(const RenderSpec& spec) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"#ffffff\"/>\n";
    return out.str();
}

double lerp(double a, double b, double alpha) { return a + (b - a) * alpha; }

/// One frame between slice t (alpha = 0) and slice t + 1 (alpha = 1).
std::string frame_svg(const Scene& scene, const AnimationTrack& track, const TimeSlicedGraph& graph,
                      const RenderSpec& spec, std::size_t t, double alpha) {
    const bool last = t + 1 >= scene.slices.size();
    const auto& from = scene.slices[t];
    const auto& to = last ? from : scene.slices[t + 1];
    const std::size_t n = from.size();

    std::vector<NodeView> views(n);
    std::vector<double> opacity(n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        if (from[i].present && to[i].present) {
            views[i] = NodeView{true, lerp(from[i].x, to[i].x, alpha), lerp(from[i].y, to[i].y, alpha),
                                lerp(from[i].radius, to[i].radius, alpha), lerp(from[i].heat, to[i].heat, alpha)};
            opacity[i] = 1.0;
        } else if (from[i].present) {
            views[i] = from[i];
            opacity[i] = 1.0 - alpha;
        } else if (to[i].present) {
            views[i] = to[i];
            opacity[i] = alpha;
        }
    }

    std::ostringstream out;
    out << svg_open(spec);
    std::string caption = track.slices[t].time;
    if (!last && alpha > 0.0) caption += " -> " + track.slices[t + 1].time;
    out << "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << escape(caption) << "</text>\n";

    out << "<g id=\"edges\" stroke=\"#888888\" stroke-width=\"1\">\n";
    std::set<EdgeKey> edges = scene.edges[t];
    if (!last) edges.insert(scene.edges[t + 1].begin(), scene.edges[t + 1].end());
    for (const auto& [a, b] : edges) {
        const bool in_from = scene.edges[t].contains({a, b});
        const bool in_to = last ? in_from : scene.edges[t + 1].contains({a, b});
        const double fade = in_from && in_to ? 1.0 : (in_from ? 1.0 - alpha : alpha);
        const double edge_opacity = 0.6 * fade * std::min(opacity[a], opacity[b]);
        out << "<line x1=\"" << fixed(views[a].x) << "\" y1=\"" << fixed(views[a].y) << "\" x2=\""
            << fixed(views[b].x) << "\" y2=\"" << fixed(views[b].y) << "\" stroke-opacity=\""
            << fraction(edge_opacity) << "\"/>\n";
    }
    out << "</g>\n<g id=\"nodes\">\n";
    for (NodeId i = 0; i < n; ++i) {
        if (!views[i].present) continue;
        const auto& id = graph.nodes()[i].id;
        out << "<circle class=\"node\" cx=\"" << fixed(views[i].x) << "\" cy=\"" << fixed(views[i].y)
            << "\" r=\"" << fixed(views[i].radius) << "\" fill=\"" << heat_color(views[i].heat, spec)
            << "\" opacity=\"" << fraction(opacity[i]) << "\"><title>" << escape(id) << "</title></circle>\n";
        if (spec.labels == LabelRule::All) {
            out << "<text x=\"" << fixed(views[i].x + views[i].radius + 2.0) << "\" y=\"" << fixed(views[i].y)
                << "\" font-family=\"sans-serif\" font-size=\"10\" opacity=\"" << fraction(opacity[i]) << "\">"
                << escape(graph.nodes()[i].label) << "</text>\n";
        }
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

/// Per-slice values for one node, holding the nearest present value across
/// gaps so that absent stretches do not drift.
template <typename Get>
std::vector<std::string> held_values(const Scene& scene, NodeId node, Get get) {
    const std::size_t slices = scene.slices.size();
    std::vector<std::string> values(slices);
    std::size_t first = slices;
    for (std::size_t t = 0; t < slices; ++t) {
        if (scene.slices[t][node].present) {
            first = t;
            break;
        }
    }
    if (first == slices) return values;
    std::string held = get(scene.slices[first][node]);
    for (std::size_t t = 0; t < slices; ++t) {
        if (scene.slices[t][node].present) held = get(scene.slices[t][node]);
        values[t] = held;
    }
    return values;
}

std::string join(const std::vector<std::string>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ';';
        out += values[i];
    }
    return out;
}

}  // namespace

void RenderSpec::validate() const {
    if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidArgument, "canvas size must be positive");
    if (interpolation_steps < 1) throw Error(ErrorCode::InvalidArgument, "interpolation_steps must be >= 1");
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    if (!(margin >= 0.0) || 2.0 * margin >= std::min(width, height)) {
        throw Error(ErrorCode::InvalidArgument, "margin does not fit the canvas");
    }
    if (!(seconds_per_transition > 0.0)) throw Error(ErrorCode::InvalidArgument, "duration must be positive");
}

std::size_t frame_count(std::size_t slices, std::size_t interpolation_steps) {
    return slices == 0 ? 0 : (slices - 1) * interpolation_steps + 1;
}

CanvasMap CanvasMap::fit(const AnimationTrack& track, const RenderSpec& spec) {
    double min_x = INFINITY, min_y = INFINITY, max_x = -INFINITY, max_y = -INFINITY;
    for (const auto& slice : track.slices) {
        for (std::size_t k = 0; k < slice.layout.size(); ++k) {
            const auto p = slice.layout.point(k);
            min_x = std::min(min_x, p[0]);
            max_x = std::max(max_x, p[0]);
            min_y = std::min(min_y, p[1]);
            max_y = std::max(max_y, p[1]);
        }
    }
    CanvasMap map;
    if (!std::isfinite(min_x)) return map;
    const double usable_w = spec.width - 2.0 * spec.margin;
    const double usable_h = spec.height - 2.0 * spec.margin;
    const double span_x = max_x - min_x;
    const double span_y = max_y - min_y;
    double scale = 1.0;
    if (span_x > 0.0 || span_y > 0.0) {
        scale = std::min(span_x > 0.0 ? usable_w / span_x : INFINITY, span_y > 0.0 ? usable_h / span_y : INFINITY);
    }
    map.min_x = min_x;
    map.min_y = min_y;
    map.scale = scale;
    map.offset_x = spec.margin + (usable_w - span_x * scale) / 2.0;
    map.offset_y = spec.margin + (usable_h - span_y * scale) / 2.0;
    return map;
}

std::pair<double, double> CanvasMap::operator()(double x, double y) const {
    return {offset_x + (x - min_x) * scale, offset_y + (y - min_y) * scale};
}

std::vector<std::string> render_frames(const AnimationTrack& track, const TimeSlicedGraph& graph,
                                       const RenderSpec& spec) {
    spec.validate();
    const Scene scene = build_scene(track, graph, spec);
    std::vector<std::string> frames;
    const std::size_t slices = scene.slices.size();
    if (slices == 0) return frames;
    for (std::size_t t = 0; t + 1 < slices; ++t) {
        for (std::size_t step = 0; step < spec.interpolation_steps; ++step) {
            const double alpha = static_cast<double>(step) / static_cast<double>(spec.interpolation_steps);
            frames.push_back(frame_svg(scene, track, graph, spec, t, alpha));
        }
    }
    frames.push_back(frame_svg(scene, track, graph, spec, slices - 1, 0.0));
    return frames;
}

std::string render_smil(const AnimationTrack& track, const TimeSlicedGraph& graph, const RenderSpec& spec) {
    spec.validate();
    const Scene scene = build_scene(track, graph, spec);
    const std::size_t slices = scene.slices.size();
    const bool animated = slices > 1;
    const std::size_t n = graph.nodes().size();

    std::vector<std::string> key_times;
    for (std::size_t t = 0; t < slices; ++t) {
        key_times.push_back(fraction(animated ? static_cast<double>(t) / static_cast<double>(slices - 1) : 0.0));
    }
    char duration[32];
    std::snprintf(duration, sizeof(duration), "%gs",
                  spec.seconds_per_transition * static_cast<double>(slices > 1 ? slices - 1 : 1));
    const std::string timing = "keyTimes=\"" + join(key_times) + "\" dur=\"" + duration +
                               "\" calcMode=\"linear\" repeatCount=\"indefinite\"";
    auto animate = [&](const std::string& attribute, const std::vector<std::string>& values) {
        return "<animate attributeName=\"" + attribute + "\" values=\"" + join(values) + "\" " + timing + "/>";
    };

    std::vector<std::vector<std::string>> xs(n), ys(n), rs(n), fills(n), opacities(n);
    for (NodeId i = 0; i < n; ++i) {
        xs[i] = held_values(scene, i, [](const NodeView& v) { return fixed(v.x); });
        ys[i] = held_values(scene, i, [](const NodeView& v) { return fixed(v.y); });
        rs[i] = held_values(scene, i, [](const NodeView& v) { return fixed(v.radius); });
        fills[i] = held_values(scene, i, [&](const NodeView& v) { return heat_color(v.heat, spec); });
        for (std::size_t t = 0; t < slices; ++t) opacities[i].push_back(scene.slices[t][i].present ? "1" : "0");
    }

    std::ostringstream out;
    out << svg_open(spec);
    out << "<g id=\"edges\" stroke=\"#888888\" stroke-width=\"1\">\n";
    std::set<EdgeKey> all_edges;
    for (const auto& edges : scene.edges) all_edges.insert(edges.begin(), edges.end());
    for (const auto& [a, b] : all_edges) {
        std::vector<std::string> visible;
        for (std::size_t t = 0; t < slices; ++t) visible.push_back(scene.edges[t].contains({a, b}) ? "0.6" : "0");
        out << "<line x1=\"" << xs[a][0] << "\" y1=\"" << ys[a][0] << "\" x2=\"" << xs[b][0] << "\" y2=\""
            << ys[b][0] << "\" stroke-opacity=\"" << visible[0] << "\">";
        if (animated) {
            out << animate("x1", xs[a]) << animate("y1", ys[a]) << animate("x2", xs[b]) << animate("y2", ys[b])
                << animate("stroke-opacity", visible);
        }
        out << "</line>\n";
    }
    out << "</g>\n<g id=\"nodes\">\n";
    for (NodeId i = 0; i < n; ++i) {
        if (xs[i].empty() || xs[i][0].empty()) continue;
        out << "<circle class=\"node\" cx=\"" << xs[i][0] << "\" cy=\"" << ys[i][0] << "\" r=\"" << rs[i][0]
            << "\" fill=\"" << fills[i][0] << "\" opacity=\"" << opacities[i][0] << "\"><title>"
            << escape(graph.nodes()[i].id) << "</title>";
        if (animated) {
            out << animate("cx", xs[i]) << animate("cy", ys[i]) << animate("r", rs[i]) << animate("fill", fills[i])
                << animate("opacity", opacities[i]);
        }
        out << "</circle>\n";
        if (spec.labels == LabelRule::All) {
            out << "<text x=\"" << xs[i][0] << "\" y=\"" << ys[i][0]
                << "\" dx=\"8\" font-family=\"sans-serif\" font-size=\"10\" opacity=\"" << opacities[i][0] << "\">"
                << escape(graph.nodes()[i].label);
            if (animated) out << animate("x", xs[i]) << animate("y", ys[i]) << animate("opacity", opacities[i]);
            out << "</text>\n";
        }
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

std::size_t render_animation(const AnimationTrack& track, const TimeSlicedGraph& graph, const RenderSpec& spec,
                             const std::filesystem::path& out_dir) {
    const auto frames = render_frames(track, graph, spec);
    const auto smil = render_smil(track, graph, spec);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

    auto write = [](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        out << text;
        out.flush();
        if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
    };
    for (std::size_t f = 0; f < frames.size(); ++f) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%05zu.svg", f);
        write(out_dir / name, frames[f]);
    }
    write(out_dir / "animation.svg", smil);
    return frames.size();
}

}  // namespace scidyn
