#include "scidyn/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>

#include "scidyn/error.hpp"

namespace scidyn {

using nlohmann::json;

namespace {

json real(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

json positions_json(const AnimationTrack& track, const Layout& layout) {
    json positions = json::object();
    for (std::size_t k = 0; k < layout.size(); ++k) {
        json point = json::array();
        for (double c : layout.point(k)) point.push_back(real(c));
        positions[track.node_ids.at(layout.nodes[k])] = std::move(point);
    }
    return positions;
}

json node_values(const NodeValues& values, const TimeSlicedGraph& graph) {
    json out = json::object();
    for (const auto& [node, value] : values) out[graph.nodes().at(node).id] = real(value);
    return out;
}

}  // namespace

json to_json(const DecompositionReport& report) {
    json groups = json::array();
    for (const auto& g : report.groups) {
        json entry{{"label", g.label}, {"share", real(g.share)}, {"within_bits", real(g.within_bits)}};
        if (g.children) entry["children"] = to_json(*g.children);
        groups.push_back(std::move(entry));
    }
    return json{{"total_bits", real(report.total_bits)},
                {"between_bits", real(report.between_bits)},
                {"groups", std::move(groups)}};
}

json to_json(const DivergenceReport& report) {
    json groups = json::array();
    for (const auto& g : report.groups) {
        groups.push_back(json{{"label", g.label},
                              {"posterior_share", real(g.posterior_share)},
                              {"prior_share", real(g.prior_share)},
                              {"within_bits", real(g.within_bits)}});
    }
    return json{{"total_bits", real(report.total_bits)},
                {"between_bits", real(report.between_bits)},
                {"groups", std::move(groups)}};
}

json to_json(const std::vector<TransitionStep>& steps) {
    json out = json::array();
    for (const auto& step : steps) {
        json entry{{"step", step.label}, {"bits", real(step.bits)}};
        if (step.decomposition) entry["decomposition"] = to_json(*step.decomposition);
        out.push_back(std::move(entry));
    }
    return out;
}

json to_json(const StressReport& report) {
    json statics = json::array();
    for (double s : report.static_terms) statics.push_back(real(s));
    json stress1 = json::array();
    for (double s : report.stress1) stress1.push_back(real(s));
    return json{{"static_terms", std::move(statics)},
                {"stress1", std::move(stress1)},
                {"temporal_term", real(report.temporal_term)},
                {"displacement", real(report.displacement)},
                {"total", real(report.total)}};
}

json to_json(const AnimationTrack& track) {
    json slices = json::array();
    for (const auto& slice : track.slices) {
        slices.push_back(json{{"time", slice.time},
                              {"positions", positions_json(track, slice.layout)},
                              {"static_stress", real(slice.static_stress)},
                              {"stress1", real(slice.stress1)}});
    }
    const std::size_t dims = track.slices.empty() ? 2 : track.slices.front().layout.dims;
    return json{{"slices", std::move(slices)},
                {"temporal_stress", real(track.temporal_stress)},
                {"total_stress", real(track.total_stress)},
                {"nodes", track.node_ids},
                {"solver",
                 json{{"iterations", track.solver.iterations},
                      {"converged", track.solver.converged},
                      {"omega", real(track.solver.omega)},
                      {"seed", track.solver.seed},
                      {"dims", dims}}}};
}

json to_json(const CentralitySeries& series, const TimeSlicedGraph& graph) {
    json slices = json::array();
    for (std::size_t t = 0; t < series.times.size(); ++t) {
        slices.push_back(json{{"time", series.times[t]},
                              {"raw", node_values(series.raw[t], graph)},
                              {"normalized", node_values(series.normalized[t], graph)}});
    }
    json flags = json::array();
    for (const auto& flag : series.flags) {
        flags.push_back(json{{"time", series.times.at(flag.slice)},
                             {"node", graph.nodes().at(flag.node).id},
                             {"rise", real(flag.rise)}});
    }
    return json{{"slices", std::move(slices)}, {"flags", std::move(flags)}};
}

json to_json(const std::vector<Construct>& constructs) {
    json out = json::array();
    for (const auto& c : constructs) {
        json loadings = json::object();
        for (const auto& [name, value] : c.loadings) loadings[name] = real(value);
        out.push_back(json{{"label", c.label},
                           {"position", json::array({real(c.position[0]), real(c.position[1])})},
                           {"eigenvalue", real(c.eigenvalue)},
                           {"loadings", std::move(loadings)},
                           {"degenerate", c.degenerate},
                           {"rank_deficient", c.rank_deficient}});
    }
    return out;
}

json tagged(const std::string& kind, json body) {
    if (!body.is_object()) body = json{{"result", std::move(body)}};
    body["kind"] = kind;
    body["scidyn_schema"] = json_schema_version;
    return body;
}

void round_reals(json& doc) {
    if (doc.is_number_float()) {
        const double v = doc.get<double>();
        char buffer[40];
        std::snprintf(buffer, sizeof(buffer), "%.12g", v);
        double rounded = std::strtod(buffer, nullptr);
        if (rounded == 0.0) rounded = 0.0;  // drop the sign of -0
        doc = rounded;
        return;
    }
    if (doc.is_structured()) {
        for (auto& child : doc) round_reals(child);
    }
}

std::string dump_report(json doc) {
    round_reals(doc);
    return doc.dump(2) + "\n";
}

void export_json(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << dump_report(doc);
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

AnimationTrack track_from_json(const json& doc) {
    AnimationTrack track;
    try {
        track.node_ids = doc.at("nodes").get<std::vector<std::string>>();
        std::map<std::string, NodeId> index;
        for (NodeId i = 0; i < track.node_ids.size(); ++i) index.emplace(track.node_ids[i], i);
        const std::size_t dims = doc.at("solver").at("dims").get<std::size_t>();
        for (const auto& s : doc.at("slices")) {
            TrackSlice slice;
            slice.time = s.at("time").get<std::string>();
            slice.layout.dims = dims;
            std::map<NodeId, std::vector<double>> points;
            for (const auto& [id, point] : s.at("positions").items()) {
                points.emplace(index.at(id), point.get<std::vector<double>>());
            }
            for (const auto& [node, point] : points) {
                slice.layout.nodes.push_back(node);
                slice.layout.coords.insert(slice.layout.coords.end(), point.begin(), point.end());
            }
            slice.static_stress = s.at("static_stress").get<double>();
            slice.stress1 = s.at("stress1").get<double>();
            track.slices.push_back(std::move(slice));
        }
        track.temporal_stress = doc.at("temporal_stress").get<double>();
        track.total_stress = doc.at("total_stress").get<double>();
        const auto& solver = doc.at("solver");
        track.solver = SolverInfo{solver.at("iterations").get<std::size_t>(), solver.at("converged").get<bool>(),
                                  solver.at("omega").get<double>(), solver.at("seed").get<std::uint64_t>()};
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed track document: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw Error(ErrorCode::ParseError, std::string("track references an unknown node: ") + e.what());
    }
    return track;
}

}  // namespace scidyn
