#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "scidyn/graph.hpp"
#include "scidyn/track.hpp"

namespace scidyn {

enum class RadiusRule { Fixed, SqrtAttribute };
enum class NodeAttribute { Degree, Betweenness };
enum class ColorRule { Fixed, Betweenness };
enum class LabelRule { None, All };

struct RenderSpec {
    int width = 800;
    int height = 600;
    double margin = 40.0;
    RadiusRule radius_rule = RadiusRule::Fixed;
    NodeAttribute radius_attribute = NodeAttribute::Degree;
    /// Fixed radius, or the radius of the node with the largest attribute.
    double radius = 6.0;
    ColorRule color_rule = ColorRule::Betweenness;
    std::string fixed_color = "#4477aa";
    std::size_t interpolation_steps = 10;
    LabelRule labels = LabelRule::All;
    double seconds_per_transition = 1.0;

    /// Throws InvalidArgument on non-positive canvas sizes or zero steps.
    void validate() const;
};

/// Number of frames for a track of `slices` slices.
std::size_t frame_count(std::size_t slices, std::size_t interpolation_steps);

/// Interpolated frame sequence. Between consecutive slices positions move
/// linearly; nodes that appear or vanish fade in or out over the transition.
/// All frames share one bounding box. Throws LabelMismatch when the track and
/// graph disagree on slices, node ids or presence.
std::vector<std::string> render_frames(const AnimationTrack& track, const TimeSlicedGraph& graph,
                                       const RenderSpec& spec);

/// One self-contained SVG animating the whole timeline with SMIL <animate>
/// elements. A single-slice track yields a static picture.
std::string render_smil(const AnimationTrack& track, const TimeSlicedGraph& graph, const RenderSpec& spec);

/// Writes frame_00000.svg, frame_00001.svg, ... and animation.svg into
/// out_dir (created if needed). Returns the number of frames. Throws IoError.
std::size_t render_animation(const AnimationTrack& track, const TimeSlicedGraph& graph,
                             const RenderSpec& spec, const std::filesystem::path& out_dir);

/// Canvas coordinates of one node position under the track's global
/// bounding box.
struct CanvasMap {
    double min_x = 0.0;
    double min_y = 0.0;
    double scale = 1.0;
    double offset_x = 0.0;
    double offset_y = 0.0;

    static CanvasMap fit(const AnimationTrack& track, const RenderSpec& spec);
    std::pair<double, double> operator()(double x, double y) const;
};

}  // namespace scidyn
