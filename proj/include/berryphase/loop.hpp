#pragma once

#include "berryphase/oscillator.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace berry {

/// Real coordinates a loop may vary. lambda moves omega at fixed m.
enum class Coordinate { lambda, log_m, log_omega, alpha1, alpha2, beta1, beta2 };

Coordinate parse_coordinate(std::string_view name);
std::string_view to_string(Coordinate c);

double coordinate_value(const ParamPoint& p, Coordinate c);
ParamPoint with_coordinate(ParamPoint p, Coordinate c, double value);

/// Closed, ordered contour: K + 1 points with points[K] == points[0].
class ParamLoop {
public:
    static constexpr int kMinSegments = 16;
    static constexpr double kMaxStep = 0.2;

    ParamLoop(std::vector<ParamPoint> points, std::string description = {});

    int segments() const noexcept { return static_cast<int>(points_.size()) - 1; }
    const std::vector<ParamPoint>& points() const noexcept { return points_; }
    const ParamPoint& operator[](int k) const { return points_[static_cast<std::size_t>(k)]; }
    const std::string& description() const noexcept { return description_; }

    /// Same contour traversed in the opposite direction.
    ParamLoop reversed() const;

private:
    std::vector<ParamPoint> points_;
    std::string description_;
};

/// value(t) = center + amplitude * cos(frequency * t + phase), t in [0, 2 pi].
struct Wave {
    Coordinate coordinate = Coordinate::alpha1;
    double center = 0.0;
    double amplitude = 0.0;
    int frequency = 1;
    double phase = 0.0;
};

ParamLoop make_wave_loop(const ParamPoint& base, std::span<const Wave> waves, int segments,
                         std::string description = "waves");

/// Counterclockwise circle in the (x, y) plane starting at angle 0.
ParamLoop make_circle_loop(const ParamPoint& base, Coordinate x, Coordinate y, double center_x, double center_y,
                           double radius, int segments);

/// Closed polyline through `vertices` (first == last), each row giving values for `coords`.
/// Edges are subdivided so the loop has exactly `segments` segments.
ParamLoop make_polyline_loop(const ParamPoint& base, std::span<const Coordinate> coords,
                             const std::vector<std::vector<double>>& vertices, int segments);

/// Loop composition: each later loop is reached from loops[0]'s base point by a
/// straight tether of `tether_segments` steps, traversed there and back.
ParamLoop compose_loops(std::span<const ParamLoop> loops, int tether_segments);

}  // namespace berry
