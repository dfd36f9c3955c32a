#include "berryphase/loop.hpp"

#include "berryphase/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>

namespace berry {

namespace {

constexpr std::array<std::pair<Coordinate, std::string_view>, 7> kCoordinateNames = {{
    {Coordinate::lambda, "lambda"},
    {Coordinate::log_m, "log_m"},
    {Coordinate::log_omega, "log_omega"},
    {Coordinate::alpha1, "alpha1"},
    {Coordinate::alpha2, "alpha2"},
    {Coordinate::beta1, "beta1"},
    {Coordinate::beta2, "beta2"},
}};

double max_step(const ParamPoint& a, const ParamPoint& b) {
    const std::array<double, 6> steps = {
        std::abs(std::log(b.m) - std::log(a.m)),   std::abs(std::log(b.omega) - std::log(a.omega)),
        std::abs(b.alpha.real() - a.alpha.real()), std::abs(b.alpha.imag() - a.alpha.imag()),
        std::abs(b.beta.real() - a.beta.real()),   std::abs(b.beta.imag() - a.beta.imag()),
    };
    return *std::max_element(steps.begin(), steps.end());
}

void require_distinct(std::span<const Coordinate> coords) {
    std::set<Coordinate> seen;
    for (Coordinate c : coords) {
        if (!seen.insert(c).second) {
            throw InvalidArgument("loop coordinate '" + std::string(to_string(c)) + "' is bound twice");
        }
    }
    const bool has_lambda = seen.count(Coordinate::lambda) > 0;
    if (has_lambda && (seen.count(Coordinate::log_m) > 0 || seen.count(Coordinate::log_omega) > 0)) {
        throw InvalidArgument("lambda cannot be varied together with log_m or log_omega");
    }
}

}  // namespace

Coordinate parse_coordinate(std::string_view name) {
    for (const auto& [c, n] : kCoordinateNames) {
        if (n == name) return c;
    }
    throw InvalidArgument("unknown loop coordinate '" + std::string(name) + "'");
}

std::string_view to_string(Coordinate c) {
    for (const auto& [k, n] : kCoordinateNames) {
        if (k == c) return n;
    }
    return "?";
}

double coordinate_value(const ParamPoint& p, Coordinate c) {
    switch (c) {
        case Coordinate::lambda: return p.lambda();
        case Coordinate::log_m: return std::log(p.m);
        case Coordinate::log_omega: return std::log(p.omega);
        case Coordinate::alpha1: return p.alpha.real();
        case Coordinate::alpha2: return p.alpha.imag();
        case Coordinate::beta1: return p.beta.real();
        case Coordinate::beta2: return p.beta.imag();
    }
    return 0.0;
}

ParamPoint with_coordinate(ParamPoint p, Coordinate c, double value) {
    switch (c) {
        case Coordinate::lambda: p.omega = std::exp(value) / p.m; break;
        case Coordinate::log_m: p.m = std::exp(value); break;
        case Coordinate::log_omega: p.omega = std::exp(value); break;
        case Coordinate::alpha1: p.alpha.real(value); break;
        case Coordinate::alpha2: p.alpha.imag(value); break;
        case Coordinate::beta1: p.beta.real(value); break;
        case Coordinate::beta2: p.beta.imag(value); break;
    }
    return p;
}

ParamLoop::ParamLoop(std::vector<ParamPoint> points, std::string description)
    : points_(std::move(points)), description_(std::move(description)) {
    if (static_cast<int>(points_.size()) < kMinSegments + 1) {
        throw InvalidArgument("loop needs K >= " + std::to_string(kMinSegments) + " segments, got " +
                              std::to_string(static_cast<int>(points_.size()) - 1));
    }
    if (!(points_.front() == points_.back())) {
        throw InvalidArgument("loop is not closed: first and last points differ");
    }
    for (const auto& p : points_) p.validate();
    for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
        const double step = max_step(points_[k], points_[k + 1]);
        if (!(step < kMaxStep)) {
            throw InvalidArgument("loop step " + std::to_string(k) + " has component change " + std::to_string(step) +
                                  " >= " + std::to_string(kMaxStep));
        }
    }
}

ParamLoop ParamLoop::reversed() const {
    std::vector<ParamPoint> rev(points_.rbegin(), points_.rend());
    rev.back() = rev.front();
    return ParamLoop(std::move(rev), description_ + " (reversed)");
}

ParamLoop make_wave_loop(const ParamPoint& base, std::span<const Wave> waves, int segments, std::string description) {
    if (segments < ParamLoop::kMinSegments) {
        throw InvalidArgument("loop needs K >= " + std::to_string(ParamLoop::kMinSegments) + " segments, got " +
                              std::to_string(segments));
    }
    std::vector<Coordinate> coords;
    for (const auto& w : waves) coords.push_back(w.coordinate);
    require_distinct(coords);

    std::vector<ParamPoint> points;
    points.reserve(static_cast<std::size_t>(segments) + 1);
    for (int k = 0; k < segments; ++k) {
        const double t = 2.0 * std::numbers::pi * k / segments;
        ParamPoint p = base;
        for (const auto& w : waves) {
            p = with_coordinate(p, w.coordinate, w.center + w.amplitude * std::cos(w.frequency * t + w.phase));
        }
        points.push_back(p);
    }
    points.push_back(points.front());
    return ParamLoop(std::move(points), std::move(description));
}

ParamLoop make_circle_loop(const ParamPoint& base, Coordinate x, Coordinate y, double center_x, double center_y,
                           double radius, int segments) {
    if (segments < ParamLoop::kMinSegments) {
        throw InvalidArgument("loop needs K >= " + std::to_string(ParamLoop::kMinSegments) + " segments, got " +
                              std::to_string(segments));
    }
    const std::array<Coordinate, 2> coords = {x, y};
    require_distinct(coords);
    std::vector<ParamPoint> points;
    points.reserve(static_cast<std::size_t>(segments) + 1);
    for (int k = 0; k < segments; ++k) {
        const double t = 2.0 * std::numbers::pi * k / segments;
        ParamPoint p = with_coordinate(base, x, center_x + radius * std::cos(t));
        points.push_back(with_coordinate(p, y, center_y + radius * std::sin(t)));
    }
    points.push_back(points.front());
    return ParamLoop(std::move(points), "circle(" + std::string(to_string(x)) + "," + std::string(to_string(y)) +
                                            ", r=" + std::to_string(radius) + ")");
}

ParamLoop make_polyline_loop(const ParamPoint& base, std::span<const Coordinate> coords,
                             const std::vector<std::vector<double>>& vertices, int segments) {
    require_distinct(coords);
    if (vertices.size() < 3) throw InvalidArgument("polyline needs at least 3 vertices (closed)");
    for (const auto& v : vertices) {
        if (v.size() != coords.size()) throw InvalidArgument("polyline vertex arity does not match coordinates");
    }
    if (vertices.front() != vertices.back()) throw InvalidArgument("polyline is not explicitly closed");
    const int edges = static_cast<int>(vertices.size()) - 1;
    if (segments < std::max(ParamLoop::kMinSegments, edges)) {
        throw InvalidArgument("polyline needs K >= max(16, edges), got " + std::to_string(segments));
    }

    auto point_at = [&](const std::vector<double>& values) {
        ParamPoint p = base;
        for (std::size_t i = 0; i < coords.size(); ++i) p = with_coordinate(p, coords[i], values[i]);
        return p;
    };

    std::vector<ParamPoint> points;
    points.reserve(static_cast<std::size_t>(segments) + 1);
    for (int e = 0; e < edges; ++e) {
        const int pieces = segments / edges + (e < segments % edges ? 1 : 0);
        const auto& from = vertices[static_cast<std::size_t>(e)];
        const auto& to = vertices[static_cast<std::size_t>(e) + 1];
        for (int j = 0; j < pieces; ++j) {
            const double t = static_cast<double>(j) / pieces;
            std::vector<double> values(coords.size());
            for (std::size_t i = 0; i < coords.size(); ++i) values[i] = (1.0 - t) * from[i] + t * to[i];
            points.push_back(point_at(values));
        }
    }
    points.push_back(points.front());
    return ParamLoop(std::move(points), "polyline(" + std::to_string(edges) + " edges)");
}

ParamLoop compose_loops(std::span<const ParamLoop> loops, int tether_segments) {
    if (loops.empty()) throw InvalidArgument("compose_loops needs at least one loop");
    if (tether_segments < 1) throw InvalidArgument("tether needs at least one segment");
    const ParamPoint base = loops.front()[0];
    std::vector<ParamPoint> points(loops.front().points());
    std::string description = loops.front().description();
    for (std::size_t i = 1; i < loops.size(); ++i) {
        const ParamLoop& next = loops[i];
        std::vector<ParamPoint> tether;
        if (!(next[0] == base)) {
            for (int k = 1; k < tether_segments; ++k) {
                tether.push_back(interpolate(base, next[0], static_cast<double>(k) / tether_segments));
            }
        }
        // points.back() is the base point; next.points() begins and ends at next[0]
        points.insert(points.end(), tether.begin(), tether.end());
        if (next[0] == base) {
            points.insert(points.end(), next.points().begin() + 1, next.points().end());
        } else {
            points.insert(points.end(), next.points().begin(), next.points().end());
            points.insert(points.end(), tether.rbegin(), tether.rend());
            points.push_back(base);
        }
        description += " + " + next.description();
    }
    return ParamLoop(std::move(points), std::move(description));
}

}  // namespace berry
