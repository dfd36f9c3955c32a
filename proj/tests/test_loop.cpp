#include "berryphase/errors.hpp"
#include "berryphase/loop.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

using namespace berry;

TEST_CASE("coordinates parse, print and set") {
    for (auto c : {Coordinate::lambda, Coordinate::log_m, Coordinate::log_omega, Coordinate::alpha1,
                   Coordinate::alpha2, Coordinate::beta1, Coordinate::beta2}) {
        CHECK(parse_coordinate(to_string(c)) == c);
    }
    CHECK_THROWS_AS(parse_coordinate("gamma"), InvalidArgument);

    ParamPoint p;
    p.m = 2.0;
    const auto q = with_coordinate(p, Coordinate::lambda, 1.0);
    CHECK(q.m == 2.0);
    CHECK(q.lambda() == doctest::Approx(1.0));
    CHECK(coordinate_value(with_coordinate(p, Coordinate::beta2, -0.3), Coordinate::beta2) == -0.3);
}

TEST_CASE("circle loops are closed and reuse the first point") {
    const auto loop = make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0.1, 0.0, 0.5, 64);
    CHECK(loop.segments() == 64);
    CHECK(loop.points().size() == 65);
    CHECK(loop[64] == loop[0]);
    CHECK(loop[0].alpha.real() == doctest::Approx(0.6));
    // counterclockwise: a quarter turn reaches the top of the circle
    CHECK(loop[16].alpha.imag() == doctest::Approx(0.5));
}

TEST_CASE("loop invariants are enforced") {
    CHECK_THROWS_AS(make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0, 0, 0.5, 8), InvalidArgument);
    CHECK_THROWS_AS(make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0, 0, 2.0, 16), InvalidArgument);
    CHECK_THROWS_AS(make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha1, 0, 0, 0.5, 64), InvalidArgument);
    CHECK_THROWS_AS(make_circle_loop({}, Coordinate::lambda, Coordinate::log_m, 0, 0, 0.5, 64), InvalidArgument);

    std::vector<ParamPoint> open(20);
    open.back().m = 1.1;
    CHECK_THROWS_AS(ParamLoop{open}, InvalidArgument);
    CHECK_NOTHROW(ParamLoop(std::vector<ParamPoint>(20)));
}

TEST_CASE("polylines hit every vertex and have exactly K segments") {
    const std::array<Coordinate, 2> coords = {Coordinate::beta1, Coordinate::beta2};
    const std::vector<std::vector<double>> square = {{0.1, 0.1}, {0.3, 0.1}, {0.3, 0.3}, {0.1, 0.3}, {0.1, 0.1}};
    const auto loop = make_polyline_loop({}, coords, square, 50);
    CHECK(loop.segments() == 50);
    CHECK(loop[50] == loop[0]);
    int hits = 0;
    for (const auto& p : loop.points()) {
        for (const auto& v : square) {
            if (std::abs(p.beta - cplx(v[0], v[1])) < 1e-15) ++hits;
        }
    }
    CHECK(hits >= 5);

    auto unclosed = square;
    unclosed.back() = {0.2, 0.2};
    CHECK_THROWS_AS(make_polyline_loop({}, coords, unclosed, 50), InvalidArgument);
}

TEST_CASE("wave loops trace cos(f t + phase)") {
    const std::array<Wave, 2> waves = {Wave{Coordinate::beta1, 0.2, 0.1, 1, 0.0},
                                       Wave{Coordinate::lambda, 0.0, 0.3, 2, std::numbers::pi / 2}};
    const auto loop = make_wave_loop({}, waves, 40);
    CHECK(loop[0].beta.real() == doctest::Approx(0.3));
    CHECK(loop[0].lambda() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(loop[10].beta.real() == doctest::Approx(0.2));
    CHECK(loop[40] == loop[0]);
}

TEST_CASE("reversed loops run backwards") {
    const auto loop = make_circle_loop({}, Coordinate::beta1, Coordinate::beta2, 0, 0, 0.2, 32);
    const auto rev = loop.reversed();
    CHECK(rev.segments() == 32);
    CHECK(rev[1] == loop[31]);
    CHECK(rev[32] == rev[0]);
}

TEST_CASE("composed loops return to the base through the same tether") {
    const std::vector<ParamLoop> parts = {
        make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0, 0, 0.4, 40),
        make_circle_loop({}, Coordinate::beta1, Coordinate::beta2, 0, 0, 0.25, 40)};
    const auto loop = compose_loops(parts, 5);
    CHECK(loop.segments() == 40 + 5 + 40 + 5);
    CHECK(loop[0] == parts[0][0]);
    CHECK(loop[45] == parts[1][0]);
    for (int k = 1; k < 5; ++k) CHECK(loop[40 + k] == loop[90 - k]);

    // Loops already sharing the base point need no tether.
    const std::vector<ParamLoop> same = {parts[0], parts[0]};
    CHECK(compose_loops(same, 5).segments() == 80);
    CHECK_THROWS_AS(compose_loops(std::vector<ParamLoop>{}, 5), InvalidArgument);
}
