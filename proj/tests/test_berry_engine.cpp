#include "berryphase/berry_engine.hpp"
#include "berryphase/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace berry;

namespace {

constexpr double kPi = std::numbers::pi;

EngineOptions no_refine() {
    EngineOptions o;
    o.check_convergence = false;
    return o;
}

// Shoelace area of the alpha polygon traced by the loop.
double alpha_polygon_area(const ParamLoop& loop) {
    double twice = 0.0;
    for (int k = 0; k < loop.segments(); ++k) {
        const cplx a = loop[k].alpha;
        const cplx b = loop[k + 1].alpha;
        twice += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * twice;
}

ParamLoop beta_circle(double cx, double radius, int k) {
    return make_circle_loop({}, Coordinate::beta1, Coordinate::beta2, cx, 0.0, radius, k);
}

}  // namespace

TEST_CASE("displacement phase is minus twice the enclosed area") {
    const auto loop = make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0.1, -0.2, 0.5, 200);
    const double area = alpha_polygon_area(loop);
    CHECK(closed_form_displacement_phase(loop) == doctest::Approx(-2.0 * area).epsilon(1e-13));
    for (double g : wilson_loop_phases({0, 1, 2}, loop, 60, no_refine())) {
        CHECK(g == doctest::Approx(-2.0 * area).epsilon(1e-10));
    }
    CHECK(std::abs(-2.0 * area + kPi / 2.0) < 1e-3);
}

TEST_CASE("squeeze phase on a circle about the origin") {
    const auto loop = beta_circle(0.0, 0.3, 400);
    const double sh = std::sinh(0.3);
    for (int n : {0, 1, 2}) {
        const double oracle = -(n + 0.5) * 2.0 * kPi * sh * sh;
        CHECK(closed_form_squeeze_phase(n, loop) == doctest::Approx(oracle).epsilon(1e-4));
        CHECK(arg_beta_phase(n, loop) == doctest::Approx(closed_form_squeeze_phase(n, loop)).epsilon(1e-8));
        CHECK(std::abs(wilson_loop_phase(n, loop, 80, no_refine()) - oracle) < 1e-3);
    }
}

TEST_CASE("arg(beta) form needs fixed alpha, lambda and a loop avoiding beta = 0") {
    CHECK_THROWS_AS(arg_beta_phase(0, beta_circle(0.1, 0.1, 64)), DomainError);
    const auto alpha_loop = make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0, 0, 0.5, 64);
    CHECK_THROWS_AS(arg_beta_phase(0, alpha_loop), InvalidArgument);
}

TEST_CASE("reversing the loop flips the sign") {
    const auto loop = beta_circle(0.1, 0.2, 128);
    const auto opts = no_refine();
    const double fwd = wilson_loop_phase(1, loop, 60, opts);
    const double back = wilson_loop_phase(1, loop.reversed(), 60, opts);
    CHECK(back == doctest::Approx(-fwd).epsilon(1e-10));
    CHECK(closed_form_squeeze_phase(1, loop.reversed()) == doctest::Approx(-closed_form_squeeze_phase(1, loop)));
}

TEST_CASE("Wilson phase is gauge invariant") {
    const auto loop = beta_circle(0.0, 0.25, 64);
    const std::vector<int> levels = {0, 2};
    const StateBuilder plain = [&](const ParamPoint& r) { return eigenstates(levels, r, 60); };
    const StateBuilder rephased = [&](const ParamPoint& r) {
        auto states = eigenstates(levels, r, 60);
        const double theta = 3.0 * r.beta.real() - 7.0 * r.beta.imag() + 1.0;
        for (auto& s : states) s = StateVector(std::polar(1.0, theta) * s.amplitudes());
        return states;
    };
    const auto a = segment_arguments(loop, plain, levels.size());
    const auto b = segment_arguments(loop, rephased, levels.size());
    for (std::size_t j = 0; j < levels.size(); ++j) {
        CHECK(wilson_phase_from_arguments(a[j]) == doctest::Approx(wilson_phase_from_arguments(b[j])).epsilon(1e-12));
    }
}

TEST_CASE("coarse sampling is reported instead of returning a wrapped phase") {
    EngineOptions opts = no_refine();
    opts.min_overlap = 0.999;
    const auto loop = make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0, 0, 0.5, 16);
    CHECK_THROWS_AS(wilson_loop_phase(0, loop, 40, opts), ResolutionError);
}

TEST_CASE("lambda-only and constant loops carry no phase") {
    const std::array<Wave, 1> lam = {Wave{Coordinate::lambda, 0.2, 0.6, 1, 0.0}};
    ParamPoint base;
    base.alpha = {0.2, -0.1};
    const auto loop = make_wave_loop(base, lam, 100);
    for (double g : wilson_loop_phases({0, 1, 3}, loop, 60, no_refine())) CHECK(std::abs(g) < 1e-8);
    CHECK(std::abs(closed_form_displacement_phase(loop)) < 1e-12);
    CHECK(std::abs(closed_form_squeeze_phase(2, loop)) < 1e-12);
}

TEST_CASE("Hannay angle and linearity") {
    const auto alpha = make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0, 0, 0.5, 200);
    CHECK(std::abs(hannay_angle(alpha, 60, no_refine())) < 1e-6);

    CHECK(linearity_residual({1.0, 3.0, 5.0, 7.0}) < 1e-14);
    // least-squares line -1 + 3 n leaves residuals 1, -1, -1, 1
    CHECK(linearity_residual({0.0, 1.0, 4.0, 9.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(linearity_residual({1.0}), InvalidArgument);
}

TEST_CASE("curvature matches the curl of the one-forms") {
    const double h = 1e-5;
    for (cplx beta : {cplx(0.3, 0.0), cplx(0.1, -0.2)}) {
        ParamPoint r;
        r.beta = beta;
        const auto at = [&](double db1, double db2) {
            ParamPoint p = r;
            p.beta += cplx(db1, db2);
            return squeeze_one_form(p);
        };
        const double curl = (at(h, 0).beta2 - at(-h, 0).beta2) / (2 * h) - (at(0, h).beta1 - at(0, -h).beta1) / (2 * h);
        for (int n : {0, 1}) {
            CHECK(curvature_at(r, CurvaturePlane::beta, n) == doctest::Approx((n + 0.5) * curl).epsilon(1e-7));
            const double mod = std::abs(beta);
            CHECK(curvature_at(r, CurvaturePlane::beta, n) ==
                  doctest::Approx(-(n + 0.5) * std::sinh(2 * mod) / mod).epsilon(1e-12));
        }
    }
    CHECK(curvature_at({}, CurvaturePlane::alpha, 3) == -2.0);
    CHECK_THROWS_AS(curvature_at({}, CurvaturePlane::beta, 0), DomainError);
}

TEST_CASE("total phases carry a convergence flag") {
    const auto loop = beta_circle(0.0, 0.3, 200);
    const auto reports = total_phases({0, 1}, loop, 60);
    for (const auto& r : reports) {
        CHECK(r.converged);
        CHECK(r.dim == 60);
        CHECK(r.segments == 200);
        CHECK(r.gamma_d == 0.0);
        CHECK(r.discrepancy == doctest::Approx(std::abs(r.gamma_wilson - r.gamma_closed)));
    }
    EngineOptions capped;
    capped.max_dim = 100;
    CHECK_FALSE(total_phase(0, loop, 60, capped).converged);
}

TEST_CASE("parallel evaluation is deterministic") {
    const auto loop = beta_circle(0.05, 0.2, 300);
    const auto a = wilson_loop_phases({0, 1, 2}, loop, 60, no_refine());
    const auto b = wilson_loop_phases({0, 1, 2}, loop, 60, no_refine());
    CHECK(a == b);
}
