#include "berryphase/errors.hpp"
#include "berryphase/position_rep.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace berry;

namespace {

constexpr double kPi = std::numbers::pi;

ParamPoint generic() {
    ParamPoint r;
    r.m = 1.3;
    r.omega = 0.8;
    r.alpha = {0.3, -0.2};
    r.beta = {0.25, 0.15};
    return r;
}

}  // namespace

TEST_CASE("grid spec validation") {
    CHECK_THROWS_AS((GridSpec{-12, 12, 100}).validate(), GridError);
    CHECK_THROWS_AS((GridSpec{1, -1, 1024}).validate(), GridError);
    const GridSpec g;
    CHECK_NOTHROW(g.validate());
    CHECK(g.x(0) == -12.0);
    CHECK(g.x(g.points - 1) == doctest::Approx(12.0));
}

TEST_CASE("Gaussian coefficients in simple limits") {
    ParamPoint r;
    auto uv = uv_coefficients(r).corrected;
    CHECK(std::abs(uv.u - 1.0) < 1e-14);
    CHECK(std::abs(uv.v) < 1e-14);

    // Displacement shifts the centre to sqrt(2) alpha1 and adds the momentum sqrt(2) alpha2.
    r.alpha = {0.4, -0.3};
    uv = uv_coefficients(r).corrected;
    CHECK(std::abs(uv.v + std::sqrt(2.0) * r.alpha) < 1e-14);

    // Real squeezing narrows the momentum spread: u = exp(-2 b).
    ParamPoint s;
    s.beta = 0.3;
    CHECK(std::abs(uv_coefficients(s).corrected.u - std::exp(-0.6)) < 1e-13);

    // Frequency alone: u = m omega.
    ParamPoint w;
    w.omega = 2.5;
    CHECK(std::abs(uv_coefficients(w).corrected.u - 2.5) < 1e-13);
}

TEST_CASE("printed and corrected coefficients differ by a factor of two in u") {
    const auto both = uv_coefficients(generic());
    CHECK(std::abs(both.corrected.u - 2.0 * both.printed.u) < 1e-13);
    CHECK(std::abs(both.corrected.v - both.printed.v) < 1e-13);
}

TEST_CASE("ground-state wavefunction") {
    const GridSpec grid;
    const auto psi = ground_wavefunction(generic(), grid);
    CHECK(std::abs(grid_inner(psi, psi, grid) - 1.0) < 1e-12);
    CHECK(ground_state_residual(generic(), grid) < 1e-6);
    CHECK(fock_grid_overlap(0, generic(), grid, 80) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(ground_wavefunction(generic(), GridSpec{-2.0, 2.0, 1024}), GridError);
}

TEST_CASE("Hermite functions are orthonormal on the grid") {
    const GridSpec grid;
    const DenseMatrix h = hermite_basis(grid, 20);
    const double dx = grid.spacing();
    DenseMatrix gram = h.adjoint() * h * dx;
    CHECK((gram - DenseMatrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("grid gamma_0 agrees with the closed forms and the Fock route") {
    const GridSpec grid;
    const auto alpha = make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0, 0, 0.5, 400);
    CHECK(std::abs(gamma0_grid(alpha, grid) + kPi / 2.0) < 1e-3);

    const auto beta = make_circle_loop({}, Coordinate::beta1, Coordinate::beta2, 0, 0, 0.3, 400);
    const double sh = std::sinh(0.3);
    const double oracle = -0.5 * 2.0 * kPi * sh * sh;
    EngineOptions opts;
    opts.check_convergence = false;
    CHECK(std::abs(gamma0_grid(beta, grid) - wilson_loop_phase(0, beta, 80, opts)) < 2e-3);
    CHECK(std::abs(gamma0_grid_connection(beta, grid) - oracle) < 1e-3);
    CHECK(std::abs(gamma1_from_gamma0(beta, grid) - 3.0 * oracle) < 1e-3);
}

TEST_CASE("commutator one-form") {
    ParamPoint flat;
    const ParamDisplacement d{.lambda = 0.1, .alpha1 = 0.2, .alpha2 = 0.0, .beta1 = 0.0, .beta2 = 0.0};
    CHECK(std::abs(commutator_one_form(flat, d)) < 1e-15);

    const ParamDisplacement e{.lambda = 0.01, .alpha1 = -0.02, .alpha2 = 0.015, .beta1 = 0.01, .beta2 = -0.02};
    const auto m = commutator_one_form_matrix(generic(), e, 80);
    CHECK(std::abs(m.scalar - commutator_one_form(generic(), e)) < 1e-6);
    CHECK(m.off_identity < 1e-6);
    CHECK(std::abs(m.scalar.real()) < 1e-9);
}
