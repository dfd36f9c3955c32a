#include "berryphase/errors.hpp"
#include "berryphase/multiphoton.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace berry;

TEST_CASE("subspace maps embed H_k at stride 2^k") {
    const auto h1 = make_subspace_map(1, 80);
    CHECK(h1.dim_sub == 40);
    CHECK(h1.parent_index(3) == 6);
    const auto h2 = make_subspace_map(2, 80);
    CHECK(h2.dim_sub == 20);
    CHECK(h2.parent_index(3) == 12);
    CHECK_THROWS(h1.parent_index(40));
}

TEST_CASE("pair operators") {
    const auto x = x_operator(10);
    for (int n = 0; n < 10; ++n) CHECK(x(n, n).real() == doctest::Approx(0.5 / (1.0 + n)));
    // pair_lowering |2n> = sqrt(2n(2n-1)) / (2(2n-1)) |2n-2>
    const auto low = pair_lowering(12);
    for (int n = 1; n < 6; ++n) {
        const double k = 2.0 * n;
        CHECK(low(2 * n - 2, 2 * n).real() == doctest::Approx(std::sqrt(k * (k - 1.0)) / (2.0 * (k - 1.0))));
    }
    CHECK(pair_commutator_check(40) < 1e-12);
    CHECK(pair_number_check(40) < 1e-12);
    CHECK(preserves_parity(pair_lowering(20)));
    CHECK(preserves_parity(pair_raising(20)));
    CHECK_FALSE(preserves_parity(make_annihilator(20)));
}

TEST_CASE("squeezed vacuum is a coherent state of the pair lowering operator") {
    for (cplx beta : {cplx(0.4, 0.0), cplx(0.0, 0.4), cplx(0.3, 0.2)}) {
        const auto check = squeezed_vacuum_eigen_check(beta, 80);
        const cplx oracle = beta / (2.0 * std::abs(beta)) * std::tanh(std::abs(beta));
        CHECK(std::abs(check.eigenvalue - oracle) < 1e-8 * std::abs(oracle));
        CHECK(check.residual < 1e-8);
    }
    CHECK(squeezed_vacuum_eigen_check(0.4, 80).eigenvalue.real() == doctest::Approx(0.18997).epsilon(1e-4));
}

TEST_CASE("pair states diagonalize H_S") {
    const double omega = 1.5;
    const cplx beta(0.25, -0.1);
    const int dim = 80;
    const auto h = hamiltonian_HS(beta, omega, dim);
    for (int n = 0; n < 4; ++n) {
        const auto psi = eigenstate_2n(n, beta, dim);
        const DenseVector residual = h.matrix() * psi.amplitudes() - omega * (n + 0.5) * psi.amplitudes();
        CHECK(residual.norm() < 1e-8);
        const auto raised = eigenstate_2n(n, beta, dim, PairConstruction::raise_vacuum);
        CHECK(std::abs(inner(psi, raised)) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("multiphoton Berry phase uses the weight 2n + 1/2") {
    const auto loop = make_circle_loop({}, Coordinate::beta1, Coordinate::beta2, 0, 0, 0.3, 200);
    EngineOptions opts;
    opts.check_convergence = false;
    const auto reports = multiphoton_berry_phases({0, 1}, loop, 60, opts);
    const double sh = std::sinh(0.3);
    for (const auto& r : reports) {
        const double oracle = -(2 * r.n + 0.5) * 2.0 * std::numbers::pi * sh * sh;
        CHECK(std::abs(r.gamma_wilson - oracle) < 1e-3);
        CHECK(r.discrepancy < 1e-3);
    }
    // n = 0 is the squeezed vacuum, identical to the oscillator ground state.
    CHECK(reports[0].gamma_wilson == doctest::Approx(wilson_loop_phase(0, loop, 60, opts)).epsilon(1e-12));

    const auto displaced = make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0, 0, 0.3, 64);
    CHECK_THROWS_AS(multiphoton_berry_phase(1, displaced, 60, opts), InvalidArgument);
}

TEST_CASE("square-root ladder hierarchy") {
    CHECK(a1_commutator_check(40) < 1e-12);
    CHECK(a1_number_spectrum_check(40) < 1e-10);
    CHECK(isomorphism_check(1, 80) < 1e-12);
    CHECK(isomorphism_check(2, 80) < 1e-12);
    CHECK(isomorphism_check(3, 128) < 1e-12);
    CHECK_THROWS_AS(ak_operator(2, 20), InvalidDimension);

    const auto [a1, a1d] = a1_operators(40);
    // a1 |2n> = sqrt(n) |2n - 2>
    for (int n = 1; n < 10; ++n) CHECK(a1(2 * n - 2, 2 * n).real() == doctest::Approx(std::sqrt(n)));
    CHECK(preserves_parity(a1));
}

TEST_CASE("the naive pair displacement is not unitary") {
    CHECK(naive_displacement_defect(0.5, 80) > 0.01);
    CHECK(naive_displacement_defect(0.0, 80) < 1e-14);
}
