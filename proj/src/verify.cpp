#include "berryphase/errors.hpp"
#include "berryphase/multiphoton.hpp"
#include "berryphase/runner.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

namespace berry::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned settings shared by the suites.
constexpr int kAlgebraDim = 80;
constexpr int kLoopSegments = 400;
constexpr int kAlphaDim = 60;
constexpr int kBetaDim = 80;

struct Recorder {
    std::string suite;
    std::vector<CheckResult>& out;

    /// measured <= threshold passes.
    void below(const std::string& name, double measured, double threshold) {
        out.push_back({suite, name, measured, threshold, measured <= threshold});
    }
    /// measured > threshold passes.
    void above(const std::string& name, double measured, double threshold) {
        out.push_back({suite, name, measured, threshold, measured > threshold});
    }
};

ParamPoint generic_point() {
    ParamPoint r;
    r.m = 1.3;
    r.omega = 0.8;
    r.alpha = {0.3, -0.2};
    r.beta = {0.25, 0.15};
    return r;
}

ParamLoop alpha_circle(double radius) {
    return make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0.0, 0.0, radius, kLoopSegments);
}

ParamLoop beta_circle(double radius) {
    return make_circle_loop({}, Coordinate::beta1, Coordinate::beta2, 0.0, 0.0, radius, kLoopSegments);
}

double squeeze_oracle(double weight, double radius) {
    const double sh = std::sinh(radius);
    return -weight * 2.0 * kPi * sh * sh;
}

void algebra_suite(Recorder& rec) {
    const int dim = kAlgebraDim;
    const int block = leading_block(dim);
    const ParamPoint r = generic_point();

    const OperatorMatrix g = generator_G(r, dim);
    rec.below("[G, G^+] = 1 on leading block", identity_deviation(commutator(g, g.adjoint()), block), 1e-9);

    // The conjugated form goes through truncated exponentials; pad and compare on the same block.
    const int padded = 3 * dim;
    rec.below("explicit G equals D S a S^+ D^+",
              block_deviation(generator_G(r, padded), generator_G_conjugated(r, padded), block), 1e-9);

    const OperatorMatrix h = deformed_hamiltonian(r, dim);
    rec.below("deformed Hamiltonian is hermitian", block_deviation(h, h.adjoint(), dim), 1e-10);

    const OperatorMatrix gen = squeeze_generator(r.beta, r, dim);
    const OperatorMatrix s = matrix_exponential(gen);
    rec.below("squeeze exponential is unitary", identity_deviation(s.adjoint() * s, dim), 1e-12);

    rec.below("[X G, G^+] = 1 on even subspace", pair_commutator_check(dim), 1e-9);
    rec.below("G^+ X G = a^+ a / 2 on even subspace", pair_number_check(dim), 1e-9);
    rec.below("[a1, a1^+] = 1 on even subspace", a1_commutator_check(dim), 1e-9);
    rec.below("a1^+ a1 spectrum is 0, 1, 2, ...", a1_number_spectrum_check(dim), 1e-9);
    rec.below("a1 on H1 is isomorphic to a on H0", isomorphism_check(1, dim), 1e-9);
    rec.below("a2 on H2 is isomorphic to a on H0", isomorphism_check(2, dim), 1e-9);
}

void phases_suite(Recorder& rec) {
    EngineOptions fast;
    fast.check_convergence = false;

    const ParamLoop alpha = alpha_circle(0.5);
    const auto alpha_phases = total_phases({0, 1, 2}, alpha, kAlphaDim, fast);
    for (const auto& p : alpha_phases) {
        rec.below("alpha circle r=0.5 n=" + std::to_string(p.n) + " |gamma_wilson + pi/2|",
                  std::abs(p.gamma_wilson + kPi / 2.0), 1e-3);
    }
    rec.below("alpha circle Hannay angle |gamma_0 - gamma_1|",
              std::abs(alpha_phases[0].gamma_wilson - alpha_phases[1].gamma_wilson), 1e-6);

    const ParamLoop beta = beta_circle(0.3);
    const auto beta_phases = total_phases({0, 1}, beta, kBetaDim, fast);
    for (const auto& p : beta_phases) {
        rec.below("beta circle r=0.3 n=" + std::to_string(p.n) + " wilson vs closed form", p.discrepancy, 1e-3);
    }
    const double g0 = beta_phases[0].gamma_wilson;
    const double g1 = beta_phases[1].gamma_wilson;
    rec.below("beta circle Hannay angle vs 2 pi sinh^2(0.3)", std::abs((g0 - g1) + squeeze_oracle(1.0, 0.3)), 1e-3);
    rec.below("beta circle gamma_1 / gamma_0 vs 3", std::abs(g1 / g0 - 3.0), 1e-3);

    const std::array<Wave, 1> lambda_wave = {Wave{Coordinate::lambda, 0.0, 0.5, 1, 0.0}};
    const ParamLoop lambda_loop = make_wave_loop({}, lambda_wave, kLoopSegments, "lambda only");
    const std::array<Wave, 1> flat = {Wave{Coordinate::alpha1, 0.2, 0.0, 1, 0.0}};
    const ParamLoop constant = make_wave_loop({}, flat, kLoopSegments, "constant");
    double null_max = 0.0;
    for (const auto* loop : {&lambda_loop, &constant}) {
        for (double g : wilson_loop_phases({0, 1, 2}, *loop, kAlphaDim, fast)) null_max = std::max(null_max, std::abs(g));
    }
    rec.below("lambda-only and constant loops |gamma_n|", null_max, 1e-8);

    // Small circle: gamma ~ curvature * area, counterclockwise.
    const double radius = 0.05;
    const ParamLoop small =
        make_circle_loop({}, Coordinate::beta1, Coordinate::beta2, 0.3, 0.0, radius, kLoopSegments);
    for (int n : {0, 1}) {
        ParamPoint center;
        center.beta = 0.3;
        const double expected = curvature_at(center, CurvaturePlane::beta, n) * kPi * radius * radius;
        const double got = wilson_loop_phase(n, small, kBetaDim, fast);
        rec.below("curvature at beta=0.3 n=" + std::to_string(n) + " relative error", std::abs(got / expected - 1.0),
                  0.05);
    }

    const std::vector<ParamLoop> parts = {
        make_circle_loop({}, Coordinate::alpha1, Coordinate::alpha2, 0.0, 0.0, 0.4, 190),
        make_circle_loop({}, Coordinate::beta1, Coordinate::beta2, 0.0, 0.0, 0.25, 190)};
    const ParamLoop mixed = compose_loops(parts, 10);
    rec.below("composed alpha/beta loop linear in n (max residual)", linearity_check(mixed, 4, 120, fast), 1e-5);
}

void multiphoton_suite(Recorder& rec) {
    EngineOptions fast;
    fast.check_convergence = false;
    const auto rep = multiphoton_berry_phase(1, beta_circle(0.3), kBetaDim, fast);
    rec.below("|2; beta> over beta circle r=0.3 vs (2 + 1/2) unit",
              std::abs(rep.gamma_wilson - squeeze_oracle(2.5, 0.3)), 1e-3);

    for (cplx beta : {cplx(0.4, 0.0), cplx(0.0, 0.4), cplx(0.3, 0.2)}) {
        const auto check = squeezed_vacuum_eigen_check(beta, kAlgebraDim);
        const cplx expected = beta / (2.0 * std::abs(beta)) * std::tanh(std::abs(beta));
        char name[96];
        std::snprintf(name, sizeof name, "X G eigenvalue of S|0>, beta=%.1f%+.1fi (relative)", beta.real(),
                      beta.imag());
        rec.below(name, std::abs(check.eigenvalue - expected) / std::abs(expected), 1e-8);
    }

    const cplx beta(0.2, 0.1);
    double construction_gap = 0.0;
    for (int n : {1, 2}) {
        const auto a = eigenstate_2n(n, beta, kAlgebraDim, PairConstruction::squeeze_fock);
        const auto b = eigenstate_2n(n, beta, kAlgebraDim, PairConstruction::raise_vacuum);
        construction_gap = std::max(construction_gap, 1.0 - std::abs(inner(a, b)));
    }
    rec.below("S|2n> and raised vacuum give the same ray", construction_gap, 1e-10);

    rec.above("naive pair displacement is not unitary (alpha=0.5)", naive_displacement_defect(0.5, kAlgebraDim),
              0.01);
}

void appendix_suite(Recorder& rec) {
    const GridSpec grid;
    EngineOptions fast;
    fast.check_convergence = false;

    const ParamLoop alpha = alpha_circle(0.5);
    const ParamLoop beta = beta_circle(0.3);
    const double fock_alpha = wilson_loop_phase(0, alpha, kAlphaDim, fast);
    const double fock_beta = wilson_loop_phase(0, beta, kBetaDim, fast);
    const double grid_alpha = gamma0_grid(alpha, grid);
    const double grid_beta = gamma0_grid(beta, grid);
    rec.below("grid gamma_0 vs Fock, alpha circle", std::abs(grid_alpha - fock_alpha), 2e-3);
    rec.below("grid gamma_0 vs Fock, beta circle", std::abs(grid_beta - fock_beta), 2e-3);
    rec.below("grid gamma_0 alpha circle vs -pi/2", std::abs(grid_alpha + kPi / 2.0), 1e-3);
    rec.below("grid gamma_0 beta circle vs closed form", std::abs(grid_beta - squeeze_oracle(0.5, 0.3)), 1e-3);
    rec.below("connection gamma_0 beta circle vs closed form",
              std::abs(gamma0_grid_connection(beta, grid) - squeeze_oracle(0.5, 0.3)), 1e-3);

    const ParamPoint r = generic_point();
    rec.below("grid ground state solves G psi = 0", ground_state_residual(r, grid), 1e-6);
    rec.below("grid ground state equals Fock ground state", 1.0 - fock_grid_overlap(0, r, grid, kAlgebraDim), 1e-8);

    const ParamDisplacement d{.lambda = 0.01, .alpha1 = -0.02, .alpha2 = 0.015, .beta1 = 0.01, .beta2 = -0.02};
    const auto matrix = commutator_one_form_matrix(r, d, kAlgebraDim);
    rec.below("commutator one-form closed form vs matrix scalar",
              std::abs(matrix.scalar - commutator_one_form(r, d)), 1e-6);
    rec.below("commutator one-form is a multiple of 1", matrix.off_identity, 1e-6);

    const double fock_gamma1 = wilson_loop_phase(1, beta, kBetaDim, fast);
    rec.below("gamma_1 from gamma_0 plus commutator vs Fock gamma_1",
              std::abs(gamma1_from_gamma0(beta, grid) - fock_gamma1), 1e-3);

    ParamPoint q;
    q.omega = 2.0;
    q.beta = {0.4, 0.2};
    const auto quad = quadratic_identity_check(q, kAlgebraDim);
    rec.below("quadratic form with omega-scaled B matches S H S^+", quad.corrected_deviation, 1e-7);
    rec.above("quadratic form with unscaled B fails for omega=2", quad.printed_deviation, 1e-7);
}

}  // namespace

Suite parse_suite(const std::string& name) {
    if (name == "algebra") return Suite::algebra;
    if (name == "phases") return Suite::phases;
    if (name == "multiphoton") return Suite::multiphoton;
    if (name == "appendix") return Suite::appendix;
    if (name == "all") return Suite::all;
    throw ValidationError("unknown suite '" + name + "' (algebra, phases, multiphoton, appendix, all)");
}

std::vector<CheckResult> verify(Suite suite) {
    std::vector<CheckResult> out;
    const std::vector<std::pair<Suite, std::function<void(Recorder&)>>> table = {
        {Suite::algebra, algebra_suite},
        {Suite::phases, phases_suite},
        {Suite::multiphoton, multiphoton_suite},
        {Suite::appendix, appendix_suite},
    };
    const char* names[] = {"algebra", "phases", "multiphoton", "appendix"};
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (suite != Suite::all && suite != table[i].first) continue;
        Recorder rec{names[i], out};
        try {
            table[i].second(rec);
        } catch (const Error& e) {
            out.push_back({names[i], std::string("suite aborted: ") + e.what(), 0.0, 0.0, false});
        }
    }
    return out;
}

std::string format_check(const CheckResult& check) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s [%s] %s: measured %.3e (threshold %.1e)", check.passed ? "PASS" : "FAIL",
                  check.suite.c_str(), check.name.c_str(), check.measured, check.threshold);
    return buf;
}

}  // namespace berry::cli
