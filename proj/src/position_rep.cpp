#include "berryphase/position_rep.hpp"

#include "berryphase/errors.hpp"
#include "berryphase/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace berry {

namespace {

using Quadrature = boost::math::quadrature::gauss<double, 7>;

// Coefficients of G(R) = kx * x + kd * d/dx + k0 in the position representation.
struct PositionForm {
    cplx kx, kd, k0;
};

PositionForm position_form(const ParamPoint& r) {
    r.validate();
    const double mw = r.m * r.omega;
    const double scale_x = std::sqrt(0.5 * mw);
    const double scale_d = 1.0 / std::sqrt(2.0 * mw);
    const double mod = std::abs(r.beta);
    const double ch = std::cosh(mod);
    const cplx sq = r.beta * sinhc(mod);
    return {scale_x * (ch - sq), scale_d * (ch + sq), sq * std::conj(r.alpha) - ch * r.alpha};
}

double normalization(cplx u, cplx v) {
    return std::pow(u.real() / std::numbers::pi, 0.25) * std::exp(-v.real() * v.real() / (2.0 * u.real()));
}

StateVector sample_gaussian(const GaussianParams& g, const GridSpec& grid) {
    DenseVector amps(grid.points);
    for (int i = 0; i < grid.points; ++i) {
        const double x = grid.x(i);
        amps(i) = g.prefactor * std::exp(-0.5 * g.u * x * x - g.v * x);
    }
    return StateVector(std::move(amps), Basis::grid);
}

StateVector grid_normalized(const StateVector& psi, const GridSpec& grid) {
    const double n = std::sqrt(grid_inner(psi, psi, grid).real());
    if (!(n > 0.0)) throw GridError("state vanishes on the grid");
    return StateVector(psi.amplitudes() / n, Basis::grid);
}

ParamPoint displaced(const ParamPoint& r, const ParamDisplacement& d, double t) {
    ParamPoint p = r;
    p.m = r.m * std::exp(t * d.lambda);
    p.alpha += t * cplx(d.alpha1, d.alpha2);
    p.beta += t * cplx(d.beta1, d.beta2);
    return p;
}

ParamDisplacement chord(const ParamPoint& a, const ParamPoint& b) {
    return {b.lambda() - a.lambda(), b.alpha.real() - a.alpha.real(), b.alpha.imag() - a.alpha.imag(),
            b.beta.real() - a.beta.real(), b.beta.imag() - a.beta.imag()};
}

}  // namespace

void GridSpec::validate() const {
    if (points < 512) throw GridError("grid needs at least 512 points, got " + std::to_string(points));
    if (!(x_max > x_min)) throw GridError("grid needs x_max > x_min");
}

UVCoefficients uv_coefficients(const ParamPoint& r) {
    r.validate();
    const double mw = r.m * r.omega;
    const double mod = std::abs(r.beta);
    const double b1 = r.beta.real();
    const double b2 = r.beta.imag();
    const double a1 = r.alpha.real();
    const double a2 = r.alpha.imag();
    // Numerator and denominator divided through by |beta|; sinh(2|b|)/|b| = 2 sinhc(2|b|).
    const double sh2 = 2.0 * sinhc(2.0 * mod);
    const double ch2 = std::cosh(2.0 * mod);
    const double denominator = ch2 + b1 * sh2;
    if (!(denominator > 0.0)) {
        throw DomainError("uv_coefficients: non-positive denominator |b| cosh 2|b| + b1 sinh 2|b|");
    }

    UVCoefficients out;
    out.printed.u = 0.5 * mw * cplx(1.0, -b2 * sh2) / denominator;
    out.printed.v = std::sqrt(2.0 * mw) * cplx(-a1, (a1 * b2 - a2 * b1) * sh2 - a2 * ch2) / denominator;
    out.printed.prefactor = std::pow(mw / (2.0 * std::numbers::pi), 0.25) *
                            std::exp(-out.printed.v.real() * out.printed.v.real() / (4.0 * out.printed.u.real()));

    const PositionForm g = position_form(r);
    out.corrected.u = g.kx / g.kd;
    out.corrected.v = g.k0 / g.kd;
    if (!(out.corrected.u.real() > 0.0)) throw DomainError("ground state is not normalizable");
    out.corrected.prefactor = normalization(out.corrected.u, out.corrected.v);
    return out;
}

cplx grid_inner(const StateVector& u, const StateVector& v, const GridSpec& grid) {
    if (u.dim() != grid.points || v.dim() != grid.points) throw InvalidArgument("grid_inner: size mismatch");
    if (u.basis() != Basis::grid || v.basis() != Basis::grid) throw InvalidArgument("grid_inner: not grid states");
    const auto& a = u.amplitudes();
    const auto& b = v.amplitudes();
    const auto n = a.size();
    cplx sum = a.dot(b) - 0.5 * (std::conj(a(0)) * b(0) + std::conj(a(n - 1)) * b(n - 1));
    return sum * grid.spacing();
}

StateVector ground_wavefunction(const ParamPoint& r, const GridSpec& grid) {
    grid.validate();
    const GaussianParams g = uv_coefficients(r).corrected;
    const double center = -g.v.real() / g.u.real();
    const double sigma = 1.0 / std::sqrt(2.0 * g.u.real());
    if (center - 8.0 * sigma < grid.x_min || center + 8.0 * sigma > grid.x_max) {
        throw GridError("grid [" + std::to_string(grid.x_min) + ", " + std::to_string(grid.x_max) +
                        "] does not span 8 standard deviations around " + std::to_string(center));
    }
    StateVector psi = grid_normalized(sample_gaussian(g, grid), grid);
    const double edge = std::max(std::abs(psi[0]), std::abs(psi[grid.points - 1]));
    if (edge >= 1e-10) throw GridError("boundary amplitude " + std::to_string(edge) + " exceeds 1e-10");
    return psi;
}

double ground_state_residual(const ParamPoint& r, const GridSpec& grid) {
    const StateVector psi = ground_wavefunction(r, grid);
    const PositionForm g = position_form(r);
    const double h = grid.spacing();
    const auto& f = psi.amplitudes();
    double residual = 0.0;
    double norm = 0.0;
    for (int i = 2; i + 2 < grid.points; ++i) {
        const cplx deriv = (-f(i + 2) + 8.0 * f(i + 1) - 8.0 * f(i - 1) + f(i - 2)) / (12.0 * h);
        const cplx gpsi = g.kx * grid.x(i) * f(i) + g.kd * deriv + g.k0 * f(i);
        residual += std::norm(gpsi);
        norm += std::norm(f(i));
    }
    return std::sqrt(residual / norm);
}

DenseMatrix hermite_basis(const GridSpec& grid, int dim) {
    grid.validate();
    if (dim < 1) throw InvalidDimension("hermite_basis needs dim >= 1");
    DenseMatrix phi = DenseMatrix::Zero(grid.points, dim);
    const double norm0 = std::pow(std::numbers::pi, -0.25);
    for (int i = 0; i < grid.points; ++i) {
        const double x = grid.x(i);
        double prev = 0.0;
        double cur = norm0 * std::exp(-0.5 * x * x);
        phi(i, 0) = cur;
        for (int k = 0; k + 1 < dim; ++k) {
            const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
            prev = cur;
            cur = next;
            phi(i, k + 1) = cur;
        }
    }
    return phi;
}

StateVector fock_to_grid(const StateVector& fock, const GridSpec& grid) {
    if (fock.basis() != Basis::fock) throw InvalidArgument("fock_to_grid expects a Fock-basis state");
    return StateVector(hermite_basis(grid, fock.dim()) * fock.amplitudes(), Basis::grid);
}

double fock_grid_overlap(int n, const ParamPoint& r, const GridSpec& grid, int dim) {
    const StateVector psi_grid = ground_wavefunction(r, grid);
    const StateVector psi_fock = grid_normalized(fock_to_grid(eigenstate(n, r, dim), grid), grid);
    return std::abs(grid_inner(psi_grid, psi_fock, grid));
}

double gamma0_grid(const ParamLoop& loop, const GridSpec& grid, double min_overlap) {
    const StateBuilder build = [&](const ParamPoint& r) { return std::vector<StateVector>{ground_wavefunction(r, grid)}; };
    const InnerProduct product = [&](const StateVector& a, const StateVector& b) { return grid_inner(a, b, grid); };
    return wilson_phase_from_arguments(segment_arguments(loop, build, 1, min_overlap, product).front());
}

double gamma0_grid_connection(const ParamLoop& loop, const GridSpec& grid, double step) {
    std::vector<double> pieces(static_cast<std::size_t>(loop.segments()));
    detail::parallel_for(pieces.size(), [&](std::size_t k) {
        const ParamPoint& a = loop[static_cast<int>(k)];
        const ParamPoint& b = loop[static_cast<int>(k) + 1];
        if (a == b) {
            pieces[k] = 0.0;
            return;
        }
        pieces[k] = Quadrature::integrate(
            [&](double t) {
                const StateVector psi = ground_wavefunction(interpolate(a, b, t), grid);
                const StateVector up = ground_wavefunction(interpolate(a, b, t + step), grid);
                const StateVector down = ground_wavefunction(interpolate(a, b, t - step), grid);
                const StateVector deriv((up.amplitudes() - down.amplitudes()) / (2.0 * step), Basis::grid);
                return (cplx(0.0, 1.0) * grid_inner(psi, deriv, grid)).real();
            },
            0.0, 1.0);
    });
    double total = 0.0;
    for (double p : pieces) total += p;
    return total;
}

cplx commutator_one_form(const ParamPoint& r, const ParamDisplacement& d) {
    const double mod = std::abs(r.beta);
    const double sc = sinhc(mod);
    const double b1 = r.beta.real();
    const double b2 = r.beta.imag();
    const double lambda_part = b2 * sc * std::cosh(mod) * d.lambda;
    const double beta_part = sc * sc * (b2 * d.beta1 - b1 * d.beta2);
    return {0.0, lambda_part - beta_part};
}

CommutatorMatrixCheck commutator_one_form_matrix(const ParamPoint& r, const ParamDisplacement& d, int dim,
                                                 double step) {
    const double length = std::sqrt(d.lambda * d.lambda + d.alpha1 * d.alpha1 + d.alpha2 * d.alpha2 +
                                    d.beta1 * d.beta1 + d.beta2 * d.beta2);
    CommutatorMatrixCheck out;
    if (length == 0.0) return out;
    const ParamDisplacement unit{d.lambda / length, d.alpha1 / length, d.alpha2 / length, d.beta1 / length,
                                 d.beta2 / length};
    const OperatorMatrix g = generator_G(r, dim);
    const OperatorMatrix up = generator_G(displaced(r, unit, step), dim).adjoint();
    const OperatorMatrix down = generator_G(displaced(r, unit, -step), dim).adjoint();
    const OperatorMatrix deriv = (length / (2.0 * step)) * (up - down);
    const OperatorMatrix c = commutator(g, deriv);
    const int block = leading_block(dim);
    out.scalar = c.matrix().diagonal().head(block).mean();
    out.off_identity = block_deviation(c, out.scalar * OperatorMatrix::identity(dim), block);
    return out;
}

double gamma1_from_gamma0(const ParamLoop& loop, const GridSpec& grid) {
    double correction = 0.0;
    for (int k = 0; k < loop.segments(); ++k) {
        const ParamPoint& a = loop[k];
        const ParamPoint& b = loop[k + 1];
        const ParamDisplacement d = chord(a, b);
        correction += Quadrature::integrate(
            [&](double t) { return (cplx(0.0, 1.0) * commutator_one_form(interpolate(a, b, t), d)).real(); }, 0.0,
            1.0);
    }
    return gamma0_grid(loop, grid) + correction;
}

}  // namespace berry
