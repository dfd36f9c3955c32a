#pragma once

// Position-grid realization of the displaced squeezed ground state and an
// independent route to gamma_0 and gamma_1: grid overlaps, a finite-difference
// Berry connection, and the commutator one-form [G, dG^+].

#include "berryphase/berry_engine.hpp"

namespace berry {

struct GridSpec {
    double x_min = -12.0;
    double x_max = 12.0;
    int points = 2048;

    /// Throws GridError unless points >= 512 and x_max > x_min.
    void validate() const;
    double spacing() const { return (x_max - x_min) / (points - 1); }
    double x(int i) const { return x_min + i * spacing(); }
};

/// psi(x) = prefactor * exp(-u x^2 / 2 - v x).
struct GaussianParams {
    cplx u{};
    cplx v{};
    double prefactor = 0.0;
};

struct UVCoefficients {
    /// Coefficients as printed alongside the closed-form derivation.
    GaussianParams printed;
    /// Unique normalizable solution of G(R) psi = 0.
    GaussianParams corrected;
};

UVCoefficients uv_coefficients(const ParamPoint& r);

/// Composite-trapezoid inner product on the grid.
cplx grid_inner(const StateVector& u, const StateVector& v, const GridSpec& grid);

/// Ground state sampled on the grid from the corrected coefficients, unit grid norm,
/// real positive prefactor. Throws GridError if the grid does not cover the state.
StateVector ground_wavefunction(const ParamPoint& r, const GridSpec& grid);

/// Residual || G(R) psi || / || psi || with q = x and d/dx a 4th-order central difference.
double ground_state_residual(const ParamPoint& r, const GridSpec& grid);

/// Hermite functions phi_k(x), k < dim, sampled on the grid (points x dim).
DenseMatrix hermite_basis(const GridSpec& grid, int dim);

/// Fock amplitudes expanded on the grid.
StateVector fock_to_grid(const StateVector& fock, const GridSpec& grid);

/// |<psi_0 grid | eigenstate(n, R) on grid>|, both normalized on the grid.
double fock_grid_overlap(int n, const ParamPoint& r, const GridSpec& grid, int dim);

/// Discrete overlap-product gamma_0 from grid wavefunctions.
double gamma0_grid(const ParamLoop& loop, const GridSpec& grid, double min_overlap = 0.9);

/// gamma_0 = i \oint <psi|d psi> from central differences along each chord.
double gamma0_grid_connection(const ParamLoop& loop, const GridSpec& grid, double step = 1e-4);

/// Infinitesimal parameter displacement in (lambda, alpha1, alpha2, beta1, beta2).
struct ParamDisplacement {
    double lambda = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
};

/// Closed form of <0,R| [G, dG^+] |0,R>:
/// i (b2/|b|) sinh|b| cosh|b| dlambda - i (sinh|b|/|b|)^2 (b2 db1 - b1 db2).
cplx commutator_one_form(const ParamPoint& r, const ParamDisplacement& d);

struct CommutatorMatrixCheck {
    cplx scalar{};                ///< mean diagonal of [G, dG^+] on the leading block
    double off_identity = 0.0;    ///< max | [G, dG^+] - scalar * 1 | on the leading block
};

/// [G(R), (G^+(R + h d) - G^+(R - h d)) / 2h] from generator_G.
CommutatorMatrixCheck commutator_one_form_matrix(const ParamPoint& r, const ParamDisplacement& d, int dim,
                                                 double step = 1e-5);

/// gamma_1 = gamma_0(grid) + i \oint <0|[G, dG^+]|0>.
double gamma1_from_gamma0(const ParamLoop& loop, const GridSpec& grid);

}  // namespace berry
