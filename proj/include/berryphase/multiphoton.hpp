#pragma once

// Two-photon ladder algebra on the even subspace H1 = span{|2n>}: the pair
// operators a^+2 and X a^2 with X = (1/2)(1 + a^+ a)^-1, the squeezed vacuum as
// their coherent state, the hermitian Hamiltonian H_S and its eigenstates,
// their Berry phases, and the square-root ladder hierarchy a_k on H_k.

#include "berryphase/berry_engine.hpp"

#include <utility>
#include <vector>

namespace berry {

/// Embedding of H_k = span{|2^k n>} into the reference basis.
struct SubspaceMap {
    int level = 0;
    int dim_parent = 0;
    int dim_sub = 0;

    int parent_index(int n) const;
};

SubspaceMap make_subspace_map(int level, int dim_parent);

/// X = (1/2) (1 + a^+ a)^-1.
OperatorMatrix x_operator(int dim);
/// X a^2, the lowering operator on H1.
OperatorMatrix pair_lowering(int dim);
/// a^+2, the raising operator on H1.
OperatorMatrix pair_raising(int dim);

/// max deviation of ([X a^2, a^+2] - 1)|2n> over even indices in the leading block.
double pair_commutator_check(int dim);
/// max deviation of (a^+2 X a^2 - n)|2n> over even indices in the leading block.
double pair_number_check(int dim);

struct CoherenceCheck {
    cplx eigenvalue{};  ///< fitted <psi| X a^2 |psi> for psi = S(beta)|0>
    cplx expected{};    ///< (beta / 2|beta|) tanh|beta|
    double residual = 0.0;
};

CoherenceCheck squeezed_vacuum_eigen_check(cplx beta, int dim, double tail_tolerance = 1e-10);

/// H_S = (omega/2) S [a^+2 (1 + a^+ a)^-1 a^2 + 1] S^+ in the reference basis.
OperatorMatrix hamiltonian_HS(cplx beta, double omega, int dim);

enum class PairConstruction {
    squeeze_fock,  ///< S |2n>
    raise_vacuum,  ///< (S a^+2 S^+)^n S |0>, normalized
};

StateVector eigenstate_2n(int n, const ParamPoint& r, int dim, PairConstruction construction,
                          const EigenstateOptions& options = {});
StateVector eigenstate_2n(int n, cplx beta, int dim, PairConstruction construction = PairConstruction::squeeze_fock);

/// Berry phases of |2n; beta> over a loop in (m, omega, beta); alpha must vanish on the loop.
/// Segment arguments for the pair states |2n; R>, indexed [level][segment].
std::vector<std::vector<double>> multiphoton_segment_arguments(const std::vector<int>& levels, const ParamLoop& loop,
                                                               int dim, const EngineOptions& options = {});

std::vector<PhaseReport> multiphoton_berry_phases(const std::vector<int>& levels, const ParamLoop& loop, int dim,
                                                  const EngineOptions& options = {});
PhaseReport multiphoton_berry_phase(int n, const ParamLoop& loop, int dim, const EngineOptions& options = {});

/// a1 = 2^-1/2 (1 + a^+ a)^-1/2 a^2 and its adjoint.
std::pair<OperatorMatrix, OperatorMatrix> a1_operators(int dim);
/// a_k = 2^-1/2 (1 + a_{k-1}^+ a_{k-1})^-1/2 a_{k-1}^2, a_0 = a. Requires dim >= 8 * 2^k.
OperatorMatrix ak_operator(int k, int dim);
/// max |<2^k m| a_k |2^k n> - sqrt(n) delta_{m,n-1}| over H_k indices in the leading block.
double isomorphism_check(int k, int dim);
/// max deviation of ([a1, a1^+] - 1) on even indices in the leading block.
double a1_commutator_check(int dim);
/// max |eigenvalue_j - j| of a1^+ a1 restricted to the even indices of the leading block.
double a1_number_spectrum_check(int dim);

/// || E^+ E - 1 || on the leading even block for E = exp(alpha a^+2 - alpha* X a^2).
double naive_displacement_defect(cplx alpha, int dim);

/// True when the operator has no even <-> odd matrix elements above `tol`.
bool preserves_parity(const OperatorMatrix& op, double tol = 0.0);

}  // namespace berry
