#include "berryphase/multiphoton.hpp"

#include "berryphase/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace berry {

namespace {

DenseVector column_deviation(const OperatorMatrix& op, int index, const DenseVector& expected) {
    return op.matrix().col(index) - expected;
}

void require_no_displacement(const ParamLoop& loop) {
    for (const auto& p : loop.points()) {
        if (p.alpha != cplx(0.0)) {
            throw InvalidArgument("multiphoton loops vary only m, omega and beta; alpha must be zero");
        }
    }
}

}  // namespace

int SubspaceMap::parent_index(int n) const {
    if (n < 0 || n >= dim_sub) throw InvalidArgument("subspace index out of range");
    return n << level;
}

SubspaceMap make_subspace_map(int level, int dim_parent) {
    if (level < 0) throw InvalidArgument("subspace level must be >= 0");
    if (dim_parent < 2) throw InvalidDimension("parent dimension must be >= 2");
    return {level, dim_parent, (dim_parent - 1) / (1 << level) + 1};
}

OperatorMatrix x_operator(int dim) {
    return number_function([](double x) { return 0.5 / x; }, dim);
}

OperatorMatrix pair_lowering(int dim) {
    const OperatorMatrix a = make_annihilator(dim);
    return x_operator(dim) * (a * a);
}

OperatorMatrix pair_raising(int dim) {
    const OperatorMatrix ad = make_creator(dim);
    return ad * ad;
}

double pair_commutator_check(int dim) {
    if (dim < 8) throw InvalidDimension("pair_commutator_check needs dim >= 8");
    const OperatorMatrix c = commutator(pair_lowering(dim), pair_raising(dim));
    const int block = leading_block(dim);
    double worst = 0.0;
    for (int idx = 0; idx < block; idx += 2) {
        DenseVector e = DenseVector::Zero(dim);
        e(idx) = 1.0;
        worst = std::max(worst, column_deviation(c, idx, e).cwiseAbs().maxCoeff());
    }
    return worst;
}

double pair_number_check(int dim) {
    if (dim < 8) throw InvalidDimension("pair_number_check needs dim >= 8");
    const OperatorMatrix n_pair = pair_raising(dim) * pair_lowering(dim);
    const int block = leading_block(dim);
    double worst = 0.0;
    for (int idx = 0; idx < block; idx += 2) {
        DenseVector e = DenseVector::Zero(dim);
        e(idx) = 0.5 * idx;
        worst = std::max(worst, column_deviation(n_pair, idx, e).cwiseAbs().maxCoeff());
    }
    return worst;
}

CoherenceCheck squeezed_vacuum_eigen_check(cplx beta, int dim, double tail_tolerance) {
    CoherenceCheck out;
    const double mod = std::abs(beta);
    out.expected = mod == 0.0 ? cplx(0.0) : beta / (2.0 * mod) * std::tanh(mod);
    const ParamPoint ref;
    StateVector psi = StateVector::basis_vector(dim, 0);
    if (mod != 0.0) psi = expm_apply(squeeze_generator(beta, ref, dim), psi).normalized();
    const double tail = psi.tail_mass();
    if (tail > tail_tolerance) {
        throw TruncationError("squeezed vacuum at dim=" + std::to_string(dim) + " exceeds the tail-mass tolerance",
                              tail);
    }
    const StateVector lowered = apply(pair_lowering(dim), psi);
    out.eigenvalue = inner(psi, lowered);
    out.residual = (lowered.amplitudes() - out.eigenvalue * psi.amplitudes()).norm();
    return out;
}

OperatorMatrix hamiltonian_HS(cplx beta, double omega, int dim) {
    const OperatorMatrix a = make_annihilator(dim);
    const OperatorMatrix ad = a.adjoint();
    const OperatorMatrix inv = number_function([](double x) { return 1.0 / x; }, dim);
    const OperatorMatrix core = ad * ad * inv * a * a + OperatorMatrix::identity(dim);
    const OperatorMatrix s = squeeze_op(beta, ParamPoint{}, dim);
    return (0.5 * omega) * (s * core * s.adjoint());
}

namespace {

// Raises the squeezed vacuum at R with G^+ = S a(R)^+2 S^+ and records the
// normalized states for the requested pair levels.
std::vector<StateVector> raised_states(const std::vector<int>& levels, const ParamPoint& r, int dim,
                                       const EigenstateOptions& options) {
    const int top = *std::max_element(levels.begin(), levels.end());
    ParamPoint vacuum_point = r;
    vacuum_point.alpha = 0.0;
    const SparseOperator s_gen = sparse_squeeze_generator(r.beta, r, dim);
    const SparseOperator s_gen_inv = -s_gen;
    const SparseOperator ad = sparse_ladder_at(r, dim).adjoint();
    const SparseOperator raise = ad * ad;
    const bool squeezed = r.beta != cplx(0.0);

    std::vector<DenseVector> by_level(static_cast<std::size_t>(top) + 1);
    StateVector current = eigenstate(0, vacuum_point, dim, options);
    by_level[0] = current.amplitudes();
    for (int n = 1; n <= top; ++n) {
        DenseMatrix v = current.amplitudes();
        if (squeezed) v = expm_apply(s_gen_inv, v, options.expm_tolerance);
        v = raise * v;
        if (squeezed) v = expm_apply(s_gen, v, options.expm_tolerance);
        current = StateVector(DenseVector(v.col(0))).normalized();
        by_level[static_cast<std::size_t>(n)] = current.amplitudes();
    }

    std::vector<StateVector> out;
    for (int n : levels) {
        StateVector s(by_level[static_cast<std::size_t>(n)]);
        const double tail = s.tail_mass();
        if (tail > options.tail_tolerance) {
            throw TruncationError("pair state n=" + std::to_string(n) + " at dim=" + std::to_string(dim) +
                                      " exceeds the tail-mass tolerance",
                                  tail);
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

StateVector eigenstate_2n(int n, const ParamPoint& r, int dim, PairConstruction construction,
                          const EigenstateOptions& options) {
    if (n < 0) throw InvalidArgument("pair level must be >= 0");
    if (r.alpha != cplx(0.0)) throw InvalidArgument("pair eigenstates carry no displacement; alpha must be zero");
    if (construction == PairConstruction::squeeze_fock) return eigenstate(2 * n, r, dim, options);
    return raised_states({n}, r, dim, options).front();
}

StateVector eigenstate_2n(int n, cplx beta, int dim, PairConstruction construction) {
    ParamPoint r;
    r.beta = beta;
    return eigenstate_2n(n, r, dim, construction);
}

std::vector<std::vector<double>> multiphoton_segment_arguments(const std::vector<int>& levels, const ParamLoop& loop,
                                                               int dim, const EngineOptions& options) {
    require_no_displacement(loop);
    for (int n : levels) {
        if (n < 0) throw InvalidArgument("pair level must be >= 0");
    }
    const auto eig = options.eigenstate_options();
    const StateBuilder build = [&](const ParamPoint& r) { return raised_states(levels, r, dim, eig); };
    return segment_arguments(loop, build, levels.size(), options.min_overlap);
}

std::vector<PhaseReport> multiphoton_berry_phases(const std::vector<int>& levels, const ParamLoop& loop, int dim,
                                                  const EngineOptions& options) {
    auto phases_at = [&](int d) {
        const auto args = multiphoton_segment_arguments(levels, loop, d, options);
        std::vector<double> g;
        for (const auto& a : args) g.push_back(wilson_phase_from_arguments(a));
        return g;
    };

    const auto gammas = phases_at(dim);
    std::vector<double> refined;
    const bool can_refine = options.check_convergence && 2 * dim <= options.max_dim;
    if (can_refine) refined = phases_at(2 * dim);

    const double squeeze_unit = line_integral(loop, squeeze_one_form);
    std::vector<PhaseReport> out;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        PhaseReport rep;
        rep.n = levels[j];
        rep.gamma_wilson = gammas[j];
        rep.gamma_d = 0.0;
        rep.gamma_s = (2 * levels[j] + 0.5) * squeeze_unit;
        rep.gamma_closed = rep.gamma_s;
        rep.discrepancy = std::abs(rep.gamma_wilson - rep.gamma_closed);
        rep.dim = dim;
        rep.segments = loop.segments();
        rep.converged = can_refine && std::abs(refined[j] - gammas[j]) < options.convergence_tolerance;
        out.push_back(rep);
    }
    return out;
}

PhaseReport multiphoton_berry_phase(int n, const ParamLoop& loop, int dim, const EngineOptions& options) {
    return multiphoton_berry_phases({n}, loop, dim, options).front();
}

std::pair<OperatorMatrix, OperatorMatrix> a1_operators(int dim) {
    OperatorMatrix a1 = ak_operator(1, dim);
    OperatorMatrix a1d = a1.adjoint();
    return {std::move(a1), std::move(a1d)};
}

OperatorMatrix ak_operator(int k, int dim) {
    if (k < 0) throw InvalidArgument("ladder level k must be >= 0");
    if (k > 16 || dim < 8 * (1 << k)) {
        throw InvalidDimension("a_" + std::to_string(k) + " needs dim >= " + std::to_string(8 * (1 << std::min(k, 16))) +
                               ", got " + std::to_string(dim));
    }
    OperatorMatrix current = make_annihilator(dim);
    for (int level = 1; level <= k; ++level) {
        const DenseMatrix number = current.matrix().adjoint() * current.matrix();
        // a_{k-1} shifts |m> -> |m - 2^(k-1)>, so its number operator is diagonal.
        const DenseMatrix off = number - DenseMatrix(number.diagonal().asDiagonal());
        if (off.cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, number.cwiseAbs().maxCoeff())) {
            throw AccuracyError("a_k recursion: number operator is not diagonal", off.cwiseAbs().maxCoeff());
        }
        DenseMatrix inv_sqrt = DenseMatrix::Zero(dim, dim);
        for (int i = 0; i < dim; ++i) inv_sqrt(i, i) = 1.0 / std::sqrt(1.0 + number(i, i).real());
        current = OperatorMatrix(M_SQRT1_2 * inv_sqrt * current.matrix() * current.matrix());
    }
    return current;
}

double isomorphism_check(int k, int dim) {
    const OperatorMatrix ak = ak_operator(k, dim);
    const int block = leading_block(dim);
    const int count = (block - 1) / (1 << k) + 1;
    const SubspaceMap map = make_subspace_map(k, dim);
    double worst = 0.0;
    for (int m = 0; m < count; ++m) {
        for (int n = 0; n < count; ++n) {
            const double expected = (m == n - 1) ? std::sqrt(static_cast<double>(n)) : 0.0;
            worst = std::max(worst, std::abs(ak(map.parent_index(m), map.parent_index(n)) - expected));
        }
    }
    return worst;
}

double a1_commutator_check(int dim) {
    const auto [a1, a1d] = a1_operators(dim);
    const OperatorMatrix c = commutator(a1, a1d);
    const int block = leading_block(dim);
    double worst = 0.0;
    for (int idx = 0; idx < block; idx += 2) {
        DenseVector e = DenseVector::Zero(dim);
        e(idx) = 1.0;
        worst = std::max(worst, column_deviation(c, idx, e).cwiseAbs().maxCoeff());
    }
    return worst;
}

double a1_number_spectrum_check(int dim) {
    const auto [a1, a1d] = a1_operators(dim);
    const OperatorMatrix n1 = a1d * a1;
    const int block = leading_block(dim);
    const int count = (block + 1) / 2;
    Eigen::MatrixXcd even(count, count);
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < count; ++j) even(i, j) = n1(2 * i, 2 * j);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(even);
    double worst = 0.0;
    for (int j = 0; j < count; ++j) worst = std::max(worst, std::abs(solver.eigenvalues()(j) - j));
    return worst;
}

double naive_displacement_defect(cplx alpha, int dim) {
    const OperatorMatrix gen = alpha * pair_raising(dim) - std::conj(alpha) * pair_lowering(dim);
    const OperatorMatrix e = matrix_exponential(gen);
    const OperatorMatrix defect = e.adjoint() * e - OperatorMatrix::identity(dim);
    const int block = leading_block(dim);
    double worst = 0.0;
    for (int i = 0; i < block; i += 2) {
        for (int j = 0; j < block; j += 2) worst = std::max(worst, std::abs(defect(i, j)));
    }
    return worst;
}

bool preserves_parity(const OperatorMatrix& op, double tol) {
    for (int i = 0; i < op.dim(); ++i) {
        for (int j = 0; j < op.dim(); ++j) {
            if (((i + j) & 1) != 0 && std::abs(op(i, j)) > tol) return false;
        }
    }
    return true;
}

}  // namespace berry
