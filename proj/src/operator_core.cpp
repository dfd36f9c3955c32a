#include "berryphase/operator_core.hpp"

#include "berryphase/errors.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace berry {

namespace {

constexpr double kUnitRoundoff = 0x1p-53;

void require_dim(int dim) {
    if (dim < 2) {
        throw InvalidDimension("operator dimension must be >= 2, got " + std::to_string(dim));
    }
}

void require_same_dim(int a, int b, const char* what) {
    if (a != b) {
        throw InvalidArgument(std::string(what) + ": dimension mismatch " + std::to_string(a) + " vs " +
                              std::to_string(b));
    }
}

double one_norm(const DenseMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

// Pade coefficients and the theta bounds of Higham (2005) for unit roundoff 2^-53.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                           2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                            1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                            670442572800.0,      33522128640.0,       1323241920.0,
                                            40840800.0,          960960.0,            16380.0,
                                            182.0,               1.0};
constexpr std::array<double, 4> kTheta = {1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                          2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152;

template <std::size_t N>
DenseMatrix pade_low_order(const DenseMatrix& a, const std::array<double, N>& b) {
    const auto n = a.rows();
    const DenseMatrix ident = DenseMatrix::Identity(n, n);
    const DenseMatrix a2 = a * a;
    DenseMatrix odd = b[1] * ident;
    DenseMatrix even = b[0] * ident;
    DenseMatrix power = ident;
    for (std::size_t k = 2; k < N; k += 2) {
        power = power * a2;
        even += b[k] * power;
        if (k + 1 < N) odd += b[k + 1] * power;
    }
    const DenseMatrix u = a * odd;
    return (even - u).partialPivLu().solve(even + u);
}

DenseMatrix pade13(const DenseMatrix& a) {
    const auto& b = kPade13;
    const auto n = a.rows();
    const DenseMatrix ident = DenseMatrix::Identity(n, n);
    const DenseMatrix a2 = a * a;
    const DenseMatrix a4 = a2 * a2;
    const DenseMatrix a6 = a4 * a2;
    const DenseMatrix inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    const DenseMatrix u = a * (inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    const DenseMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
    return (v - u).partialPivLu().solve(v + u);
}

bool all_finite(const DenseMatrix& m) { return m.allFinite(); }

using SparseMatrix = SparseOperator;

double one_norm(const SparseMatrix& m) {
    double best = 0.0;
    for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) sum += std::abs(it.value());
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------- OperatorMatrix

OperatorMatrix::OperatorMatrix(DenseMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw InvalidDimension("operator matrix must be square");
    }
    require_dim(static_cast<int>(entries_.rows()));
}

OperatorMatrix OperatorMatrix::identity(int dim) {
    require_dim(dim);
    return OperatorMatrix(DenseMatrix::Identity(dim, dim));
}

OperatorMatrix OperatorMatrix::zero(int dim) {
    require_dim(dim);
    return OperatorMatrix(DenseMatrix::Zero(dim, dim));
}

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(entries_.adjoint()); }

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
    require_same_dim(dim(), rhs.dim(), "operator sum");
    entries_ += rhs.entries_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
    require_same_dim(dim(), rhs.dim(), "operator difference");
    entries_ -= rhs.entries_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx scale) {
    entries_ *= scale;
    return *this;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    require_same_dim(lhs.dim(), rhs.dim(), "operator product");
    return OperatorMatrix(lhs.matrix() * rhs.matrix());
}

// ------------------------------------------------------------------ StateVector

StateVector::StateVector(DenseVector amplitudes, Basis basis) : amplitudes_(std::move(amplitudes)), basis_(basis) {
    if (amplitudes_.size() < 1) {
        throw InvalidDimension("state vector must be non-empty");
    }
}

StateVector StateVector::basis_vector(int dim, int index) {
    require_dim(dim);
    if (index < 0 || index >= dim) {
        throw InvalidArgument("basis index " + std::to_string(index) + " outside [0, " + std::to_string(dim) + ")");
    }
    DenseVector v = DenseVector::Zero(dim);
    v(index) = 1.0;
    return StateVector(std::move(v));
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DomainError("cannot normalize a zero or non-finite state");
    }
    return StateVector(amplitudes_ / n, basis_);
}

double StateVector::tail_mass(double fraction) const {
    const int band = std::max(1, static_cast<int>(std::ceil(fraction * dim())));
    return amplitudes_.tail(band).squaredNorm();
}

// -------------------------------------------------------------------- builders

int leading_block(int dim) { return static_cast<int>(std::floor(0.7 * dim)); }

OperatorMatrix make_annihilator(int dim) {
    require_dim(dim);
    DenseMatrix a = DenseMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return OperatorMatrix(std::move(a));
}

OperatorMatrix make_creator(int dim) { return make_annihilator(dim).adjoint(); }

SparseOperator sparse_annihilator(int dim) {
    require_dim(dim);
    SparseOperator a(dim, dim);
    a.reserve(Eigen::VectorXi::Constant(dim, 1));
    for (int n = 1; n < dim; ++n) a.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
    a.makeCompressed();
    return a;
}

OperatorMatrix make_number(int dim) {
    return number_function([](double x) { return x - 1.0; }, dim);
}

OperatorMatrix number_function(const std::function<double(double)>& f, int dim) {
    require_dim(dim);
    DenseMatrix d = DenseMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        const double value = f(1.0 + n);
        if (!std::isfinite(value)) {
            throw DomainError("number function is not finite at 1 + n = " + std::to_string(1 + n));
        }
        d(n, n) = value;
    }
    return OperatorMatrix(std::move(d));
}

// ------------------------------------------------------------------ exponential

OperatorMatrix matrix_exponential(const OperatorMatrix& m, double tol) {
    if (!all_finite(m.matrix())) {
        throw DomainError("matrix_exponential: non-finite entries");
    }
    if (!(tol >= kUnitRoundoff)) {
        throw AccuracyError("matrix_exponential: tolerance below unit roundoff", kUnitRoundoff);
    }
    const DenseMatrix& a = m.matrix();
    const double norm = one_norm(a);
    if (norm == 0.0) return OperatorMatrix::identity(m.dim());

    DenseMatrix result;
    if (norm <= kTheta[0]) {
        result = pade_low_order(a, kPade3);
    } else if (norm <= kTheta[1]) {
        result = pade_low_order(a, kPade5);
    } else if (norm <= kTheta[2]) {
        result = pade_low_order(a, kPade7);
    } else if (norm <= kTheta[3]) {
        result = pade_low_order(a, kPade9);
    } else {
        const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
        result = pade13(a / std::ldexp(1.0, squarings));
        for (int i = 0; i < squarings; ++i) result = result * result;
    }
    if (!all_finite(result)) {
        throw AccuracyError("matrix_exponential: overflow", std::numeric_limits<double>::infinity());
    }
    return OperatorMatrix(std::move(result));
}

namespace {

// Scaled Taylor propagation of exp(M) V. The step count comes from the
// observed growth ||M^k V||^(1/k) rather than ||M||, which for truncated
// ladder operators is dominated by the unpopulated top band.
template <typename Mat>
DenseMatrix taylor_action(const Mat& m, const DenseMatrix& columns, double tol, double one_norm_bound) {
    const double v_norm = columns.norm();
    if (v_norm == 0.0) return columns;

    double growth = 0.0;
    DenseMatrix probe = columns;
    for (int k = 1; k <= 6; ++k) {
        probe = m * probe;
        const double pn = probe.norm();
        if (pn == 0.0) break;
        growth = std::max(growth, std::pow(pn / v_norm, 1.0 / k));
    }
    growth = std::min(growth, one_norm_bound);
    int steps = std::max(1, static_cast<int>(std::ceil(growth)));

    constexpr int kMaxTerms = 80;
    constexpr int kMaxRetries = 6;
    double last_term = 0.0;
    for (int attempt = 0; attempt <= kMaxRetries; ++attempt, steps *= 2) {
        const double scale = 1.0 / steps;
        DenseMatrix current = columns;
        bool ok = true;
        for (int s = 0; s < steps && ok; ++s) {
            DenseMatrix sum = current;
            DenseMatrix term = current;
            const double ref = current.norm();
            double previous = ref;
            ok = false;
            for (int k = 1; k <= kMaxTerms; ++k) {
                term = (m * term) * (scale / k);
                sum += term;
                const double tn = term.norm();
                last_term = tn / ref;
                if (tn <= tol * ref && previous <= tol * ref) {
                    ok = true;
                    break;
                }
                previous = tn;
            }
            current = std::move(sum);
        }
        if (ok && current.allFinite()) return current;
    }
    throw AccuracyError("expm_apply: Taylor series did not converge", last_term);
}

}  // namespace

DenseMatrix expm_apply(const OperatorMatrix& m, const DenseMatrix& columns, double tol) {
    if (columns.rows() != m.dim()) {
        throw InvalidArgument("expm_apply: dimension mismatch");
    }
    if (!all_finite(m.matrix()) || !columns.allFinite()) {
        throw DomainError("expm_apply: non-finite input");
    }
    if (!(tol >= kUnitRoundoff)) {
        throw AccuracyError("expm_apply: tolerance below unit roundoff", kUnitRoundoff);
    }
    const double bound = one_norm(m.matrix());
    const auto nonzeros = (m.matrix().array() != cplx(0.0)).count();
    if (nonzeros * 4 < m.matrix().size()) {
        const SparseMatrix sparse = m.matrix().sparseView();
        return taylor_action(sparse, columns, tol, bound);
    }
    return taylor_action(m.matrix(), columns, tol, bound);
}

DenseMatrix expm_apply(const SparseOperator& m, const DenseMatrix& columns, double tol) {
    if (m.rows() != m.cols() || columns.rows() != m.rows()) {
        throw InvalidArgument("expm_apply: dimension mismatch");
    }
    for (Eigen::Index k = 0; k < m.nonZeros(); ++k) {
        if (!std::isfinite(std::abs(m.valuePtr()[k]))) throw DomainError("expm_apply: non-finite input");
    }
    if (!columns.allFinite()) throw DomainError("expm_apply: non-finite input");
    if (!(tol >= kUnitRoundoff)) {
        throw AccuracyError("expm_apply: tolerance below unit roundoff", kUnitRoundoff);
    }
    return taylor_action(m, columns, tol, one_norm(m));
}

StateVector expm_apply(const OperatorMatrix& m, const StateVector& v, double tol) {
    DenseMatrix out = expm_apply(m, DenseMatrix(v.amplitudes()), tol);
    return StateVector(out.col(0), v.basis());
}

// ------------------------------------------------------------------ algebra

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "commutator");
    return OperatorMatrix(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

OperatorMatrix sparse_product(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "sparse_product");
    const SparseMatrix sa = a.matrix().sparseView();
    const SparseMatrix sb = b.matrix().sparseView();
    const SparseMatrix prod = sa * sb;
    return OperatorMatrix(DenseMatrix(prod));
}

OperatorMatrix adjoint(const OperatorMatrix& m) { return m.adjoint(); }

StateVector apply(const OperatorMatrix& m, const StateVector& v) {
    require_same_dim(m.dim(), v.dim(), "apply");
    return StateVector(m.matrix() * v.amplitudes(), v.basis());
}

cplx inner(const StateVector& u, const StateVector& v) {
    require_same_dim(u.dim(), v.dim(), "inner");
    if (u.basis() != v.basis()) {
        throw InvalidArgument("inner: basis mismatch");
    }
    return u.amplitudes().dot(v.amplitudes());
}

double block_deviation(const OperatorMatrix& a, const OperatorMatrix& b, int block) {
    require_same_dim(a.dim(), b.dim(), "block_deviation");
    block = std::clamp(block, 0, a.dim());
    if (block == 0) return 0.0;
    return (a.matrix().topLeftCorner(block, block) - b.matrix().topLeftCorner(block, block)).cwiseAbs().maxCoeff();
}

double identity_deviation(const OperatorMatrix& a, int block) {
    return block_deviation(a, OperatorMatrix::identity(a.dim()), block);
}

}  // namespace berry
