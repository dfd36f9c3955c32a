#pragma once

// Truncated Fock-space linear algebra. hbar = 1 throughout; the reference
// basis is the number basis of the oscillator with m * omega = 1.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <functional>
#include <span>

namespace berry {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using SparseOperator = Eigen::SparseMatrix<cplx>;

inline constexpr double kDefaultExpmTol = 1e-12;
inline constexpr double kNormSlack = 1e-12;

/// Dense square operator in a truncated basis (dim >= 2).
class OperatorMatrix {
public:
    explicit OperatorMatrix(DenseMatrix entries);

    static OperatorMatrix identity(int dim);
    static OperatorMatrix zero(int dim);

    int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    const DenseMatrix& matrix() const noexcept { return entries_; }
    cplx operator()(int row, int col) const { return entries_(row, col); }

    OperatorMatrix adjoint() const;

    OperatorMatrix& operator+=(const OperatorMatrix& rhs);
    OperatorMatrix& operator-=(const OperatorMatrix& rhs);
    OperatorMatrix& operator*=(cplx scale);

    friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
    friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }
    friend OperatorMatrix operator*(OperatorMatrix lhs, cplx scale) { return lhs *= scale; }
    friend OperatorMatrix operator*(cplx scale, OperatorMatrix rhs) { return rhs *= scale; }
    friend OperatorMatrix operator-(OperatorMatrix op) { return op *= -1.0; }
    friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

private:
    DenseMatrix entries_;
};

enum class Basis { fock, grid };

/// Dense amplitude vector tagged with the basis it lives in.
class StateVector {
public:
    explicit StateVector(DenseVector amplitudes, Basis basis = Basis::fock);

    static StateVector basis_vector(int dim, int index);

    int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }
    Basis basis() const noexcept { return basis_; }
    const DenseVector& amplitudes() const noexcept { return amplitudes_; }
    cplx operator[](int i) const { return amplitudes_(i); }

    double norm() const { return amplitudes_.norm(); }
    StateVector normalized() const;

    /// Probability mass in the top `fraction` of basis indices.
    double tail_mass(double fraction = 0.1) const;

private:
    DenseVector amplitudes_;
    Basis basis_;
};

/// Size of the block on which truncated identities are asserted: floor(0.7 * dim).
int leading_block(int dim);

OperatorMatrix make_annihilator(int dim);
OperatorMatrix make_creator(int dim);
SparseOperator sparse_annihilator(int dim);
OperatorMatrix make_number(int dim);

/// diag(f(1 + n)) for n = 0 .. dim-1.
OperatorMatrix number_function(const std::function<double(double)>& f, int dim);

/// exp(M) by scaling and squaring with a diagonal Pade approximant.
OperatorMatrix matrix_exponential(const OperatorMatrix& m, double tol = kDefaultExpmTol);

/// exp(M) applied to each column of `columns` without forming exp(M).
DenseMatrix expm_apply(const OperatorMatrix& m, const DenseMatrix& columns, double tol = kDefaultExpmTol);
StateVector expm_apply(const OperatorMatrix& m, const StateVector& v, double tol = kDefaultExpmTol);
/// Same action for generators assembled directly in sparse storage.
DenseMatrix expm_apply(const SparseOperator& m, const DenseMatrix& columns, double tol = kDefaultExpmTol);

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// a * b through sparse storage; same result as the dense product, O(nnz) for banded inputs.
OperatorMatrix sparse_product(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix adjoint(const OperatorMatrix& m);
StateVector apply(const OperatorMatrix& m, const StateVector& v);
cplx inner(const StateVector& u, const StateVector& v);

/// max |a_ij - b_ij| over i, j < block.
double block_deviation(const OperatorMatrix& a, const OperatorMatrix& b, int block);
double identity_deviation(const OperatorMatrix& a, int block);

}  // namespace berry
