// operator.hpp — Dense operator algebra and Hermitian eigendecomposition

#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace dqt {

using cplx = std::complex<double>;

// Dense complex square matrix in units where hbar = 1.
using Operator = Eigen::MatrixXcd;

struct EigenSystem {
    Eigen::VectorXd energies; // ascending
    Eigen::MatrixXcd vectors; // columns are orthonormal eigenvectors

    std::size_t dim() const { return static_cast<std::size_t>(energies.size()); }
};

namespace ops {

inline constexpr double hermitian_tolerance = 1e-12;

// max |H_ij - conj(H_ji)|
double hermiticity_defect(const Operator& h);

bool is_hermitian(const Operator& h, double tol = hermitian_tolerance);

// Energies ascending. Degenerate eigenvalues are ordered by the index of each
// vector's dominant basis component; every vector's largest-magnitude
// component is made real positive. Throws ValidationError for non-Hermitian
// or empty input.
EigenSystem hermitian_eigendecompose(const Operator& h);

// Kronecker product; the left factor varies slowest.
Operator tensor_product(const Operator& a, const Operator& b);

// Basis (|down>, |up>) = (0, 1); sigma_- |up> = |down>.
Operator pauli_lowering();

Operator identity(std::size_t dim);

// Truncated annihilation operator on |0> ... |n_max - 1>. The commutator
// [a, a^dag] equals the identity except at the (n_max-1, n_max-1) corner,
// where it is 1 - n_max.
Operator boson_annihilation(std::size_t n_max);

Operator commutator(const Operator& a, const Operator& b);

// <phi_m| op |phi_mp> in the eigenbasis of es. Throws std::out_of_range.
cplx matrix_element(const EigenSystem& es, const Operator& op, std::size_t m, std::size_t mp);

} // namespace ops
} // namespace dqt
