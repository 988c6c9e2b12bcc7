// operator.cpp — Dense operator algebra and Hermitian eigendecomposition

#include "dqt/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqt/errors.hpp"

namespace dqt::ops {

namespace {

// Index of the largest-magnitude component; earliest index wins ties within
// a relative 1e-12 so the choice is stable under roundoff.
Eigen::Index dominant_component(const Eigen::VectorXcd& v) {
    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= peak * (1.0 - 1e-12)) return i;
    }
    return 0;
}

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
    const Eigen::Index idx = dominant_component(v);
    const cplx pivot = v(idx);
    v *= std::conj(pivot) / std::abs(pivot);
    v(idx) = std::abs(v(idx));
}

} // namespace

double hermiticity_defect(const Operator& h) {
    if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
    if (h.size() == 0) return 0.0;
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator& h, double tol) {
    return hermiticity_defect(h) < tol * std::max(1.0, h.size() ? h.cwiseAbs().maxCoeff() : 0.0);
}

EigenSystem hermitian_eigendecompose(const Operator& h) {
    if (h.rows() == 0 || h.rows() != h.cols()) {
        throw ValidationError("hermitian_eigendecompose: operator must be square with dim >= 1");
    }
    if (!is_hermitian(h)) {
        throw ValidationError("hermitian_eigendecompose: operator is not Hermitian (defect " +
                              std::to_string(hermiticity_defect(h)) + ")");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eigendecompose: eigensolver did not converge");
    }

    const Eigen::Index n = h.rows();
    Eigen::VectorXd energies = solver.eigenvalues();
    Eigen::MatrixXcd vectors = solver.eigenvectors();
    for (Eigen::Index k = 0; k < n; ++k) fix_phase(vectors.col(k));

    // Reorder ties (within roundoff of the spectral scale) by dominant component.
    const double scale = std::max(1.0, energies.cwiseAbs().maxCoeff());
    const double tie = 1e-12 * scale;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    for (Eigen::Index start = 0; start < n;) {
        Eigen::Index stop = start + 1;
        while (stop < n && energies(stop) - energies(stop - 1) < tie) ++stop;
        std::stable_sort(order.begin() + start, order.begin() + stop, [&](Eigen::Index a, Eigen::Index b) {
            return dominant_component(vectors.col(a)) < dominant_component(vectors.col(b));
        });
        start = stop;
    }

    EigenSystem es;
    es.energies.resize(n);
    es.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        es.energies(k) = energies(order[static_cast<std::size_t>(k)]);
        es.vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
    }
    return es;
}

Operator tensor_product(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Operator pauli_lowering() {
    Operator s = Operator::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

Operator identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return Operator::Identity(n, n);
}

Operator boson_annihilation(std::size_t n_max) {
    if (n_max < 2) throw ValidationError("boson_annihilation: n_max must be >= 2");
    const auto n = static_cast<Eigen::Index>(n_max);
    Operator a = Operator::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
    return a;
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

cplx matrix_element(const EigenSystem& es, const Operator& op, std::size_t m, std::size_t mp) {
    const std::size_t dim = es.dim();
    if (m >= dim || mp >= dim) {
        throw std::out_of_range("matrix_element: index (" + std::to_string(m) + ", " + std::to_string(mp) +
                                ") outside dim " + std::to_string(dim));
    }
    if (op.rows() != es.vectors.rows() || op.cols() != es.vectors.rows()) {
        throw ValidationError("matrix_element: operator dimension does not match eigensystem");
    }
    const auto col_m = es.vectors.col(static_cast<Eigen::Index>(m));
    const auto col_mp = es.vectors.col(static_cast<Eigen::Index>(mp));
    return col_m.dot(op * col_mp); // dot() conjugates the left argument
}

} // namespace dqt::ops
