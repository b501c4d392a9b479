// qhode/linalg.hpp
//
// Thin wrappers around Eigen for the dense complex linear algebra the
// analysis needs: spectra, SVD-based rank/nullspaces, minimum-norm solves
// and induced-infinity-norm estimates. Everything here is small (n <= ~10),
// so robustness is preferred over speed throughout.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_LINALG_HPP
#define QHODE_LINALG_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "qhode/errors.hpp"
#include "qhode/scalar.hpp"

namespace qhode {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Vector to_vector(const std::vector<Scalar>& v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = v[static_cast<std::size_t>(i)];
    return out;
}

inline std::vector<Scalar> from_vector(const Vector& v) {
    std::vector<Scalar> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i);
    return out;
}

// Eigenvalues sorted by (real, imag) for deterministic reporting.
inline std::vector<Scalar> eigenvalues(const Matrix& m) {
    Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw ill_conditioned("eigenvalue iteration failed to converge");
    std::vector<Scalar> vals = from_vector(es.eigenvalues());
    std::sort(vals.begin(), vals.end(), [](const Scalar& a, const Scalar& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return vals;
}

struct SvdSpaces {
    int rank = 0;
    Matrix right_nullspace;  // columns span ker(A)
    Matrix left_nullspace;   // columns span ker(A^H)
    double sigma_max = 0.0;
    Eigen::JacobiSVD<Matrix> svd;
};

// Numerical rank and the two nullspaces at threshold rel_tol * sigma_max.
inline SvdSpaces svd_spaces(const Matrix& a, double rel_tol = 1e-8) {
    SvdSpaces out;
    out.svd.compute(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = out.svd.singularValues();
    out.sigma_max = sv.size() ? sv(0) : 0.0;
    double thresh = rel_tol * std::max(out.sigma_max, 1e-300);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    out.rank = rank;
    Eigen::Index n = a.cols(), m = a.rows();
    out.right_nullspace = out.svd.matrixV().rightCols(n - rank);
    out.left_nullspace = out.svd.matrixU().rightCols(m - rank);
    return out;
}

// Minimum-norm least-squares solution via the SVD (pseudo-inverse applied to b).
inline Vector pinv_solve(const SvdSpaces& s, const Vector& b, double rel_tol = 1e-8) {
    const auto& sv = s.svd.singularValues();
    double thresh = rel_tol * std::max(s.sigma_max, 1e-300);
    Vector y = s.svd.matrixU().adjoint() * b;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        y(i) = sv(i) > thresh ? y(i) / sv(i) : Scalar(0.0);
    return s.svd.matrixV() * y;
}

inline Vector lu_solve(const Matrix& a, const Vector& b) {
    Eigen::PartialPivLU<Matrix> lu(a);
    return lu.solve(b);
}

// Induced infinity norm (max absolute row sum).
inline double inf_norm(const Matrix& m) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        best = std::max(best, m.row(i).cwiseAbs().sum());
    return best;
}

inline double inverse_inf_norm(const Matrix& m) {
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible())
        throw ill_conditioned("matrix not invertible while estimating inverse norm");
    Matrix inv = lu.inverse();
    return inf_norm(inv);
}

}  // namespace qhode

#endif  // QHODE_LINALG_HPP
