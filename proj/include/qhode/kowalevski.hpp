// qhode/kowalevski.hpp
//
// The Kowalevski matrix of a balance c:
//     L = Df(c) + diag(s),
// whose spectrum controls the structure of the Laurent family seeded at c.
// Positive integer eigenvalues ("resonances") are the orders at which free
// parameters enter the coefficient recursion; -1 reflects the free pole
// position. This module computes the spectrum, the resonance list with
// geometric multiplicities, and the free-parameter census used by the
// algebraic-integrability heuristic (n - 1 parameters besides the pole
// position for a principal family).
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_KOWALEVSKI_HPP
#define QHODE_KOWALEVSKI_HPP

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qhode/balance.hpp"
#include "qhode/linalg.hpp"
#include "qhode/system.hpp"

namespace qhode {

inline Matrix kowalevski_matrix(const SystemSpec& spec, const std::vector<int>& s,
                                const Vector& c0) {
    Matrix l = detail::balance_jacobian(spec, s, c0);
    // balance_jacobian already adds diag(s); L is exactly that matrix.
    return l;
}

struct ResonanceInfo {
    Matrix l;                        // Kowalevski matrix at the balance point
    std::vector<Scalar> spectrum;    // all eigenvalues, sorted
    bool minus_one_present = false;  // the universal -1 eigenvalue
    std::vector<int> resonances;     // positive integer eigenvalues, ascending
    std::map<int, int> kernel_dim;   // k -> dim ker(L - kI)
    int zero_kernel_dim = 0;         // dim ker(L) (continuum direction(s))
    int family_parameters = 0;       // sum of kernel dims over k >= 1, plus
                                     // the line parameter for a continuum
    std::vector<Scalar> near_resonances;  // within 1e-3 of a positive integer
                                          // but outside the resonance tolerance
};

// Spectrum and resonance census at one balance. `tol` decides when an
// eigenvalue counts as the integer it approximates.
inline ResonanceInfo resonance_info(const SystemSpec& spec, const std::vector<int>& s,
                                    const Balance& b, double tol = 1e-8) {
    ResonanceInfo info;
    info.l = kowalevski_matrix(spec, s, b.c0);
    info.spectrum = eigenvalues(info.l);

    std::map<int, bool> seen;
    for (const Scalar& lam : info.spectrum) {
        if (std::abs(lam - Scalar(-1.0)) < tol) info.minus_one_present = true;
        double k = std::round(lam.real());
        if (k >= 1.0 && std::abs(lam - Scalar(k)) < tol)
            seen[static_cast<int>(k)] = true;
        else if (k >= 1.0 && std::abs(lam - Scalar(k)) < 1e-3)
            info.near_resonances.push_back(lam);
    }
    for (const auto& [k, flag] : seen) {
        (void)flag;
        Matrix shifted = info.l - static_cast<double>(k) * Matrix::Identity(info.l.rows(), info.l.cols());
        auto sp = svd_spaces(shifted);
        int dim = static_cast<int>(shifted.cols()) - sp.rank;
        if (dim > 0) {
            info.resonances.push_back(k);
            info.kernel_dim[k] = dim;
            info.family_parameters += dim;
        }
    }
    {
        auto sp = svd_spaces(info.l);
        info.zero_kernel_dim = static_cast<int>(info.l.cols()) - sp.rank;
    }
    if (b.continuum) info.family_parameters += 1;
    return info;
}

}  // namespace qhode

#endif  // QHODE_KOWALEVSKI_HPP
