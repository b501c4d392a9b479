// qhode/scalar.hpp
//
// Scalar type and tolerance helpers. All coefficient arithmetic in the
// library runs over complex<double>; comparisons blend absolute and relative
// tolerance so they behave sensibly both near zero and at large magnitude.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_SCALAR_HPP
#define QHODE_SCALAR_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>

namespace qhode {

using Scalar = std::complex<double>;

inline constexpr double kCoeffPrune = 1e-13;   // drop stored coefficients below this
inline constexpr double kDefaultTol = 1e-9;    // generic verification tolerance

inline bool is_finite(const Scalar& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// |a - b| <= tol * max(1, |a|, |b|)
inline bool almost_equal(const Scalar& a, const Scalar& b, double tol = 1e-12) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
}

inline bool almost_zero(const Scalar& a, double tol = 1e-12) {
    return std::abs(a) <= tol;
}

// Shortest decimal form that round-trips through strtod exactly.
inline std::string format_double(double x) {
    if (x == 0.0) return std::signbit(x) ? "-0" : "0";
    for (int prec = 1; prec <= 17; ++prec) {
        std::ostringstream os;
        os.precision(prec);
        os << x;
        if (std::stod(os.str()) == x) return os.str();
    }
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Canonical textual form of a complex coefficient, parseable by the DSL:
// pure real -> "a", pure imaginary -> "b*i", general -> "(a+b*i)".
inline std::string format_scalar(const Scalar& z) {
    double re = z.real(), im = z.imag();
    if (im == 0.0) return format_double(re);
    std::string imag = format_double(im) + "*i";
    if (re == 0.0) return imag;
    if (im < 0.0) return "(" + format_double(re) + "-" + format_double(-im) + "*i)";
    return "(" + format_double(re) + "+" + imag + ")";
}

}  // namespace qhode

#endif  // QHODE_SCALAR_HPP
