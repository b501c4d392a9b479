// qhode/rng.hpp
//
// Small deterministic pseudo-random generator (splitmix64). The standard
// <random> distributions are implementation-defined, which would break the
// byte-identical-report guarantee across toolchains, so draws are produced
// from raw 64-bit states directly.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_RNG_HPP
#define QHODE_RNG_HPP

#include <cmath>
#include <cstdint>

#include "qhode/scalar.hpp"

namespace qhode {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Complex with modulus uniform in [lo, hi) and uniform phase.
    Scalar complex_annulus(double lo, double hi) {
        double r = uniform(lo, hi);
        double phi = uniform(0.0, 6.283185307179586476925287);
        return Scalar(r * std::cos(phi), r * std::sin(phi));
    }

    // Complex in the square [-s, s]^2; generic small draw for parameters.
    Scalar complex_box(double s) {
        return Scalar(uniform(-s, s), uniform(-s, s));
    }

private:
    std::uint64_t state_;
};

}  // namespace qhode

#endif  // QHODE_RNG_HPP
