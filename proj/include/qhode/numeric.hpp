// qhode/numeric.hpp
//
// Independent numerical validation: Dormand-Prince 5(4) integration of the
// ODE along straight segments in complex time, with adaptive error control,
// plus the series-vs-integration comparison used to confirm that truncated
// Laurent series really solve the system inside the certified radius.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_NUMERIC_HPP
#define QHODE_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qhode/errors.hpp"
#include "qhode/laurent.hpp"
#include "qhode/linalg.hpp"
#include "qhode/system.hpp"

namespace qhode {

struct ComplexPath {
    Scalar z0;
    Scalar z1;
};

struct TrajectorySample {
    std::vector<Scalar> z;                     // sample points along the path
    std::vector<std::vector<Scalar>> states;   // state at each sample
    std::vector<double> error_estimates;       // local error per accepted step
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0,
                            e3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                            e4 = 125.0 / 192.0 - 393.0 / 640.0,
                            e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0,
                            e6 = 11.0 / 84.0 - 187.0 / 2100.0,
                            e7 = -1.0 / 40.0;
};

inline std::vector<Scalar> rhs_eval(const SystemSpec& spec, const std::vector<Scalar>& w,
                                    const Scalar& dz) {
    std::vector<Scalar> out(w.size());
    for (int i = 0; i < spec.n(); ++i)
        out[static_cast<std::size_t>(i)] = spec.rhs[static_cast<std::size_t>(i)].eval(w) * dz;
    return out;
}

// One Dormand-Prince step of size h (in the path parameter). Returns the
// 5th-order update and the embedded error estimate.
inline std::pair<std::vector<Scalar>, double> dopri_step(const SystemSpec& spec,
                                                         const std::vector<Scalar>& w,
                                                         const Scalar& dz, double h,
                                                         double atol, double rtol) {
    using T = Dopri5;
    const std::size_t n = w.size();
    auto axpy = [&](const std::vector<Scalar>& base,
                    std::initializer_list<std::pair<double, const std::vector<Scalar>*>> terms) {
        std::vector<Scalar> out = base;
        for (const auto& [c, k] : terms)
            for (std::size_t i = 0; i < n; ++i) out[i] += h * c * (*k)[i];
        return out;
    };
    std::vector<Scalar> k1 = rhs_eval(spec, w, dz);
    std::vector<Scalar> k2 = rhs_eval(spec, axpy(w, {{T::a21, &k1}}), dz);
    std::vector<Scalar> k3 = rhs_eval(spec, axpy(w, {{T::a31, &k1}, {T::a32, &k2}}), dz);
    std::vector<Scalar> k4 = rhs_eval(spec, axpy(w, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}), dz);
    std::vector<Scalar> k5 =
        rhs_eval(spec, axpy(w, {{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}), dz);
    std::vector<Scalar> k6 = rhs_eval(
        spec, axpy(w, {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4}, {T::a65, &k5}}),
        dz);
    std::vector<Scalar> y5 =
        axpy(w, {{T::b1, &k1}, {T::b3, &k3}, {T::b4, &k4}, {T::b5, &k5}, {T::b6, &k6}});
    std::vector<Scalar> k7 = rhs_eval(spec, y5, dz);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Scalar e = h
                   * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i]
                      + T::e6 * k6[i] + T::e7 * k7[i]);
        double scale = atol + rtol * std::max(std::abs(w[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / scale);
    }
    return {std::move(y5), err};
}

}  // namespace detail

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double blow_up_threshold = 1e8;
    int max_steps = 200000;
    int record_every = 1;  // store every accepted step
};

// Adaptive integration of w' = f(w) along the straight segment z0 -> z1.
inline TrajectorySample integrate(const SystemSpec& spec, const std::vector<Scalar>& w0,
                                  const ComplexPath& path, const IntegrateOptions& opt = {}) {
    if (static_cast<int>(w0.size()) != spec.n())
        throw dimension_mismatch("initial state has wrong dimension");
    const Scalar dz = path.z1 - path.z0;
    TrajectorySample out;
    out.z.push_back(path.z0);
    out.states.push_back(w0);
    out.error_estimates.push_back(0.0);
    if (std::abs(dz) == 0.0) return out;

    std::vector<Scalar> w = w0;
    double sigma = 0.0;
    double h = 0.01;
    int steps = 0;
    int since_record = 0;
    while (sigma < 1.0) {
        if (++steps > opt.max_steps)
            throw stiffness_failure("step limit exceeded on the integration path");
        if (h < 1e-14)
            throw stiffness_failure("step size underflow on the integration path");
        h = std::min(h, 1.0 - sigma);
        std::pair<std::vector<Scalar>, double> res;
        try {
            res = detail::dopri_step(spec, w, dz, h, opt.atol, opt.rtol);
        } catch (const division_by_zero&) {
            throw blow_up(path.z0 + sigma * dz, "right-hand side singular along the path");
        }
        auto& [y, err] = res;
        bool finite = true;
        for (const Scalar& v : y)
            if (!is_finite(v) || std::abs(v) > opt.blow_up_threshold) finite = false;
        if (!finite)
            throw blow_up(path.z0 + (sigma + h) * dz, "trajectory exceeds the blow-up threshold");
        if (err <= 1.0) {
            sigma += h;
            w = std::move(y);
            if (++since_record >= opt.record_every || sigma >= 1.0) {
                out.z.push_back(path.z0 + sigma * dz);
                out.states.push_back(w);
                out.error_estimates.push_back(err);
                since_record = 0;
            }
        }
        double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return out;
}

// Fixed-step variant (no adaptivity): used by the order-of-convergence test.
inline std::vector<Scalar> integrate_fixed(const SystemSpec& spec, const std::vector<Scalar>& w0,
                                           const ComplexPath& path, int steps) {
    const Scalar dz = path.z1 - path.z0;
    std::vector<Scalar> w = w0;
    double h = 1.0 / static_cast<double>(steps);
    for (int t = 0; t < steps; ++t) {
        auto [y, err] = detail::dopri_step(spec, w, dz, h, 1.0, 1.0);
        (void)err;
        w = std::move(y);
    }
    return w;
}

// Compare the truncated series with direct integration around the pole:
// seed the integrator from the series on the first ring, walk to the other
// radii along short chords (the path stays on circles, so it never comes
// near the pole), and report the largest relative discrepancy.
inline double series_vs_integration(const SystemSpec& spec, const NumericSeries& ns,
                                    const std::vector<double>& radii,
                                    const IntegrateOptions& opt = {}) {
    if (radii.empty()) return 0.0;
    double worst = 0.0;
    const double phi0 = 0.4;  // generic start angle
    Scalar za = std::polar(radii[0], phi0);
    std::vector<Scalar> w = ns.eval(za);
    Scalar zcur = za;

    auto relative_gap = [&](const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
        double gap = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double denom = std::max(1.0, std::max(std::abs(a[i]), std::abs(b[i])));
            gap = std::max(gap, std::abs(a[i] - b[i]) / denom);
        }
        return gap;
    };

    // Visit each radius at a quarter-turn offset from the previous point,
    // splitting every move into chords subtending at most ~15 degrees.
    double phi = phi0;
    for (std::size_t t = 1; t <= radii.size(); ++t) {
        double target_r = (t < radii.size()) ? radii[t] : radii[0];
        double target_phi = phi + 1.5707963267948966;
        Scalar ztarget = std::polar(target_r, target_phi);
        int chords = 8;
        for (int c = 1; c <= chords; ++c) {
            double frac = static_cast<double>(c) / chords;
            double r = std::abs(zcur) + frac * (target_r - std::abs(zcur));
            double ang = phi + frac * (target_phi - phi);
            Scalar znext = std::polar(r, ang);
            TrajectorySample ts = integrate(spec, w, {zcur, znext}, opt);
            w = ts.states.back();
            zcur = znext;
        }
        phi = target_phi;
        worst = std::max(worst, relative_gap(w, ns.eval(zcur)));
    }
    return worst;
}

// Drift of the declared integrals along a trajectory, relative to their
// starting magnitude.
inline double integral_drift(const SystemSpec& spec, const TrajectorySample& ts) {
    double worst = 0.0;
    for (const auto& [name, h] : spec.integrals) {
        (void)name;
        Scalar first = h.eval(ts.states.front());
        double scale = std::max(1.0, std::abs(first));
        for (const auto& st : ts.states)
            worst = std::max(worst, std::abs(h.eval(st) - first) / scale);
    }
    return worst;
}

}  // namespace qhode

#endif  // QHODE_NUMERIC_HPP
