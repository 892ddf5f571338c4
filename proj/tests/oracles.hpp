#pragma once
#include <cstdint>

// Test-only reference computations, written independently of the library
// code paths they check.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

namespace oracle {

/// Bisection for a sign change of f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
    double flo = f(lo);
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Principal Lambert W for x >= 0 by bisection on w e^w - x.
inline double lambert_w0_bisection(double x) {
    const double hi = std::max(1.0, std::log1p(x) + 1.0);
    return bisect([x](double w) { return w * std::exp(w) - x; }, 0.0, hi);
}

struct Moments {
    long double n = 0, mu = 0, var = 0, k2 = 0, k3 = 0;
};

/// Direct moment summation in long double.
inline Moments moments(const std::map<int, std::uint64_t>& counts) {
    Moments m;
    long double s1 = 0, s2 = 0, s3 = 0;
    for (const auto& [k, c] : counts) {
        m.n += c;
        s1 += static_cast<long double>(k) * c;
        s2 += static_cast<long double>(k) * k * c;
        s3 += static_cast<long double>(k) * k * k * c;
    }
    m.mu = s1 / m.n;
    m.k2 = s2 / m.n;
    m.k3 = s3 / m.n;
    m.var = m.k2 - m.mu * m.mu;
    return m;
}

/// Largest real root of s - a - b exp(-s tau) by downward scan + bisection;
/// NaN when no real root exists in [lo, hi].
inline double largest_real_root(double a, double b, double tau, double lo = -50.0, double hi = 50.0) {
    auto f = [&](double s) { return s - a - b * std::exp(-s * tau); };
    const int steps = 200000;
    const double h = (hi - lo) / steps;
    double prev = f(hi);
    for (int i = 1; i <= steps; ++i) {
        const double s = hi - i * h;
        const double cur = f(s);
        if ((cur < 0.0) != (prev < 0.0)) {
            return bisect(f, s, s + h);
        }
        prev = cur;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// Max real part over roots of s - a - b exp(-s tau) found by undamped Newton
/// from a grid of seeds in the upper half plane.
inline std::complex<double> multistart_rightmost(double a, double b, double tau) {
    using cplx = std::complex<double>;
    cplx best(-std::numeric_limits<double>::infinity(), 0.0);
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 40; ++j) {
            cplx s(a - 5.0 / tau + i * (6.0 / tau) / 40.0, j * (12.0 / tau) / 40.0);
            bool ok = false;
            for (int it = 0; it < 100; ++it) {
                const cplx e = std::exp(-s * tau);
                const cplx g = s - a - b * e;
                if (std::abs(g) < 1e-13) {
                    ok = true;
                    break;
                }
                s -= g / (1.0 + b * tau * e);
                if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
                    break;
                }
            }
            if (ok && s.real() > best.real() + 1e-12) {
                best = cplx(s.real(), std::abs(s.imag()));
            }
        }
    }
    return best;
}

}  // namespace oracle
