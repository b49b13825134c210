#pragma once

// Test-only 1D radial oracle for e^{i t Lambda(D)} applied to radial
// profiles: f(|x|=r) = (1/2pi) int fhat(rho) J0(r rho) e^{i t lambda(rho)} rho drho.
// Independent of the FFT path: plain trapezoid quadrature with the Bessel
// kernel (asymptotic expansion for large argument, std::cyl_bessel_j below).

#include "ion2d/dispersion.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

inline double bessel_j0(double z) {
    if (z < 30.0) return std::cyl_bessel_j(0.0, z);
    // two-term asymptotic: J0(z) ~ sqrt(2/(pi z)) [cos(z - pi/4) + sin(z - pi/4)/(8z)]
    const double c = std::cos(z - M_PI / 4.0), s = std::sin(z - M_PI / 4.0);
    return std::sqrt(2.0 / (M_PI * z)) * (c + s / (8.0 * z));
}

struct RadialField {
    std::function<double(double)> profile;  // fhat(rho)
    double rho_lo = 0.0, rho_hi = 0.0;
    int nq = 32768;

    std::complex<double> eval(double r, double t) const {
        const double h = (rho_hi - rho_lo) / (nq - 1);
        std::complex<double> acc(0.0, 0.0);
        for (int i = 0; i < nq; ++i) {
            const double rho = rho_lo + i * h;
            const double w = (i == 0 || i == nq - 1) ? 0.5 : 1.0;
            const double lam = rho > 0.0 ? ion2d::dispersion::lambda_eval(rho, 0) : 0.0;
            const double ph = t * lam;
            acc += w * profile(rho) * bessel_j0(r * rho) * rho *
                   std::complex<double>(std::cos(ph), std::sin(ph));
        }
        return acc * h / (2.0 * M_PI);
    }

    double l2norm_2d() const {
        // || f ||_2 in 2D: sqrt( (1/2pi) int |fhat|^2 rho drho )
        const double h = (rho_hi - rho_lo) / (nq - 1);
        double acc = 0.0;
        for (int i = 0; i < nq; ++i) {
            const double rho = rho_lo + i * h;
            const double w = (i == 0 || i == nq - 1) ? 0.5 : 1.0;
            const double v = profile(rho);
            acc += w * v * v * rho;
        }
        return std::sqrt(acc * h / (2.0 * M_PI));
    }

    // sup over a scanned ray window [vlo*t - pad, vhi*t + pad]
    double supnorm(double t, double vlo, double vhi, int nr = 600, double pad = 30.0) const {
        const double a = std::max(0.0, vlo * t - pad), b = vhi * t + pad;
        double best = 0.0;
        for (int i = 0; i < nr; ++i) {
            const double r = a + (b - a) * i / (nr - 1);
            best = std::max(best, std::abs(eval(r, t)));
        }
        return best;
    }
};

inline double fit_loglog_slope(const std::vector<double>& ts, const std::vector<double>& ys) {
    double sx = 0, sy = 0;
    const std::size_t n = ts.size();
    for (std::size_t i = 0; i < n; ++i) {
        sx += std::log(ts[i]);
        sy += std::log(ys[i]);
    }
    const double mx = sx / n, my = sy / n;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (std::log(ts[i]) - mx) * (std::log(ys[i]) - my);
        den += (std::log(ts[i]) - mx) * (std::log(ts[i]) - mx);
    }
    return num / den;
}

}  // namespace oracle
