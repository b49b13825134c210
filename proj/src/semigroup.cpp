#include "ion2d/semigroup.hpp"

#include "ion2d/dispersion.hpp"
#include "ion2d/paley.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ion2d {
namespace semigroup {

using dispersion::lambda_eval;

SpectralField propagate(const SpectralField& f, double t) {
    SpectralField out = f;
    propagate_inplace(out, t);
    return out;
}

void propagate_inplace(SpectralField& f, double t) {
    auto& fh = f.mut_freq();
    const Grid& g = f.grid();
    for (int ix = 0; ix < g.n; ++ix) {
        const double kx = g.freq(ix);
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(kx, g.freq(iy));
            const double ph = (r == 0.0) ? 0.0 : t * lambda_eval(r, 0);
            fh[g.idx(ix, iy)] *= cdouble(std::cos(ph), std::sin(ph));
        }
    }
}

std::vector<double> stationary_points(double r_prime) {
    if (r_prime < 0.0) throw std::domain_error("stationary_points: r' must be >= 0");
    std::vector<double> out;
    const double vmin = dispersion::lambda_prime_min();
    if (r_prime < vmin) return out;
    if (r_prime == vmin) return {dispersion::gamma0()};
    if (auto r = dispersion::invert_lambda_prime(r_prime, dispersion::Branch::below_gamma0))
        out.push_back(*r);
    if (auto r = dispersion::invert_lambda_prime(r_prime, dispersion::Branch::above_gamma0))
        out.push_back(*r);
    std::sort(out.begin(), out.end());
    return out;
}

double ProbeProfile::eval(double r) const {
    if (kind == "shell") {
        const double u = (r - center) / width;
        if (std::abs(u) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - u * u));
    }
    if (kind == "anshell")  // two-sided annulus at distance ~width from center
        return paley::bump_psi((r - center) / width);
    if (kind == "flattop")
        return paley::smoothstep((r - lo) / sh_lo) * paley::smoothstep((hi - r) / sh_hi);
    throw std::domain_error("ProbeProfile: unknown kind " + kind);
}

double ProbeProfile::support_lo() const {
    if (kind == "shell") return center - width;
    if (kind == "anshell") return center - 1.5 * width;
    return lo;
}
double ProbeProfile::support_hi() const {
    if (kind == "shell") return center + width;
    if (kind == "anshell") return center + 1.5 * width;
    return hi;
}

double ProbeProfile::max_group_speed() const {
    // lambda' is monotone on each side of gamma0: max over the support is
    // attained at an endpoint or near gamma0 never (the minimum sits there)
    const double a = std::max(support_lo(), 1e-12), b = support_hi();
    return std::max(lambda_eval(a, 1), lambda_eval(b, 1));
}

DecayProbeResult decay_exponent_probe(const DecayProbeSpec& spec) {
    if (spec.times.empty()) throw std::invalid_argument("decay probe: no times");
    if (!std::is_sorted(spec.times.begin(), spec.times.end()))
        throw std::invalid_argument("decay probe: times must be increasing");
    Grid g(spec.grid, spec.domain_length);
    if (spec.profile.support_hi() > g.nyquist())
        throw std::invalid_argument("decay probe: profile exceeds the resolvable band");

    // build the profile directly in frequency space, L^2-normalized
    std::vector<cdouble> fh(g.size(), cdouble(0.0));
    double acc = 0.0;
    for (int ix = 0; ix < g.n; ++ix) {
        const double kx = g.freq(ix);
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(kx, g.freq(iy));
            const double v = spec.profile.eval(r);
            fh[g.idx(ix, iy)] = v;
            acc += v * v;
        }
    }
    const double nrm = std::sqrt(acc) * g.dk() / (2.0 * M_PI);
    for (auto& v : fh) v /= nrm;

    DecayProbeResult res;
    res.times = spec.times;
    std::vector<cdouble> work(g.size());
    // cache lambda on the grid
    std::vector<double> lam(g.size());
    for (int ix = 0; ix < g.n; ++ix) {
        const double kx = g.freq(ix);
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(kx, g.freq(iy));
            lam[g.idx(ix, iy)] = (r == 0.0) ? 0.0 : lambda_eval(r, 0);
        }
    }

    for (double t : spec.times) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double ph = t * lam[i];
            work[i] = fh[i] * cdouble(std::cos(ph), std::sin(ph));
        }
        fft::inverse(g, work);

        // sup with quadratic refinement along each axis; l2; wrap guard
        double sup = 0.0;
        std::size_t arg = 0;
        double l2 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double a = std::abs(work[i]);
            l2 += a * a;
            if (a > sup) {
                sup = a;
                arg = i;
            }
        }
        res.l2norm.push_back(std::sqrt(l2 * g.cell_area()));
        const int ax = int(arg / g.n), ay = int(arg % g.n);
        auto mag = [&](int ix, int iy) {
            return std::abs(work[g.idx((ix + g.n) % g.n, (iy + g.n) % g.n)]);
        };
        auto refine = [](double vm, double v0, double vp) {
            const double d = vm - 2.0 * v0 + vp;
            return d < 0.0 ? v0 - (vp - vm) * (vp - vm) / (8.0 * d) : v0;
        };
        sup = std::max(sup, refine(mag(ax - 1, ay), sup, mag(ax + 1, ay)));
        sup = std::max(sup, refine(mag(ax, ay - 1), sup, mag(ax, ay + 1)));
        res.supnorm.push_back(sup);

        double edge = 0.0;
        const int b = g.n / 2;  // centered coords: boundary band sits at index n/2
        for (int w = -4; w <= 4; ++w) {
            for (int i = 0; i < g.n; ++i) {
                edge = std::max(edge, std::abs(work[g.idx((b + w + g.n) % g.n, i)]));
                edge = std::max(edge, std::abs(work[g.idx(i, (b + w + g.n) % g.n)]));
            }
        }
        if (edge > 1e-6 * sup)
            throw std::runtime_error("decay probe: wrap-around detected (boundary mass)");
    }

    // least-squares log-log fit over t >= fit_tmin with 95% interval
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < res.times.size(); ++i)
        if (res.times[i] >= spec.fit_tmin) {
            lx.push_back(std::log(res.times[i]));
            ly.push_back(std::log(res.supnorm[i]));
        }
    const std::size_t m = lx.size();
    if (m < 3) throw std::invalid_argument("decay probe: fewer than 3 points in fit window");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ly[i] - (intercept + slope * lx[i]);
        ss += r * r;
    }
    const double se = (m > 2) ? std::sqrt(ss / double(m - 2) / sxx) : 0.0;
    res.slope = slope;
    res.slope_halfwidth = 1.96 * se;
    res.prefactor = std::exp(intercept);
    return res;
}

DecayProbeSpec generic_shell_probe(double tmax, int grid) {
    DecayProbeSpec s;
    s.profile.kind = "shell";
    s.profile.center = 0.5;
    s.profile.width = 0.3;
    // global no-wrap rule: L >= 4 sqrt(2) tmax (max group speed lambda'(0+))
    s.domain_length = 4.0 * std::sqrt(2.0) * tmax;
    s.grid = grid;
    s.fit_tmin = tmax / 10.0;
    const int npts = 13;
    for (int i = 0; i < npts; ++i)
        s.times.push_back(tmax / 100.0 * std::pow(100.0, double(i) / (npts - 1)));
    return s;
}

DecayProbeSpec gamma0_bump_probe(double tmax, int grid) {
    DecayProbeSpec s;
    s.profile.kind = "flattop";
    s.profile.lo = 1.30;
    s.profile.hi = 3.20;
    s.profile.sh_lo = 0.40;
    s.profile.sh_hi = 0.50;
    // content-aware no-wrap rule: the probe's own maximal group speed
    const double vmax = s.profile.max_group_speed();
    s.domain_length = 4.0 * vmax * tmax * 1.006;
    s.grid = grid;
    // fit the asymptotic end: the Airy onset at gamma0 is ~1/(lambda'''(g0) w^3)
    s.fit_tmin = 0.4 * tmax;
    for (int i = 0; i < 5; ++i)
        s.times.push_back(tmax / 100.0 * std::pow(40.0, double(i) / 5.0));
    for (int i = 0; i < 10; ++i)
        s.times.push_back(0.4 * tmax * std::pow(2.5, double(i) / 9.0));
    return s;
}

}  // namespace semigroup
}  // namespace ion2d
