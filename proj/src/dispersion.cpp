#include "ion2d/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ion2d {
namespace dispersion {

namespace {

// lambda and derivatives share the pattern N(x) / [(1+x^2)^(a/2) (2+x^2)^(b/2)]:
//   order 0: N = x(2+x^2),                                   a=1, b=1
//   order 1: N = x^4+2x^2+2,                                 a=3, b=1
//   order 2: N = x(x^4-2x^2-6),                              a=5, b=3
//   order 3: N = 3(-x^8+4x^6+20x^4+16x^2-4),                 a=7, b=5
//   order 4: N = 3x(4x^10-29x^8-180x^6-252x^4+140),          a=9, b=7
double lam0(double x) {
    const double u = x * x;
    return x * std::sqrt((2.0 + u) / (1.0 + u));
}
double lam1(double x) {
    const double u = x * x;
    const double num = u * u + 2.0 * u + 2.0;
    return num / (std::pow(1.0 + u, 1.5) * std::sqrt(2.0 + u));
}
double lam2(double x) {
    const double u = x * x;
    const double num = x * (u * u - 2.0 * u - 6.0);
    return num / (std::pow(1.0 + u, 2.5) * std::pow(2.0 + u, 1.5));
}
double lam3(double x) {
    const double u = x * x;
    const double num = 3.0 * (-u * u * u * u + 4.0 * u * u * u + 20.0 * u * u + 16.0 * u - 4.0);
    return num / (std::pow(1.0 + u, 3.5) * std::pow(2.0 + u, 2.5));
}
double lam4(double x) {
    const double u = x * x;
    const double num =
        3.0 * x * (4.0 * u * u * u * u * u - 29.0 * u * u * u * u - 180.0 * u * u * u -
                   252.0 * u * u + 140.0);
    return num / (std::pow(1.0 + u, 4.5) * std::pow(2.0 + u, 3.5));
}

// bracketed bisection to ~1e-14 width, then one Newton polish
template <class F, class DF>
double bisect_newton(F f, DF df, double lo, double hi) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double r = 0.5 * (lo + hi);
    const double d = df(r);
    if (d != 0.0) {
        const double rn = r - f(r) / d;
        if (rn > lo - (hi - lo) && rn < hi + (hi - lo)) r = rn;
    }
    return r;
}

}  // namespace

double lambda_eval(double x, int order) {
    if (!(x > 0.0)) throw std::domain_error("lambda_eval: x must be positive");
    switch (order) {
        case 0: return lam0(x);
        case 1: return lam1(x);
        case 2: return lam2(x);
        case 3: return lam3(x);
        case 4: return lam4(x);
        default: throw std::domain_error("lambda_eval: order must be in 0..4");
    }
}

double gamma0() {
    static const double g = std::sqrt(1.0 + std::sqrt(7.0));
    return g;
}

double lambda_prime_min() {
    static const double v = lam1(gamma0());
    return v;
}

std::optional<double> invert_lambda_prime(double v, Branch b) {
    const double g = gamma0();
    const double vmin = lambda_prime_min();
    // near the flat minimum lambda' cannot be resolved below ~1e-15; snap
    // values in the noise band onto the minimum instead of failing
    if (v < vmin - 1e-15) return std::nullopt;
    if (v <= vmin + 1e-15) return g;
    if (b == Branch::below_gamma0) {
        // lambda' decreasing from sqrt(2) (x->0+) to vmin
        if (v >= std::sqrt(2.0)) return std::nullopt;
        double lo = 1e-12, hi = g;
        return bisect_newton([v](double x) { return lam1(x) - v; }, lam2, lo, hi);
    }
    // above: increasing from vmin toward 1 (never reaching it)
    if (v >= 1.0) return std::nullopt;
    double lo = g, hi = g + 1.0;
    while (lam1(hi) < v) hi *= 2.0;
    return bisect_newton([v](double x) { return lam1(x) - v; }, lam2, lo, hi);
}

double pi_map(double x, double window) {
    const double g = gamma0();
    if (!(x > 0.0)) throw std::domain_error("pi_map: x must be positive");
    if (std::abs(x - g) >= window)
        throw std::domain_error("pi_map: x outside the monotonicity window");
    if (x == g) return g;
    const double v = lam1(x);
    const auto y = invert_lambda_prime(v, x < g ? Branch::above_gamma0 : Branch::below_gamma0);
    if (!y) throw std::domain_error("pi_map: lambda'(x) outside the opposite branch range");
    return *y;
}

std::vector<double> space_resonance_roots(double s, SignPair signs, double window) {
    if (!(s > 0.0)) throw std::domain_error("space_resonance_roots: s must be positive");
    const double g = gamma0();
    std::vector<double> roots;

    if (signs.equal()) {
        // r = s/2 always solves lambda'(s-r)=lambda'(r); keep it if in-window
        if (std::abs(s / 2.0 - g) < window) roots.push_back(s / 2.0);
        // remaining roots solve x + pi(x) = s with x on one side, s-x on the other;
        // h(x) = x + pi(x) - s is monotone on each side of gamma0 near it
        auto h = [&](double x) { return x + pi_map(x, window) - s; };
        const double eps = 1e-9;
        // left side: x in (g-window, g); h increasing in x? pi' ~ -1 so h' ~ 0...
        // h(g) = 2g - s; h(g-w) = g-w + pi(g-w) - s with pi(g-w) > g.
        // Scan for a sign change with a fine bracket instead of assuming monotonicity.
        for (int side = 0; side < 2; ++side) {
            const double a = (side == 0) ? g - window * (1 - 1e-12) : g + eps;
            const double b = (side == 0) ? g - eps : g + window * (1 - 1e-12);
            const int m = 200;
            double xp = a, fp;
            try {
                fp = h(xp);
            } catch (const std::domain_error&) {
                continue;
            }
            for (int i = 1; i <= m; ++i) {
                const double xc = a + (b - a) * i / m;
                double fc;
                try {
                    fc = h(xc);
                } catch (const std::domain_error&) {
                    break;
                }
                if ((fc < 0.0) != (fp < 0.0) || fc == 0.0) {
                    double lo = xp, hi = xc, flo = fp;
                    for (int it = 0; it < 120 && hi - lo > 1e-15; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const double fm = h(mid);
                        if ((fm < 0.0) == (flo < 0.0)) {
                            lo = mid;
                            flo = fm;
                        } else
                            hi = mid;
                    }
                    const double x = 0.5 * (lo + hi);
                    // the root of the original equation on this side is r = x
                    // (and its partner s-x appears when scanning the other side)
                    roots.push_back(x);
                }
                xp = xc;
                fp = fc;
            }
        }
    } else {
        // lambda'(r-s) = lambda'(r): r > gamma0 > r-s, r = pi(x) with pi(x)-x = s
        auto h = [&](double x) { return pi_map(x, window) - x - s; };
        const double a = g - window * (1 - 1e-12), b = g - 1e-12;
        double lo = a, hi = b, fa, fb;
        try {
            fa = h(a);
            fb = h(b);
        } catch (const std::domain_error&) {
            return roots;
        }
        if ((fa < 0.0) != (fb < 0.0)) {
            double flo = fa;
            for (int it = 0; it < 120 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = h(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else
                    hi = mid;
            }
            const double x = 0.5 * (lo + hi);
            roots.push_back(x + s);  // r = pi(x) = x + s
        }
    }

    // refine + residual filter; dedupe
    std::vector<double> out;
    for (double r : roots) {
        const double other = signs.equal() ? s - r : r - s;
        if (other <= 0.0) continue;
        if (std::abs(lam1(other) - lam1(r)) > 1e-12) continue;
        bool dup = false;
        for (double q : out)
            if (std::abs(q - r) < 1e-9) dup = true;
        if (!dup) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double symbol_radial(double r, SymbolId which) {
    const double u = r * r;
    switch (which) {
        case SymbolId::Lambda: return r == 0.0 ? 0.0 : lam0(r);
        case SymbolId::q: return std::sqrt((2.0 + u) / (1.0 + u));
        case SymbolId::L: return r / (1.0 + u);
        case SymbolId::inv_one_minus_laplacian: return 1.0 / (1.0 + u);
    }
    throw std::domain_error("symbol_radial: bad id");
}

double symbol_eval(double xi1, double xi2, SymbolId which) {
    return symbol_radial(std::hypot(xi1, xi2), which);
}

}  // namespace dispersion
}  // namespace ion2d
