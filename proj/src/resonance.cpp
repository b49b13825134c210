#include "ion2d/resonance.hpp"

#include "ion2d/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ion2d {
namespace resonance {

namespace {

using dispersion::gamma0;
using dispersion::lambda_eval;
using dispersion::pi_map;

double lam(double r) { return r == 0.0 ? 0.0 : lambda_eval(r, 0); }
double dlam(double r) { return lambda_eval(r, 1); }

double norm2(const Vec2& v) { return std::hypot(v[0], v[1]); }
Vec2 sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }

void check_nonzero(const Vec2& v, const char* what) {
    if (v[0] == 0.0 && v[1] == 0.0) throw std::domain_error(std::string(what) + " is zero");
}

// gradient of Lambda(v) = lambda(|v|): lambda'(|v|) v/|v|
Vec2 grad_lambda(const Vec2& v) {
    const double r = norm2(v);
    const double s = dlam(r) / r;
    return {s * v[0], s * v[1]};
}

}  // namespace

double phi(const Vec2& xi, const Vec2& eta, SignPair signs) {
    const Vec2 d = sub(xi, eta);
    check_nonzero(xi, "phi: xi");
    check_nonzero(eta, "phi: eta");
    check_nonzero(d, "phi: xi-eta");
    return -lam(norm2(xi)) + signs.iota1 * lam(norm2(d)) + signs.iota2 * lam(norm2(eta));
}

Vec2 grad_eta_phi(const Vec2& xi, const Vec2& eta, SignPair signs) {
    const Vec2 d = sub(xi, eta);
    check_nonzero(eta, "grad_eta_phi: eta");
    check_nonzero(d, "grad_eta_phi: xi-eta");
    const Vec2 g1 = grad_lambda(d);
    const Vec2 g2 = grad_lambda(eta);
    return {-signs.iota1 * g1[0] + signs.iota2 * g2[0],
            -signs.iota1 * g1[1] + signs.iota2 * g2[1]};
}

double phi_tilde(const Vec2& xi, const Vec2& eta, const Vec2& sigma, SignTriple signs) {
    const Vec2 a = sub(xi, eta), b = sub(eta, sigma);
    check_nonzero(a, "phi_tilde: xi-eta");
    check_nonzero(b, "phi_tilde: eta-sigma");
    check_nonzero(sigma, "phi_tilde: sigma");
    return -lam(norm2(xi)) + signs.iota1 * lam(norm2(a)) + signs.iota2 * lam(norm2(b)) +
           signs.iota3 * lam(norm2(sigma));
}

Vec2 grad_xi_phi_tilde(const Vec2& xi, const Vec2& eta, const Vec2& sigma, SignTriple signs) {
    (void)sigma;
    const Vec2 a = sub(xi, eta);
    check_nonzero(xi, "grad_xi_phi_tilde: xi");
    check_nonzero(a, "grad_xi_phi_tilde: xi-eta");
    const Vec2 g0 = grad_lambda(xi);
    const Vec2 g1 = grad_lambda(a);
    return {-g0[0] + signs.iota1 * g1[0], -g0[1] + signs.iota1 * g1[1]};
}

std::array<double, 4> grad_etasigma_phi_tilde(const Vec2& xi, const Vec2& eta,
                                              const Vec2& sigma, SignTriple signs) {
    const Vec2 a = sub(xi, eta), b = sub(eta, sigma);
    check_nonzero(a, "grad_etasigma_phi_tilde: xi-eta");
    check_nonzero(b, "grad_etasigma_phi_tilde: eta-sigma");
    check_nonzero(sigma, "grad_etasigma_phi_tilde: sigma");
    const Vec2 ga = grad_lambda(a), gb = grad_lambda(b), gs = grad_lambda(sigma);
    return {-signs.iota1 * ga[0] + signs.iota2 * gb[0],
            -signs.iota1 * ga[1] + signs.iota2 * gb[1],
            -signs.iota2 * gb[0] + signs.iota3 * gs[0],
            -signs.iota2 * gb[1] + signs.iota3 * gs[1]};
}

double time_resonance_ratio(const Vec2& a, const Vec2& b) {
    const Vec2 c = {a[0] + b[0], a[1] + b[1]};
    const double la = norm2(a), lb = norm2(b), lc = norm2(c);
    if (la == 0.0 || lb == 0.0 || lc == 0.0)
        throw std::domain_error("time_resonance_ratio: zero vector");
    if (la > std::min(lb, lc))
        throw std::domain_error("time_resonance_ratio: requires |a| <= |b| and |a| <= |c|");
    const double lhs = lam(la) + lam(lb) - lam(lc);
    const double ca = (c[0] * a[0] + c[1] * a[1]) / (lc * la);
    const double cb = (c[0] * b[0] + c[1] * b[1]) / (lc * lb);
    const double rhs =
        la * (1.0 - ca + 1.0 - cb) + (lb * lc / (1.0 + lb * lc)) * (la / (1.0 + la * la));
    return lhs / rhs;
}

VerificationReport verify_time_resonance(std::uint64_t n_samples, std::uint64_t seed) {
    VerificationReport rep;
    rep.lemma = "time";
    rep.requested = n_samples;
    rep.seed = seed;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    rep.argmin.assign(4, 0.0);

    auto consider = [&](const Vec2& a, const Vec2& b) {
        const Vec2 c = {a[0] + b[0], a[1] + b[1]};
        const double la = norm2(a), lb = norm2(b), lc = norm2(c);
        if (la == 0.0 || lb == 0.0 || lc < 1e-12) return;
        if (la > std::min(lb, lc)) return;
        const double r = time_resonance_ratio(a, b);
        ++rep.samples;
        if (r < rep.min_ratio) {
            rep.min_ratio = r;
            rep.argmin = {a[0], a[1], b[0], b[1]};
        }
    };

    const std::uint64_t chunk = 1 << 16;
    const std::uint64_t nchunks = (n_samples + chunk - 1) / chunk;
    for (std::uint64_t ci = 0; ci < nchunks; ++ci) {
        auto rng = make_stream(seed, ci);
        std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI);
        std::uniform_real_distribution<double> ulog(std::log(1e-3), std::log(1e3));
        const std::uint64_t todo = std::min(chunk, n_samples - ci * chunk);
        for (std::uint64_t i = 0; i < todo; ++i) {
            const double la = std::exp(ulog(rng)), lb = std::exp(ulog(rng));
            const double ta = uang(rng), tb = uang(rng);
            consider({la * std::cos(ta), la * std::sin(ta)},
                     {lb * std::cos(tb), lb * std::sin(tb)});
        }
    }

    // stress sets: collinear and near-collinear b = t*a with |a| -> 0
    auto rng = make_stream(seed, nchunks + 1);
    std::uniform_real_distribution<double> uj(-1.0, 1.0);
    for (int ia = 0; ia < 60; ++ia) {
        const double la = std::pow(10.0, -6.0 + 9.0 * ia / 59.0);
        for (int it = 0; it < 60; ++it) {
            const double t = std::pow(10.0, 6.0 * it / 59.0);  // |b| = t|a|, t >= 1
            const double ang = 1e-6 * uj(rng);
            const Vec2 a = {la, 0.0};
            const Vec2 b = {t * la * std::cos(ang), t * la * std::sin(ang)};
            consider(a, b);
            consider(a, {b[0], -b[1]});
        }
    }
    // perpendicular and anti-parallel-ish configurations
    for (int i = 0; i < 50; ++i) {
        const double la = std::pow(10.0, -4.0 + 8.0 * i / 49.0);
        consider({la, 0.0}, {0.0, la});
        consider({la, 0.0}, {-la * 0.5, la});
    }
    return rep;
}

VerificationReport verify_space_resonance(const Vec2& xi, double kappa, SignPair signs,
                                          std::uint64_t n_samples, std::uint64_t seed,
                                          double window) {
    VerificationReport rep;
    rep.lemma = "space";
    rep.requested = n_samples;
    rep.seed = seed;
    rep.window = window;
    rep.min_ratio = 0.0;  // this verifier reports a max (implicit constant)
    const double g = gamma0();
    const double s = norm2(xi);
    if (s == 0.0) throw std::domain_error("verify_space_resonance: xi is zero");
    const Vec2 xhat = {xi[0] / s, xi[1] / s};
    const Vec2 xperp = {-xhat[1], xhat[0]};

    const bool low_output = s < 0.5;  // k << 0 branch, else k ~ 0 branch
    // resonance points on the xi-axis
    const double pi_window = std::max(0.5, 2.0 * window);
    std::vector<double> roots = dispersion::space_resonance_roots(s, signs, pi_window);

    double worst_perp = 0.0, worst_par = 0.0, worst_low = 0.0;
    std::uint64_t admitted = 0;
    std::vector<double> arg(4, 0.0);

    auto admissible = [&](const Vec2& eta) {
        const Vec2 d = sub(xi, eta);
        const double re = norm2(eta), rd = norm2(d);
        if (re == 0.0 || rd == 0.0) return false;
        if (std::abs(re - g) >= window || std::abs(rd - g) >= window) return false;
        const Vec2 Xi = grad_eta_phi(xi, eta, signs);
        return norm2(Xi) <= kappa;
    };

    auto consider = [&](const Vec2& eta) {
        if (!admissible(eta)) return;
        ++admitted;
        if (roots.empty()) return;
        if (!low_output) {
            // nearest resonance point p = P(s) xhat
            double best = std::numeric_limits<double>::infinity();
            double dpar = 0.0, dperp = 0.0;
            for (double P : roots) {
                const Vec2 p = {P * xhat[0], P * xhat[1]};
                const Vec2 e = sub(eta, p);
                const double par = e[0] * xhat[0] + e[1] * xhat[1];
                const double per = e[0] * xperp[0] + e[1] * xperp[1];
                const double dist = std::hypot(par, per);
                if (dist < best) {
                    best = dist;
                    dpar = std::abs(par);
                    dperp = std::abs(per);
                }
            }
            const double np = dperp / kappa;
            const double na =
                dpar * (std::pow(kappa, 2.0 / 3.0) + std::abs(s - 2.0 * g)) / kappa;
            if (std::max(np, na) > std::max(worst_perp, worst_par)) arg = {eta[0], eta[1], 0, 0};
            worst_perp = std::max(worst_perp, np);
            worst_par = std::max(worst_par, na);
        } else {
            // k << 0: |eta - p| or |eta - xi + p| <~ 2^{-k} kappa, either accepted
            const double scale = kappa / s;  // 2^{-k} ~ 1/|xi|
            double best = std::numeric_limits<double>::infinity();
            for (double P : roots) {
                const Vec2 p = {P * xhat[0], P * xhat[1]};
                const double d1 = norm2(sub(eta, p));
                const double d2 = norm2({eta[0] - xi[0] + p[0], eta[1] - xi[1] + p[1]});
                best = std::min(best, std::min(d1, d2));
            }
            const double nl = best / scale;
            if (nl > worst_low) arg = {eta[0], eta[1], 0, 0};
            worst_low = std::max(worst_low, nl);
        }
    };

    const std::uint64_t chunk = 1 << 14;
    const std::uint64_t nchunks = (n_samples + chunk - 1) / chunk;
    for (std::uint64_t ci = 0; ci < nchunks; ++ci) {
        auto rng = make_stream(seed, ci);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::uniform_real_distribution<double> uj(-1.0, 1.0);
        const std::uint64_t todo = std::min(chunk, n_samples - ci * chunk);
        for (std::uint64_t i = 0; i < todo; ++i) {
            Vec2 eta;
            const double coin = u01(rng);
            if (coin < 0.4 || roots.empty()) {
                // wide proposal: uniform radius in the annulus, angle in a band
                const double r = g + window * uj(rng);
                const double th = 0.5 * uj(rng);
                eta = {r * (xhat[0] * std::cos(th) + xperp[0] * std::sin(th)),
                       r * (xhat[1] * std::cos(th) + xperp[1] * std::sin(th))};
            } else {
                // concentrated proposal near a resonance point (populates |Xi|<=kappa)
                const double P = roots[std::min<std::size_t>(
                    roots.size() - 1, std::size_t(u01(rng) * roots.size()))];
                const double denom = std::pow(kappa, 2.0 / 3.0) + std::abs(s - 2.0 * g);
                const double spar = 8.0 * kappa / std::max(denom, 1e-12);
                const double sper = 8.0 * kappa * (low_output ? 1.0 / s : 1.0);
                const bool mirror = !low_output ? false : (u01(rng) < 0.5);
                const double base = mirror ? (s - P) : P;
                const double par = base + spar * uj(rng);
                const double per = sper * uj(rng);
                eta = {par * xhat[0] + per * xperp[0], par * xhat[1] + per * xperp[1]};
            }
            consider(eta);
        }
    }

    rep.samples = admitted;
    rep.argmin = arg;
    if (admitted == 0) {
        rep.vacuous = true;
        rep.note = "vacuous: no sample satisfies |Xi| <= kappa";
        return rep;
    }
    if (roots.empty()) {
        rep.note = "admissible samples exist but no resonance point p(xi) in window";
        rep.min_ratio = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.min_ratio = low_output ? worst_low : std::max(worst_perp, worst_par);
    rep.note = low_output ? "max |eta-p|^ / (2^{-k} kappa) over admissible samples"
                          : "max of normalized (perp, par) distances to p(xi)";
    return rep;
}

VerificationReport verify_iterated_resonance(double kappa1, double kappa2,
                                             std::uint64_t n_samples, std::uint64_t seed,
                                             double window) {
    VerificationReport rep;
    rep.lemma = "iterated";
    rep.requested = n_samples;
    rep.seed = seed;
    rep.window = window;
    const double g = gamma0();
    const SignTriple signs{-1, +1, +1};
    const double piw = std::max(0.5, 1.5 * window);

    rep.min_ratio = std::numeric_limits<double>::infinity();
    double min_abs = std::numeric_limits<double>::infinity();
    rep.argmin.assign(6, 0.0);

    auto consider = [&](double x, double y, double z) {
        if (x <= 0.0 || y <= 0.0 || z <= 0.0) return false;
        if (std::abs(x - g) >= window || std::abs(y - g) >= window ||
            std::abs(z - g) >= window)
            return false;
        const double xt = std::hypot(dlam(y) - dlam(x), dlam(z) - dlam(y));
        if (xt > kappa1) return false;
        const double w = y + z - x;
        const double gx = std::abs(dlam(std::abs(w)) - dlam(x));
        if (gx < kappa2) return false;
        ++rep.samples;
        const double ph = std::abs(-lam(std::abs(w)) - lam(x) + lam(y) + lam(z));
        if (ph < min_abs) {
            min_abs = ph;
            rep.argmin = {w, 0.0, y + z, 0.0, z, 0.0};  // xi, eta, sigma on the sigma-axis
        }
        return true;
    };

    // rejection sampling with proposals near the resonant pairs {z, pi(z)}
    const std::uint64_t chunk = 1 << 14;
    const std::uint64_t nchunks = (n_samples + chunk - 1) / chunk;
    for (std::uint64_t ci = 0; ci < nchunks; ++ci) {
        auto rng = make_stream(seed, ci);
        std::uniform_real_distribution<double> uj(-1.0, 1.0);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const std::uint64_t todo = std::min(chunk, n_samples - ci * chunk);
        for (std::uint64_t i = 0; i < todo; ++i) {
            const double z = g + window * uj(rng);
            if (z <= 0.0) continue;
            double zp;
            try {
                zp = pi_map(z, piw);
            } catch (const std::domain_error&) {
                continue;
            }
            // admissible |lambda'(y)-lambda'(z)| <= kappa1 near y0 in {z, pi(z)}
            auto near_width = [&](double y0) {
                const double c2 = std::abs(lambda_eval(y0, 2));
                return 3.0 * std::min(window, std::max(kappa1 / std::max(c2, 1e-14),
                                                       std::sqrt(kappa1 / 0.02)));
            };
            const double y0 = (u01(rng) < 0.5) ? z : zp;
            const double y = y0 + near_width(y0) * uj(rng);
            if (y <= 0.0 || std::abs(dlam(y) - dlam(z)) > kappa1) continue;
            double x0 = y;
            if (u01(rng) < 0.5) {
                try {
                    x0 = pi_map(y, piw);
                } catch (const std::domain_error&) {
                    continue;
                }
            }
            const double x = x0 + near_width(x0) * uj(rng);
            consider(x, y, z);
        }
    }

    // deterministic refinement: the binding configuration is x = pi(z), y = z
    // with |grad_xi PhiTilde| = kappa2 exactly; bisect the boundary on each side.
    for (int side = -1; side <= 1; side += 2) {
        auto gx_of = [&](double d) {
            const double z = g + side * d;
            const double zp = pi_map(z, piw);
            const double w = 2.0 * z - zp;
            return std::abs(dlam(std::abs(w)) - dlam(zp));
        };
        const double dmax = window * (1.0 - 1e-9);
        double lo = 1e-9, hi = dmax;
        if (gx_of(hi) < kappa2) continue;  // side cannot reach kappa2 in-window
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (gx_of(mid) < kappa2 ? lo : hi) = mid;
        }
        const double d = hi * (1.0 + 1e-12);
        const double z = g + side * d;
        const double zp = pi_map(z, piw);
        consider(zp, z, z);
    }

    if (rep.samples == 0) {
        rep.vacuous = true;
        rep.note = "vacuous: constraint set empty at requested kappas";
        rep.min_ratio = 0.0;
        return rep;
    }
    rep.min_ratio = min_abs / std::pow(kappa2, 1.5);
    rep.note = "min |PhiTilde| / kappa2^{3/2}";
    return rep;
}

VerificationReport verify_iterated_nondegenerate(SignTriple signs, std::uint64_t n_samples,
                                                 std::uint64_t seed, double window) {
    VerificationReport rep;
    rep.lemma = "iterated";
    rep.requested = n_samples;
    rep.seed = seed;
    rep.window = window;
    rep.note = "non-degenerate: |PhiTilde| >~ 1";
    const double g = gamma0();
    double mn = std::numeric_limits<double>::infinity();
    rep.argmin.assign(6, 0.0);
    auto rng = make_stream(seed, 0);
    std::uniform_real_distribution<double> uj(-1.0, 1.0);
    std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const double ra = g + window * uj(rng), rb = g + window * uj(rng),
                     rc = g + window * uj(rng);
        const double t1 = uang(rng), t2 = uang(rng), t3 = uang(rng);
        const Vec2 a = {ra * std::cos(t1), ra * std::sin(t1)};   // xi - eta
        const Vec2 b = {rb * std::cos(t2), rb * std::sin(t2)};   // eta - sigma
        const Vec2 sg = {rc * std::cos(t3), rc * std::sin(t3)};  // sigma
        const Vec2 eta = {b[0] + sg[0], b[1] + sg[1]};
        const Vec2 xi = {a[0] + eta[0], a[1] + eta[1]};
        const double ph = std::abs(phi_tilde(xi, eta, sg, signs));
        ++rep.samples;
        if (ph < mn) {
            mn = ph;
            rep.argmin = {xi[0], xi[1], eta[0], eta[1], sg[0], sg[1]};
        }
    }
    rep.min_ratio = mn;
    return rep;
}

namespace {

double cert_eval(CertFunction kind, SignPair signs, double sgn, double a, double b, double c) {
    if (kind == CertFunction::PhiRadial) {
        const double cc = std::clamp(c, -1.0, 1.0);
        const double r1 = std::max(a, 1e-300), r2 = std::max(b, 1e-300);
        const double m2 = std::max(0.0, r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * cc);
        const double m = std::sqrt(m2);
        const double v = -lam(r1) + signs.iota1 * lam(m) + signs.iota2 * lam(r2);
        return sgn * v;
    }
    // PhiTildeCollinear, signs (-,+,+): f = -lam(|y+z-x|) - lam(|x|) + lam(|y|) + lam(|z|)
    const double w = b + c - a;
    const double v = -lam(std::abs(w)) - lam(std::abs(a)) + lam(std::abs(b)) + lam(std::abs(c));
    return sgn * v;
}

}  // namespace

BoxCertificate certify_min_on_box(CertFunction kind, SignPair signs, double sign,
                                  const std::array<double, 3>& lo,
                                  const std::array<double, 3>& hi, double lipschitz,
                                  double grid_step) {
    for (int d = 0; d < 3; ++d)
        if (!(hi[d] > lo[d])) throw std::invalid_argument("certify_min_on_box: empty box");
    if (!(grid_step > 0.0)) throw std::invalid_argument("certify_min_on_box: bad step");
    if (kind == CertFunction::PhiRadial && (lo[0] <= 0.0 || lo[1] <= 0.0))
        throw std::invalid_argument("certify_min_on_box: box touches zero frequency");

    BoxCertificate cert;
    if (!std::isfinite(lipschitz)) {
        cert.lower_bound = -std::numeric_limits<double>::infinity();
        cert.conclusive = false;
        return cert;
    }

    // global lattice cells [m h, (m+1) h); sample at cell centers (box-independent)
    const double h = grid_step;
    long m0[3], m1[3];
    double total = 1.0;
    for (int d = 0; d < 3; ++d) {
        m0[d] = long(std::floor(lo[d] / h));
        m1[d] = long(std::ceil(hi[d] / h)) - 1;
        if (m1[d] < m0[d]) m1[d] = m0[d];
        total *= double(m1[d] - m0[d] + 1);
    }
    if (total > 8e7) throw std::invalid_argument("certify_min_on_box: grid too fine for box");

    double best = std::numeric_limits<double>::infinity();
    for (long i = m0[0]; i <= m1[0]; ++i)
        for (long j = m0[1]; j <= m1[1]; ++j)
            for (long k = m0[2]; k <= m1[2]; ++k) {
                const double v = cert_eval(kind, signs, sign, (i + 0.5) * h, (j + 0.5) * h,
                                           (k + 0.5) * h);
                best = std::min(best, v);
                ++cert.evaluations;
            }

    cert.lower_bound = best - lipschitz * h * std::sqrt(3.0) / 2.0;
    cert.conclusive = cert.lower_bound > 0.0;
    return cert;
}

double phi_radial_lipschitz_bound(const std::array<double, 3>& lo,
                                  const std::array<double, 3>& hi) {
    const double r1a = lo[0], r1b = hi[0], r2a = lo[1], r2b = hi[1];
    const double cmax = std::min(1.0, hi[2]);
    if (r1a <= 0.0 || r2a <= 0.0) return std::numeric_limits<double>::infinity();
    // rigorous lower bounds on m = |xi - eta| over the box
    double mlb = std::max(0.0, std::max(r1a - r2b, r2a - r1b));
    if (cmax < 1.0) mlb = std::max(mlb, std::sqrt(2.0 * r1a * r2a * (1.0 - cmax)));
    if (mlb <= 0.0) return std::numeric_limits<double>::infinity();
    const double lp = std::sqrt(2.0);  // global sup of lambda'
    const double L1 = lp * (1.0 + (r1b + r2b) / mlb);
    const double L2 = lp * (1.0 + (r1b + r2b) / mlb);
    const double L3 = lp * r1b * r2b / mlb;
    return std::sqrt(L1 * L1 + L2 * L2 + L3 * L3);
}

double phi_tilde_collinear_lipschitz_bound(const std::array<double, 3>& lo,
                                           const std::array<double, 3>& hi) {
    (void)lo;
    (void)hi;
    // each coordinate moves at most two lambda arguments; |lambda'| <= sqrt(2)
    const double per = 2.0 * std::sqrt(2.0);
    return std::sqrt(3.0) * per;
}

}  // namespace resonance
}  // namespace ion2d
