#include "ion2d/paley.hpp"

#include "ion2d/dispersion.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ion2d {
namespace paley {

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double bump_phi(double x) {
    const double a = std::abs(x);
    if (a <= 1.25) return 1.0;
    if (a >= 1.5) return 0.0;
    return smoothstep((1.5 - a) / 0.25);
}

double bump_psi(double x) { return bump_phi(x) - bump_phi(2.0 * x); }

namespace {
double phi_l(double x, int l) { return bump_phi(std::ldexp(x, -l)); }
double psi_l(double x, int l) { return bump_psi(std::ldexp(x, -l)); }
}  // namespace

double cutoff_eval(CutoffKind kind, int k, int l, double point) {
    switch (kind) {
        case CutoffKind::phi: return bump_phi(point);
        case CutoffKind::psi_k: return psi_l(point, k);
        case CutoffKind::varphi_l_k:
            if (k < l) throw std::domain_error("varphi^l_k requires k >= l");
            return k > l ? psi_l(point, k) : phi_l(point, l);
        case CutoffKind::tilde_varphi_l_k:
            if (k > l) throw std::domain_error("tilde varphi^l_k requires k <= l");
            return k < l ? psi_l(point, k) : 1.0 - phi_l(point, l - 1);
    }
    throw std::domain_error("cutoff_eval: bad kind");
}

namespace {

// spatial cutoff for Q_j at frequency shell k: plateau at the bottom shell
double q_cutoff(double ax, int j, int k) {
    const int jm = j_min(k);
    return (j == jm) ? phi_l(ax, j) : psi_l(ax, j);
}

double a_n_multiplier(double r, int n, double gamma_scale) {
    const double y = gamma_scale * (r - dispersion::gamma0());
    return cutoff_eval(CutoffKind::tilde_varphi_l_k, -n, 0, y);
}

void check_k_resolvable(const Grid& g, int k) {
    if (1.5 * std::ldexp(1.0, k) > g.nyquist() || 0.625 * std::ldexp(1.0, k) < 0.5 * g.dk())
        throw std::domain_error("project: frequency shell not resolvable on this grid");
}

void check_j_resolvable(const Grid& g, int j) {
    if (std::ldexp(1.0, j) > 0.5 * g.length)
        throw std::domain_error("project: spatial shell exceeds half the domain");
}

SpectralField apply_pk(const SpectralField& f, int k) {
    SpectralField out = f;
    out.apply_multiplier([k](double kx, double ky) { return psi_l(std::hypot(kx, ky), k); });
    return out;
}

SpectralField apply_q(const SpectralField& f, int j, int k) {
    SpectralField out = f;
    const Grid& g = f.grid();
    auto& p = out.mut_phys();
    for (int ix = 0; ix < g.n; ++ix) {
        const double x = g.coord(ix);
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(x, g.coord(iy));
            p[g.idx(ix, iy)] *= q_cutoff(r, j, k);
        }
    }
    return out;
}

}  // namespace

SpectralField project(const SpectralField& f, const DyadicIndex& index, Projection which,
                      const NormParams& params) {
    const Grid& g = f.grid();
    check_k_resolvable(g, index.k);
    if (which == Projection::P_k) return apply_pk(f, index.k);

    check_j_resolvable(g, index.j);
    if (index.j < j_min(index.k))
        throw std::domain_error("project: (j,k) outside the admissible set");

    if (which == Projection::Q_jk) return apply_q(apply_pk(f, index.k), index.j, index.k);

    // Qstar_jk = P_{[k-2,k+2]} Q_j P_k; the band multiplier telescopes to
    // phi_{k+2} - phi_{k-3}
    SpectralField out = apply_q(apply_pk(f, index.k), index.j, index.k);
    const int k = index.k;
    out.apply_multiplier([k](double kx, double ky) {
        const double r = std::hypot(kx, ky);
        return phi_l(r, k + 2) - phi_l(r, k - 3);
    });
    if (which == Projection::Qstar_jk) return out;

    if (index.n < 0) throw std::domain_error("project: n must be >= 0");
    const double gs = params.gamma_scale;
    // shell n occupies | |xi|-gamma0 | ~ 2^{-n}/gamma_scale; check resolvable
    if (index.n > 0 && std::ldexp(1.5, -index.n) / gs < g.dk())
        throw std::domain_error("project: gamma0 shell not resolvable on this grid");
    const int n = index.n;
    out.apply_multiplier(
        [n, gs](double kx, double ky) { return a_n_multiplier(std::hypot(kx, ky), n, gs); });
    return out;
}

std::pair<int, int> resolvable_k_range(const Grid& g) {
    const int k_hi = int(std::floor(std::log2(g.nyquist() / 1.5)));
    const int k_lo = int(std::ceil(std::log2(g.dk() / 1.25)));
    return {k_lo, k_hi};
}

std::pair<int, int> resolvable_j_range(const Grid& g) {
    const int j_hi = int(std::floor(std::log2(g.length / 3.0)));
    const int j_lo = 0;  // the plateau shell handles everything below
    return {j_lo, j_hi};
}

ZNormResult z_norm(const SpectralField& profile, const NormParams& params,
                   std::optional<std::pair<int, int>> k_range,
                   std::optional<std::pair<int, int>> j_range) {
    const Grid& g = profile.grid();
    const auto kr = k_range.value_or(resolvable_k_range(g));
    const auto jr = j_range.value_or(resolvable_j_range(g));
    ZNormResult res;
    const double d = params.delta;
    for (int k = kr.first; k <= kr.second; ++k) {
        SpectralField pk = apply_pk(profile, k);
        if (pk.norm_l2() == 0.0) continue;
        for (int j = std::max(j_min(k), jr.first); j <= jr.second; ++j) {
            SpectralField q = apply_q(pk, j, k);
            const double w = std::exp2(10.0 * std::max(k, 0) + d * k + (1.0 - 20.0 * d) * (j + k));
            const double v = w * q.norm_l2();
            if (v > res.value) {
                res.value = v;
                res.arg_j = j;
                res.arg_k = k;
            }
        }
    }
    return res;
}

namespace {

// complex bicubic (Catmull-Rom) interpolation of the centered spectrum
struct CenteredSpectrum {
    const Grid* g;
    std::vector<cdouble> data;  // indexed [ix+n/2][iy+n/2], ix,iy in [-n/2, n/2)

    explicit CenteredSpectrum(const SpectralField& f) : g(&f.grid()) {
        const int n = g->n;
        data.resize(g->size());
        const auto& fh = f.freq();
        for (int ix = 0; ix < n; ++ix) {
            const int cx = (ix <= n / 2 - 1) ? ix + n / 2 : ix - n / 2;  // centered row
            for (int iy = 0; iy < n; ++iy) {
                const int cy = (iy <= n / 2 - 1) ? iy + n / 2 : iy - n / 2;
                data[std::size_t(cx) * n + cy] = fh[g->idx(ix, iy)];
            }
        }
    }

    cdouble at(int cx, int cy) const {
        const int n = g->n;
        if (cx < 0 || cx >= n || cy < 0 || cy >= n) return cdouble(0.0);
        return data[std::size_t(cx) * n + cy];
    }

    static double cr(double t, double fm1, double f0, double f1, double f2) {
        return f0 + 0.5 * t * (f1 - fm1 + t * (2 * fm1 - 5 * f0 + 4 * f1 - f2 +
                                                t * (3 * (f0 - f1) + f2 - fm1)));
    }

    cdouble sample(double kx, double ky) const {
        const int n = g->n;
        const double dk = g->dk();
        const double fx = kx / dk + n / 2.0, fy = ky / dk + n / 2.0;
        const int ix = int(std::floor(fx)), iy = int(std::floor(fy));
        const double tx = fx - ix, ty = fy - iy;
        double rr[4], ri[4];
        for (int a = -1; a <= 2; ++a) {
            double vr[4], vi[4];
            for (int b = -1; b <= 2; ++b) {
                const cdouble v = at(ix + a, iy + b);
                vr[b + 1] = v.real();
                vi[b + 1] = v.imag();
            }
            rr[a + 1] = cr(ty, vr[0], vr[1], vr[2], vr[3]);
            ri[a + 1] = cr(ty, vi[0], vi[1], vi[2], vi[3]);
        }
        return {cr(tx, rr[0], rr[1], rr[2], rr[3]), cr(tx, ri[0], ri[1], ri[2], ri[3])};
    }
};

}  // namespace

double omega_term(const SpectralField& f, double delta, int a) {
    const Grid& g = f.grid();
    const int n = g.n;
    const double kmax = g.nyquist();

    // corner-mass guard: the polar grid covers only the inscribed disk
    {
        const auto& fh = f.freq();
        double corner = 0.0, tot = 0.0;
        for (int ix = 0; ix < n; ++ix) {
            const double kx = g.freq(ix);
            for (int iy = 0; iy < n; ++iy) {
                const double r = std::hypot(kx, g.freq(iy));
                const double m = std::norm(fh[g.idx(ix, iy)]);
                tot += m;
                if (r > kmax) corner += m;
            }
        }
        if (tot > 0.0 && corner > 1e-16 * tot)
            throw std::domain_error("omega_term: spectrum carries corner mass; "
                                    "angular resolution insufficient");
    }

    CenteredSpectrum cs(f);
    const int n_r = 2 * n;
    const int n_t = 4 * n;
    const double dr = kmax / n_r;

    // per-ring angular FFT
    std::vector<cdouble> ring(n_t);
    fftw_plan plan = fftw_plan_dft_1d(n_t, reinterpret_cast<fftw_complex*>(ring.data()),
                                      reinterpret_cast<fftw_complex*>(ring.data()),
                                      FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);

    double acc = 0.0;
    for (int i = 0; i < n_r; ++i) {
        const double r = (i + 0.5) * dr;
        for (int j = 0; j < n_t; ++j) {
            const double th = 2.0 * M_PI * j / n_t;
            ring[j] = cs.sample(r * std::cos(th), r * std::sin(th));
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(ring.data()),
                         reinterpret_cast<fftw_complex*>(ring.data()));
        // int |d_theta^a g|^2 dtheta = (2pi/n_t^2) sum_m |m|^{2a} |c_m|^2
        double ringsum = 0.0;
        for (int m = 0; m < n_t; ++m) {
            const int ms = (m <= n_t / 2) ? m : m - n_t;
            const double w = std::pow(double(std::abs(ms)), a);
            ringsum += w * w * std::norm(ring[m]);
        }
        ringsum *= 2.0 * M_PI / (double(n_t) * double(n_t));
        acc += std::pow(r, 2.0 * delta) * ringsum * r * dr;
    }
    fftw_destroy_plan(plan);
    return std::sqrt(acc) / (2.0 * M_PI);
}

double energy_norm(const SpectralField& f, const NormParams& params, int n_rot) {
    const Grid& g = f.grid();
    const double d = params.delta, N0 = params.N0;
    double acc = 0.0;
    const auto& fh = f.freq();
    for (int ix = 0; ix < g.n; ++ix) {
        const double kx = g.freq(ix);
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(kx, g.freq(iy));
            const double w = (r == 0.0) ? 0.0 : std::pow(r, d) + std::pow(r, N0);
            acc += w * w * std::norm(fh[g.idx(ix, iy)]);
        }
    }
    const double sobolev = std::sqrt(acc) * g.dk() / (2.0 * M_PI);
    return sobolev + omega_term(f, d, n_rot);
}

}  // namespace paley
}  // namespace ion2d
