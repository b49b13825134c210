#include "ion2d/elliptic.hpp"

#include <cmath>
#include <stdexcept>

namespace ion2d {
namespace elliptic {

namespace {

// (Delta-1)^{-1} g: frequency multiplier -(1+|xi|^2)^{-1}
void inv_delta_minus_one(const Grid& g, std::vector<cdouble>& hat) {
    for (int ix = 0; ix < g.n; ++ix) {
        const double kx = g.freq(ix);
        for (int iy = 0; iy < g.n; ++iy) {
            const double ky = g.freq(iy);
            hat[g.idx(ix, iy)] *= -1.0 / (1.0 + kx * kx + ky * ky);
        }
    }
}

void laplacian(const Grid& g, std::vector<cdouble>& hat) {
    for (int ix = 0; ix < g.n; ++ix) {
        const double kx = g.freq(ix);
        for (int iy = 0; iy < g.n; ++iy) {
            const double ky = g.freq(iy);
            hat[g.idx(ix, iy)] *= -(kx * kx + ky * ky);
        }
    }
}

double l2_of_hat(const Grid& g, const std::vector<cdouble>& hat) {
    double s = 0.0;
    for (const auto& v : hat) s += std::norm(v);
    return std::sqrt(s) * g.dk() / (2.0 * M_PI);
}

void check_finite(const std::vector<cdouble>& v, const char* what) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::runtime_error(std::string(what) + ": overflow/NaN (e^phi blow-up?)");
}

}  // namespace

double residual_l2(const SpectralField& phi, const SpectralField& n_tilde) {
    const Grid& g = phi.grid();
    // Delta phi + 1 + n~ - e^phi, e^phi dealiased
    std::vector<cdouble> r = phi.freq();
    laplacian(g, r);
    std::vector<cdouble> e = padded_map(g, phi.freq(), [](cdouble v) {
        return std::exp(v.real());  // phi is real by contract
    });
    const auto& nt = n_tilde.freq();
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= e[i] - nt[i];
    // the "+1" only shifts the zero mode
    r[0] += g.length * g.length;  // hat of the constant 1 in our convention
    return l2_of_hat(g, r);
}

SpectralField solve_phi(const SpectralField& n_tilde, const EllipticConfig& cfg,
                        SolveInfo* info, const SpectralField* initial, double smallness) {
    const Grid& g = n_tilde.grid();
    if (n_tilde.sup_abs() > smallness)
        throw std::domain_error("solve_phi: ||n~||_inf exceeds the smallness threshold");

    // initial iterate: the linear term (Delta-1)^{-1}(-n~)
    std::vector<cdouble> phi_hat;
    if (initial) {
        phi_hat = initial->freq();
    } else {
        phi_hat = n_tilde.freq();
        for (auto& v : phi_hat) v = -v;
        inv_delta_minus_one(g, phi_hat);
    }
    std::vector<cdouble> lin = n_tilde.freq();
    for (auto& v : lin) v = -v;
    inv_delta_minus_one(g, lin);

    SolveInfo local;
    double prev_step = -1.0;

    auto fixed_point_sweep = [&](std::vector<cdouble>& cur) -> bool {
        for (int it = 0; it < cfg.max_iter; ++it) {
            // next = lin + (Delta-1)^{-1}(e^phi - 1 - phi)
            std::vector<cdouble> nl = padded_map(g, cur, [](cdouble v) {
                const double x = v.real();
                return cdouble(std::exp(x) - 1.0 - x, 0.0);
            });
            check_finite(nl, "solve_phi");
            inv_delta_minus_one(g, nl);
            std::vector<cdouble> next(cur.size());
            double step = 0.0;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                next[i] = lin[i] + nl[i];
                step += std::norm(next[i] - cur[i]);
            }
            step = std::sqrt(step) * g.dk() / (2.0 * M_PI);
            if (prev_step > 0.0 && step > 0.0)
                local.contraction_ratio = std::max(local.contraction_ratio, step / prev_step);
            prev_step = step;
            cur.swap(next);
            ++local.iterations;
            // the residual costs two padded transforms; only check it once the
            // step size suggests convergence (or periodically as a fallback)
            if (step <= cfg.tol || it % 8 == 7) {
                SpectralField cand = SpectralField::from_freq(g, cur);
                local.residual = residual_l2(cand, n_tilde);
                if (local.residual <= cfg.tol) return true;
            }
        }
        return false;
    };

    bool ok = false;
    if (cfg.scheme == EllipticConfig::Scheme::fixed_point) {
        ok = fixed_point_sweep(phi_hat);
    } else {
        // Newton: solve (Delta - W) d = -r with W = e^phi via the
        // preconditioned iteration d <- (Delta-1)^{-1}(-r + (W-1) d)
        for (int outer = 0; outer < cfg.max_iter && !ok; ++outer) {
            SpectralField cand = SpectralField::from_freq(g, phi_hat);
            local.residual = residual_l2(cand, n_tilde);
            ++local.iterations;
            if (local.residual <= cfg.tol) {
                ok = true;
                break;
            }
            // residual r = Delta phi - e^phi + 1 + n~ in frequency space
            std::vector<cdouble> r = phi_hat;
            laplacian(g, r);
            std::vector<cdouble> e = padded_map(
                g, phi_hat, [](cdouble v) { return cdouble(std::exp(v.real()), 0.0); });
            check_finite(e, "solve_phi(newton)");
            const auto& nt = n_tilde.freq();
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= e[i] - nt[i];
            r[0] += g.length * g.length;

            // W - 1 = e^phi - 1 as a pointwise factor
            std::vector<cdouble> wm1_hat = e;
            wm1_hat[0] -= g.length * g.length;

            std::vector<cdouble> d(phi_hat.size(), cdouble(0.0));
            for (int inner = 0; inner < 50; ++inner) {
                std::vector<cdouble> rhs = padded_product(g, wm1_hat, d);
                for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= r[i];
                inv_delta_minus_one(g, rhs);
                double diff = 0.0;
                for (std::size_t i = 0; i < rhs.size(); ++i) diff += std::norm(rhs[i] - d[i]);
                d.swap(rhs);
                if (std::sqrt(diff) * g.dk() / (2.0 * M_PI) < 0.05 * cfg.tol) break;
            }
            for (std::size_t i = 0; i < phi_hat.size(); ++i) phi_hat[i] += d[i];
        }
    }

    if (!ok)
        throw std::runtime_error("solve_phi: no convergence (smallness violated?)");

    SpectralField phi = SpectralField::from_freq(g, phi_hat);
    // scrub the imaginary roundoff: phi is real by construction
    auto& p = phi.mut_phys();
    for (auto& v : p) v = cdouble(v.real(), 0.0);
    if (info) *info = local;
    return phi;
}

SpectralField phi_expansion_terms(const SpectralField& phi, int order) {
    if (order < 2 || order > 4)
        throw std::domain_error("phi_expansion_terms: order must be in {2,3,4}");
    const Grid& g = phi.grid();
    std::vector<cdouble> e = padded_map(g, phi.freq(), [order](cdouble v) {
        const double x = v.real();
        double partial = 0.0, term = 1.0;
        for (int m = 0; m < order; ++m) {
            partial += term;
            term *= x / double(m + 1);
        }
        return cdouble(std::exp(x) - partial, 0.0);
    });
    inv_delta_minus_one(g, e);
    return SpectralField::from_freq(g, e);
}

}  // namespace elliptic
}  // namespace ion2d
