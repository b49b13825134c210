#include "ion2d/solver.hpp"

#include "ion2d/dispersion.hpp"
#include "ion2d/rng.hpp"
#include "ion2d/semigroup.hpp"

#include <algorithm>
#include <cmath>

namespace ion2d {
namespace solver {

namespace {

using dispersion::SymbolId;

struct ModeTables {
    Grid g;
    std::vector<double> lam, q, absxi, kx, ky;

    explicit ModeTables(const Grid& grid) : g(grid) {
        const std::size_t N = g.size();
        lam.resize(N);
        q.resize(N);
        absxi.resize(N);
        kx.resize(N);
        ky.resize(N);
        for (int ix = 0; ix < g.n; ++ix) {
            const double a = g.freq(ix);
            for (int iy = 0; iy < g.n; ++iy) {
                const double b = g.freq(iy);
                const std::size_t i = g.idx(ix, iy);
                kx[i] = a;
                ky[i] = b;
                const double r = std::hypot(a, b);
                absxi[i] = r;
                lam[i] = dispersion::symbol_radial(r, SymbolId::Lambda);
                q[i] = dispersion::symbol_radial(r, SymbolId::q);
            }
        }
    }
};

const ModeTables& tables_for(const Grid& g) {
    static std::vector<ModeTables> cache;
    for (const auto& t : cache)
        if (t.g == g) return t;
    cache.emplace_back(g);
    return cache.back();
}

// index of -xi on the FFT grid
std::size_t reflect_idx(const Grid& g, int ix, int iy) {
    return g.idx((g.n - ix) % g.n, (g.n - iy) % g.n);
}

}  // namespace

SpectralField u_from_state(const SimState& s) {
    const Grid& g = s.rho.grid();
    const auto& T = tables_for(g);
    const auto& rh = s.rho.freq();
    const auto& ph = s.psi.freq();
    std::vector<cdouble> u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        u[i] = ph[i] + cdouble(0.0, 1.0) * T.q[i] * rh[i];
    return SpectralField::from_freq(g, u);
}

void state_from_u(const SpectralField& u, SimState& s) {
    const Grid& g = u.grid();
    const auto& T = tables_for(g);
    const auto& uh = u.freq();
    std::vector<cdouble> rh(g.size()), ph(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const std::size_t i = g.idx(ix, iy);
            const cdouble ur = std::conj(uh[reflect_idx(g, ix, iy)]);
            ph[i] = 0.5 * (uh[i] + ur);
            rh[i] = (uh[i] - ur) / (cdouble(0.0, 2.0) * T.q[i]);
        }
    s.rho = SpectralField::from_freq(g, rh);
    s.psi = SpectralField::from_freq(g, ph);
}

SpectralField profile_of(const SimState& s) {
    SpectralField u = u_from_state(s);
    semigroup::propagate_inplace(u, -s.t);
    return u;
}

namespace {

// shared nonlinear evaluation: given rho_hat, psi_hat produce the exact
// (meq) right-hand sides in frequency space; products on the padded grid
struct RhsWork {
    std::vector<cdouble> rho_t, psi_t;
    double sup_n = 0.0, sup_gradpsi = 0.0;
};

void rhs_hat(const Grid& g, const SimConfig& cfg, const std::vector<cdouble>& rho_hat,
             const std::vector<cdouble>& psi_hat, SpectralField* phi_warm, bool phi_warm_valid,
             SpectralField* phi_out, RhsWork& w) {
    const auto& T = tables_for(g);
    const std::size_t N = g.size();

    // n~ = Lambda rho, grad psi in frequency space
    std::vector<cdouble> nt_hat(N), px_hat(N), py_hat(N);
    for (std::size_t i = 0; i < N; ++i) {
        nt_hat[i] = T.absxi[i] * rho_hat[i];
        px_hat[i] = cdouble(0.0, 1.0) * T.kx[i] * psi_hat[i];
        py_hat[i] = cdouble(0.0, 1.0) * T.ky[i] * psi_hat[i];
    }

    // padded physical evaluation
    Grid gp(2 * g.n, g.length);
    auto pad = [&](const std::vector<cdouble>& hat) {
        std::vector<cdouble> big(gp.size(), cdouble(0.0));
        const int n = g.n;
        for (int ix = 0; ix < n; ++ix) {
            const int jx = (ix <= n / 2) ? ix : ix + gp.n - n;
            for (int iy = 0; iy < n; ++iy) {
                const int jy = (iy <= n / 2) ? iy : iy + gp.n - n;
                big[gp.idx(jx, jy)] = hat[g.idx(ix, iy)];
            }
        }
        fft::inverse(gp, big);
        return big;
    };
    auto unpad = [&](std::vector<cdouble>& big) {
        fft::forward(gp, big);
        std::vector<cdouble> hat(N);
        const int n = g.n;
        for (int ix = 0; ix < n; ++ix) {
            const int jx = (ix <= n / 2) ? ix : ix + gp.n - n;
            for (int iy = 0; iy < n; ++iy) {
                const int jy = (iy <= n / 2) ? iy : iy + gp.n - n;
                hat[g.idx(ix, iy)] = big[gp.idx(jx, jy)];
            }
        }
        return hat;
    };

    std::vector<cdouble> nt = pad(nt_hat), px = pad(px_hat), py = pad(py_hat);

    double min1n = 1e300, supn = 0.0, supg = 0.0;
    std::vector<cdouble> ax(gp.size()), ay(gp.size()), c(gp.size()), d(gp.size());
    for (std::size_t i = 0; i < gp.size(); ++i) {
        const double n1 = 1.0 + nt[i].real();
        min1n = std::min(min1n, n1);
        supn = std::max(supn, std::abs(nt[i].real()));
        const double gx = px[i].real(), gy = py[i].real();
        supg = std::max(supg, std::hypot(gx, gy));
        ax[i] = n1 * gx;
        ay[i] = n1 * gy;
        c[i] = 0.5 * (gx * gx + gy * gy);
        d[i] = (n1 > 0.0) ? std::log(n1) : 0.0;
    }
    if (min1n <= cfg.vacuum_floor)
        throw guard_error("vacuum guard: 1 + n~ fell to " + std::to_string(min1n));
    if (!std::isfinite(supn) || !std::isfinite(supg))
        throw guard_error("non-finite field values");
    w.sup_n = supn;
    w.sup_gradpsi = supg;

    std::vector<cdouble> ax_hat = unpad(ax), ay_hat = unpad(ay), c_hat = unpad(c),
                         d_hat = unpad(d);

    // phi from the elliptic solve (warm start when available)
    SpectralField ntf = SpectralField::from_freq(g, nt_hat);
    elliptic::SolveInfo einfo;
    SpectralField phi = elliptic::solve_phi(ntf, cfg.elliptic, &einfo,
                                            phi_warm_valid ? phi_warm : nullptr, 0.999);
    if (phi_out) *phi_out = phi;
    const auto& phi_hat = phi.freq();

    // rho_t = -(div/Lambda)((1+n~) grad psi); zero multiplier at xi=0
    w.rho_t.assign(N, cdouble(0.0));
    w.psi_t.assign(N, cdouble(0.0));
    for (std::size_t i = 0; i < N; ++i) {
        if (T.absxi[i] > 0.0) {
            const cdouble div = cdouble(0.0, 1.0) * (T.kx[i] * ax_hat[i] + T.ky[i] * ay_hat[i]);
            w.rho_t[i] = -div / T.absxi[i];
        }
        w.psi_t[i] = -c_hat[i] - d_hat[i] - phi_hat[i];
    }
}

}  // namespace

void rhs(SimState& s, const SimConfig& cfg, SpectralField& rho_t, SpectralField& psi_t) {
    const Grid& g = s.rho.grid();
    RhsWork w;
    SpectralField phi_new;
    rhs_hat(g, cfg, s.rho.freq(), s.psi.freq(), s.phi_valid ? &s.phi : nullptr, s.phi_valid,
            &phi_new, w);
    s.phi = phi_new;
    s.phi_valid = true;
    rho_t = SpectralField::from_freq(g, std::move(w.rho_t));
    psi_t = SpectralField::from_freq(g, std::move(w.psi_t));
}

namespace {

// G(tau, W) = e^{-i tau Lambda} N(e^{i tau Lambda} W) where N(U) = U_t - i Lambda U
void conjugated_remainder(const Grid& g, const SimConfig& cfg, const std::vector<cdouble>& What,
                          double tau, SimState& scratch, std::vector<cdouble>& out) {
    const auto& T = tables_for(g);
    const std::size_t N = g.size();
    std::vector<cdouble> uhat(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double ph = tau * T.lam[i];
        uhat[i] = What[i] * cdouble(std::cos(ph), std::sin(ph));
    }
    // split into real rho, psi
    std::vector<cdouble> rh(N), ph2(N);
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const std::size_t i = g.idx(ix, iy);
            const cdouble ur = std::conj(uhat[reflect_idx(g, ix, iy)]);
            ph2[i] = 0.5 * (uhat[i] + ur);
            rh[i] = (uhat[i] - ur) / (cdouble(0.0, 2.0) * T.q[i]);
        }
    RhsWork w;
    SpectralField phi_new;
    rhs_hat(g, cfg, rh, ph2, scratch.phi_valid ? &scratch.phi : nullptr, scratch.phi_valid,
            &phi_new, w);
    scratch.phi = phi_new;
    scratch.phi_valid = true;

    out.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const cdouble ut = w.psi_t[i] + cdouble(0.0, 1.0) * T.q[i] * w.rho_t[i];
        const cdouble nl = ut - cdouble(0.0, 1.0) * T.lam[i] * uhat[i];
        const double phm = -tau * T.lam[i];
        out[i] = nl * cdouble(std::cos(phm), std::sin(phm));
    }
}

}  // namespace

void step(SimState& s, const SimConfig& cfg, double dt) {
    const Grid& g = s.rho.grid();
    const auto& T = tables_for(g);
    const std::size_t N = g.size();

    std::vector<cdouble> W = u_from_state(s).freq();  // profile relative to time s.t
    std::vector<cdouble> k1, k2, k3, k4, tmp(N);

    conjugated_remainder(g, cfg, W, 0.0, s, k1);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = W[i] + 0.5 * dt * k1[i];
    conjugated_remainder(g, cfg, tmp, 0.5 * dt, s, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = W[i] + 0.5 * dt * k2[i];
    conjugated_remainder(g, cfg, tmp, 0.5 * dt, s, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = W[i] + dt * k3[i];
    conjugated_remainder(g, cfg, tmp, dt, s, k4);

    for (std::size_t i = 0; i < N; ++i) {
        const cdouble Wn =
            W[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const double ph = dt * T.lam[i];
        tmp[i] = Wn * cdouble(std::cos(ph), std::sin(ph));
    }
    SpectralField u = SpectralField::from_freq(g, std::move(tmp));
    state_from_u(u, s);
    s.t += dt;
}

double mass(const SimState& s) {
    const Grid& g = s.rho.grid();
    // int n~ dx = hat(n~)(0) = |xi| rho_hat at 0 = 0 identically; report the
    // grid-sum quadrature so roundoff is visible to diagnostics
    SpectralField nt = s.rho;
    nt.apply_multiplier([](double kx, double ky) { return std::hypot(kx, ky); });
    return nt.mean().real() * g.length * g.length;
}

double hamiltonian(SimState& s, const SimConfig& cfg) {
    const Grid& g = s.rho.grid();

    SpectralField nt = s.rho;
    nt.apply_multiplier([](double kx, double ky) { return std::hypot(kx, ky); });
    if (!s.phi_valid) {
        elliptic::SolveInfo einfo;
        s.phi = elliptic::solve_phi(nt, cfg.elliptic, &einfo, nullptr, 0.999);
        s.phi_valid = true;
    }

    SpectralField px = s.psi, py = s.psi;
    px.apply_multiplier([](double kx, double) { return kx; });
    px.mut_freq();  // values now kx * psi_hat; multiply by i below via rotation
    for (auto& v : px.mut_freq()) v *= cdouble(0.0, 1.0);
    py.apply_multiplier([](double, double ky) { return ky; });
    for (auto& v : py.mut_freq()) v *= cdouble(0.0, 1.0);

    SpectralField fx = s.phi, fy = s.phi;
    fx.apply_multiplier([](double kx, double) { return kx; });
    for (auto& v : fx.mut_freq()) v *= cdouble(0.0, 1.0);
    fy.apply_multiplier([](double, double ky) { return ky; });
    for (auto& v : fy.mut_freq()) v *= cdouble(0.0, 1.0);

    const auto& ntp = nt.phys();
    const auto& pxp = px.phys();
    const auto& pyp = py.phys();
    const auto& fxp = fx.phys();
    const auto& fyp = fy.phys();
    const auto& php = s.phi.phys();

    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double n1 = 1.0 + ntp[i].real();
        if (n1 <= 0.0) throw guard_error("hamiltonian: vacuum violated");
        const double gp2 = pxp[i].real() * pxp[i].real() + pyp[i].real() * pyp[i].real();
        const double gf2 = fxp[i].real() * fxp[i].real() + fyp[i].real() * fyp[i].real();
        const double f = php[i].real();
        acc += 0.5 * n1 * gp2 + (n1 * std::log(n1) - ntp[i].real()) + 0.5 * gf2 +
               (f * std::exp(f) - std::exp(f) + 1.0);
    }
    return acc * g.cell_area();
}

SimState initial_state(const SimConfig& cfg) {
    Grid g(cfg.grid, cfg.domain_length);
    const auto& spec = cfg.initial_data;
    auto rng = make_stream(spec.seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double kc = std::min(spec.k_cutoff, (2.0 / 3.0) * g.nyquist() * 0.8);
    auto envelope = [&](double r) {
        if (r == 0.0 || r > kc) return 0.0;
        double e = std::exp(-2.0 * (r / kc) * (r / kc));
        if (spec.shape == "gamma0") {
            const double d = (r - dispersion::gamma0()) / 0.15;
            e *= std::exp(-d * d);
        }
        return e;
    };

    // draw Hermitian-symmetric spectra so rho, psi are real
    std::vector<cdouble> rh(g.size(), cdouble(0.0)), ph(g.size(), cdouble(0.0));
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(g.freq(ix), g.freq(iy));
            const double e = envelope(r);
            // draw for every mode (deterministic order), then symmetrize
            const cdouble a(gauss(rng), gauss(rng));
            const cdouble b(gauss(rng), gauss(rng));
            if (e == 0.0) continue;
            rh[g.idx(ix, iy)] = e * a;
            ph[g.idx(ix, iy)] = e * b;
        }
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const std::size_t i = g.idx(ix, iy);
            const std::size_t j = reflect_idx(g, ix, iy);
            if (j < i) continue;
            const cdouble hr = 0.5 * (rh[i] + std::conj(rh[j]));
            const cdouble hp = 0.5 * (ph[i] + std::conj(ph[j]));
            rh[i] = hr;
            rh[j] = std::conj(hr);
            ph[i] = hp;
            ph[j] = std::conj(hp);
        }

    SimState s;
    s.rho = SpectralField::from_freq(g, std::move(rh));
    s.psi = SpectralField::from_freq(g, std::move(ph));
    s.t = 0.0;

    SpectralField u = u_from_state(s);
    const double e0 = paley::energy_norm(u, cfg.norm_params, cfg.n_rot);
    if (e0 > 0.0) {
        const double c = spec.amplitude / e0;
        s.rho *= c;
        s.psi *= c;
    }
    return s;
}

double dt_selftest(const SimConfig& cfg) {
    double dt = 0.1;
    for (int level = 0; level < 12; ++level) {
        SimState s = initial_state(cfg);
        SimConfig c2 = cfg;
        const double h0 = hamiltonian(s, c2);
        bool ok = true;
        try {
            for (int i = 0; i < 100; ++i) step(s, c2, dt);
        } catch (const guard_error&) {
            ok = false;
        }
        if (ok) {
            const double h1 = hamiltonian(s, c2);
            const double denom = std::max(std::abs(h0), 1e-300);
            if (std::abs(h1 - h0) / denom < 1e-10) return dt;
        }
        dt *= 0.5;
    }
    return dt;
}

RunResult run(const SimConfig& cfg, const RecordHook& hook) {
    RunResult out;
    SimConfig c = cfg;
    if (c.dt <= 0.0) c.dt = dt_selftest(cfg);
    out.dt_used = c.dt;

    SimState s = initial_state(c);

    auto record = [&](bool flagged) {
        DiagnosticsRecord r;
        r.t = s.t;
        r.flagged = flagged;
        try {
            r.mass = mass(s);
            r.hamiltonian = hamiltonian(s, c);
            SpectralField u = u_from_state(s);
            r.l2_U = u.norm_l2();
            r.energy_norm = paley::energy_norm(u, c.norm_params, c.n_rot);
            SpectralField v = profile_of(s);
            r.z_norm = paley::z_norm(v, c.norm_params).value;
            SpectralField nt = s.rho;
            nt.apply_multiplier([](double kx, double ky) { return std::hypot(kx, ky); });
            r.sup_n = nt.sup_abs();
            SpectralField px = s.psi, py = s.psi;
            px.apply_multiplier([](double kx, double) { return kx; });
            py.apply_multiplier([](double, double ky) { return ky; });
            const auto& a = px.phys();
            const auto& b = py.phys();
            double sg = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i)
                sg = std::max(sg, std::hypot(a[i].real(), b[i].real()));
            r.sup_gradpsi = sg;
        } catch (const guard_error&) {
            r.flagged = true;
        }
        out.records.push_back(r);
        if (hook) hook(s, r);
    };

    record(false);
    const long nsteps = long(std::ceil(c.t_end / c.dt - 1e-12));
    for (long i = 0; i < nsteps; ++i) {
        const double dt = std::min(c.dt, c.t_end - s.t);
        if (dt <= 0.0) break;
        try {
            step(s, c, dt);
        } catch (const guard_error& e) {
            out.guard_tripped = true;
            out.guard_message = e.what();
            record(true);
            return out;
        }
        if ((i + 1) % c.diagnostics_every == 0 || i + 1 == nsteps) record(false);
    }
    return out;
}

}  // namespace solver
}  // namespace ion2d
