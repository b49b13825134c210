#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ion2d/paley.hpp"
#include "ion2d/rng.hpp"

#include <cmath>

using namespace ion2d;
using namespace ion2d::paley;

namespace {

SpectralField random_field(const Grid& g, std::uint64_t seed, double kmax_frac = 0.5) {
    auto rng = make_stream(seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cdouble> fh(g.size(), cdouble(0.0));
    const double kcut = kmax_frac * g.nyquist();
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(g.freq(ix), g.freq(iy));
            const cdouble z(gauss(rng), gauss(rng));
            if (r == 0.0 || r > kcut) continue;
            fh[g.idx(ix, iy)] = z * std::exp(-r * r / (kcut * kcut));
        }
    return SpectralField::from_freq(g, std::move(fh));
}

}  // namespace

TEST_CASE("bump plateau and support") {
    CHECK(bump_phi(1.0) == 1.0);
    CHECK(bump_phi(1.25) == 1.0);
    CHECK(bump_phi(1.6) == 0.0);
    CHECK(bump_phi(-1.1) == 1.0);
    CHECK(bump_phi(1.4) > 0.0);
    CHECK(bump_phi(1.4) < 1.0);
}

TEST_CASE("frequency partition of unity to 1e-12") {
    auto rng = make_stream(3, 0);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 10000; ++i) {
        const double xi = std::pow(10.0, u(rng));
        double s = 0.0;
        for (int k = -40; k <= 40; ++k) s += cutoff_eval(CutoffKind::psi_k, k, 0, xi);
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
    // the telescoping identity at |xi| = 1 with a modest k-range
    double s = 0.0;
    for (int k = -20; k <= 20; ++k) s += cutoff_eval(CutoffKind::psi_k, k, 0, 1.0);
    CHECK(std::abs(s - 1.0) < 1e-12);
}

TEST_CASE("gamma0-shell family sums to one away from gamma0") {
    for (double y : {1e-4, 0.01, 0.3, 0.9, -0.25, -0.003}) {
        double s = cutoff_eval(CutoffKind::tilde_varphi_l_k, 0, 0, y);
        for (int n = 1; n <= 60; ++n) s += cutoff_eval(CutoffKind::tilde_varphi_l_k, -n, 0, y);
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("cutoff index preconditions") {
    CHECK_THROWS_AS(cutoff_eval(CutoffKind::varphi_l_k, -1, 0, 1.0), std::domain_error);
    CHECK_THROWS_AS(cutoff_eval(CutoffKind::tilde_varphi_l_k, 1, 0, 1.0), std::domain_error);
    CHECK_NOTHROW(cutoff_eval(CutoffKind::varphi_l_k, 0, 0, 1.0));
    CHECK_NOTHROW(cutoff_eval(CutoffKind::varphi_l_k, 3, 0, 1.0));
}

TEST_CASE("P_k on a plane wave is multiplication by psi_k") {
    Grid g(64, 16.0 * M_PI);
    // pick a lattice frequency of magnitude ~2^0
    const double kx = g.freq(8), ky = g.freq(3);  // |xi| = sqrt(1+0.14)...
    std::vector<cdouble> p(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            p[g.idx(ix, iy)] = std::exp(cdouble(0.0, g.coord(ix) * kx + g.coord(iy) * ky));
    SpectralField f = SpectralField::from_phys(g, std::move(p));
    const double r = std::hypot(kx, ky);
    const int k = int(std::floor(std::log2(r))) + 0;
    SpectralField pk = project(f, {k, 0, 0}, Projection::P_k);
    const double expected = cutoff_eval(CutoffKind::psi_k, k, 0, r);
    // eigenfunction: output = psi_k(xi0) * input
    const auto& a = pk.phys();
    const auto& b = f.phys();
    double maxdiff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        maxdiff = std::max(maxdiff, std::abs(a[i] - expected * b[i]));
    CHECK(maxdiff < 1e-12);
}

TEST_CASE("spatial partition telescopes: sum_j Q_jk P_k f = P_k f") {
    Grid g(128, 64.0);
    SpectralField f = random_field(g, 17);
    const int k = 1;
    SpectralField pk = project(f, {k, 0, 0}, Projection::P_k);
    const auto jr = resolvable_j_range(g);
    SpectralField acc(g);
    for (int j = j_min(k); j <= jr.second; ++j) {
        SpectralField q = project(f, {k, j, 0}, Projection::Q_jk);
        acc += q;
    }
    // the annuli above j_max are cut by the torus: include the remainder by
    // checking pointwise where the partition is complete (|x| <= L/3)
    const auto& ap = acc.phys();
    const auto& pp = pk.phys();
    double maxdiff = 0.0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            if (std::hypot(g.coord(ix), g.coord(iy)) > g.length / 3.0) continue;
            maxdiff = std::max(maxdiff, std::abs(ap[g.idx(ix, iy)] - pp[g.idx(ix, iy)]));
        }
    CHECK(maxdiff < 1e-12);
}

TEST_CASE("distant frequency shells are orthogonal") {
    Grid g(128, 64.0);
    SpectralField f = random_field(g, 23);
    SpectralField a = project(f, {0, 0, 0}, Projection::P_k);
    SpectralField b = project(a, {3, 0, 0}, Projection::P_k);
    CHECK(b.norm_l2() < 1e-14 * std::max(1.0, a.norm_l2()));
}

TEST_CASE("projection idempotence up to the transition region") {
    Grid g(128, 64.0);
    SpectralField f = random_field(g, 29);
    const int k = 0;
    SpectralField once = project(f, {k, 0, 0}, Projection::P_k);
    SpectralField twice = project(once, {k, 0, 0}, Projection::P_k);
    twice -= once;
    // ||(psi^2 - psi) fhat|| <= || fhat restricted to the transition region ||
    double trans = 0.0;
    const auto& fh = f.freq();
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(g.freq(ix), g.freq(iy));
            const double c = cutoff_eval(CutoffKind::psi_k, k, 0, r);
            if (c > 0.0 && c < 1.0) trans += std::norm(fh[g.idx(ix, iy)]);
        }
    const double trans_l2 = std::sqrt(trans) * g.dk() / (2.0 * M_PI);
    CHECK(twice.norm_l2() <= trans_l2 + 1e-14);
}

TEST_CASE("z-norm: zero field, homogeneity, localized bump") {
    Grid g(128, 64.0);
    SpectralField zero(g);
    CHECK(z_norm(zero, {}).value == 0.0);

    SpectralField f = random_field(g, 31);
    auto z1 = z_norm(f, {});
    SpectralField f3 = f;
    f3 *= 3.0;
    auto z3 = z_norm(f3, {});
    CHECK(z3.value == doctest::Approx(3.0 * z1.value).epsilon(1e-14));

    // field built as an exact Qstar_00 image: the sup sits at (j,k)=(0,0)
    // with value || Q_00 f ||_2 (weight 1) up to <5% leakage
    SpectralField bump = project(random_field(g, 37), {0, 0, 0}, Projection::Qstar_jk);
    const double n2 = bump.norm_l2();
    REQUIRE(n2 > 0.0);
    bump *= 1.0 / n2;
    auto z = z_norm(bump, {});
    SpectralField q00 = project(bump, {0, 0, 0}, Projection::Q_jk);
    CHECK(z.value >= q00.norm_l2() * (1.0 - 1e-12));
    CHECK(z.value <= 1.35);  // leakage into neighbor cells bounded
    CHECK(std::abs(int(z.arg_k)) <= 2);
    CHECK(z.arg_j <= 2);
}

TEST_CASE("z-norm triangle inequality on random pairs") {
    Grid g(64, 32.0);
    for (int i = 0; i < 10; ++i) {
        SpectralField a = random_field(g, 100 + i);
        SpectralField b = random_field(g, 200 + i);
        SpectralField s = a;
        s += b;
        CHECK(z_norm(s, {}).value <= z_norm(a, {}).value + z_norm(b, {}).value + 1e-12);
    }
}

TEST_CASE("Parseval to relative 1e-12") {
    Grid g(128, 40.0);
    SpectralField f = random_field(g, 41);
    const double nf = SpectralField::from_freq(g, f.freq()).norm_l2();
    const double np = SpectralField::from_phys(g, f.phys()).norm_l2();
    CHECK(nf == doctest::Approx(np).epsilon(1e-12));
}

TEST_CASE("energy norm: radial fields are rotation-invariant") {
    Grid g(128, 40.0);
    std::vector<cdouble> fh(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(g.freq(ix), g.freq(iy));
            fh[g.idx(ix, iy)] = std::exp(-2.0 * (r - 1.0) * (r - 1.0));
        }
    // kill any corner content
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            if (std::hypot(g.freq(ix), g.freq(iy)) > g.nyquist()) fh[g.idx(ix, iy)] = 0.0;
    SpectralField f = SpectralField::from_freq(g, std::move(fh));
    const double w1 = omega_term(f, 1e-5, 1);
    const double w2 = omega_term(f, 1e-5, 2);
    const double scale = f.norm_l2();
    CHECK(w1 < 1e-10 * scale);
    CHECK(w2 < 1e-10 * scale);
}

TEST_CASE("energy norm matches dense quadrature for a Gaussian packet") {
    Grid g(128, 40.0);
    const double s = 2.0, x0 = 1.3, y0 = 0.7;
    std::vector<cdouble> p(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const double x = g.coord(ix), y = g.coord(iy);
            p[g.idx(ix, iy)] =
                std::exp(cdouble(-(x * x + y * y) / (2.0 * s * s), x * x0 + y * y0));
        }
    SpectralField f = SpectralField::from_phys(g, std::move(p));
    NormParams np;
    np.N0 = 2.0;

    // dense quadrature oracle on the closed-form transform
    // fhat(xi) = 2 pi s^2 exp(-s^2 |xi - xi0|^2 / 2)
    const int nq = 1600;
    const double R = 3.4;
    double acc = 0.0, accw = 0.0;
    const double h = 2.0 * R / nq;
    for (int i = 0; i < nq; ++i)
        for (int j = 0; j < nq; ++j) {
            const double kx = x0 - R + (i + 0.5) * h, ky = y0 - R + (j + 0.5) * h;
            const double r = std::hypot(kx, ky);
            const double fh = 2.0 * M_PI * s * s *
                              std::exp(-s * s * ((kx - x0) * (kx - x0) + (ky - y0) * (ky - y0)) / 2.0);
            const double w = std::pow(r, np.delta) + std::pow(r, np.N0);
            acc += w * w * fh * fh;
            // Omega fhat = -s^2 (kx*y0 - ky*x0) fhat
            const double of = -s * s * (kx * y0 - ky * x0) * fh;
            accw += std::pow(r, 2.0 * np.delta) * of * of;
        }
    const double sobolev_oracle = std::sqrt(acc * h * h) / (2.0 * M_PI);
    const double omega_oracle = std::sqrt(accw * h * h) / (2.0 * M_PI);

    const double omega_impl = omega_term(f, np.delta, 1);
    const double total = energy_norm(f, np, 1);
    const double sobolev_impl = total - omega_impl;
    CHECK(sobolev_impl == doctest::Approx(sobolev_oracle).epsilon(1e-8));
    CHECK(omega_impl == doctest::Approx(omega_oracle).epsilon(2e-4));
}

TEST_CASE("energy norm homogeneity") {
    Grid g(64, 32.0);
    SpectralField f = random_field(g, 53, 0.4);
    NormParams np;
    const double e1 = energy_norm(f, np, 2);
    SpectralField f2 = f;
    f2 *= 0.25;
    CHECK(energy_norm(f2, np, 2) == doctest::Approx(0.25 * e1).epsilon(1e-12));
}

TEST_CASE("unresolvable shells are rejected") {
    Grid g(64, 16.0 * M_PI);
    SpectralField f = random_field(g, 59);
    CHECK_THROWS_AS(project(f, {9, 0, 0}, Projection::P_k), std::domain_error);
    CHECK_THROWS_AS(project(f, {0, 30, 0}, Projection::Q_jk), std::domain_error);
    CHECK_THROWS_AS(project(f, {0, 0, 20}, Projection::A_n_Qstar_jk), std::domain_error);
}
