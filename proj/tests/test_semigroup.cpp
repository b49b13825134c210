#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ion2d/semigroup.hpp"

#include "ion2d/dispersion.hpp"
#include "ion2d/rng.hpp"
#include "oracle_radial.hpp"

#include <cmath>

using namespace ion2d;
using namespace ion2d::semigroup;
using dispersion::lambda_eval;

namespace {

SpectralField random_field(const Grid& g, std::uint64_t seed) {
    auto rng = make_stream(seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cdouble> fh(g.size(), cdouble(0.0));
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(g.freq(ix), g.freq(iy));
            const cdouble z(gauss(rng), gauss(rng));
            if (r == 0.0 || r > 0.4 * g.nyquist()) continue;
            fh[g.idx(ix, iy)] = z * std::exp(-r * r);
        }
    return SpectralField::from_freq(g, std::move(fh));
}

SpectralField rot90(const SpectralField& f) {
    const Grid& g = f.grid();
    const auto& p = f.phys();
    std::vector<cdouble> q(g.size());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) q[g.idx(i, j)] = p[g.idx(j, (g.n - i) % g.n)];
    return SpectralField::from_phys(g, std::move(q));
}

}  // namespace

TEST_CASE("propagate: identity, unitarity, group law, reversibility") {
    Grid g(64, 32.0);
    SpectralField f = random_field(g, 5);
    const double n0 = f.norm_l2();

    SpectralField id = propagate(f, 0.0);
    id -= f;
    CHECK(id.norm_l2() < 1e-14 * n0);

    SpectralField a = propagate(f, 7.3);
    CHECK(a.norm_l2() == doctest::Approx(n0).epsilon(1e-12));

    SpectralField b = propagate(propagate(f, 3.1), 4.2);
    SpectralField c = propagate(f, 7.3);
    c -= b;
    CHECK(c.norm_l2() < 1e-10 * n0);

    SpectralField back = propagate(propagate(f, 11.0), -11.0);
    back -= f;
    CHECK(back.norm_l2() < 1e-10 * n0);
}

TEST_CASE("propagate: plane wave phase shift is exact") {
    Grid g(64, 16.0 * M_PI);
    const double kx = g.freq(5), ky = g.freq(2);
    std::vector<cdouble> p(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            p[g.idx(ix, iy)] = std::exp(cdouble(0.0, g.coord(ix) * kx + g.coord(iy) * ky));
    SpectralField f = SpectralField::from_phys(g, std::move(p));
    const double t = 2.37;
    const double ph = t * lambda_eval(std::hypot(kx, ky), 0);
    SpectralField out = propagate(f, t);
    const auto& a = out.phys();
    const auto& b = f.phys();
    double maxdiff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        maxdiff = std::max(maxdiff, std::abs(a[i] - b[i] * cdouble(std::cos(ph), std::sin(ph))));
    CHECK(maxdiff < 1e-12);
}

TEST_CASE("propagate commutes with quarter-turn rotations") {
    Grid g(64, 32.0);
    SpectralField f = random_field(g, 9);
    SpectralField a = rot90(propagate(f, 5.5));
    SpectralField b = propagate(rot90(f), 5.5);
    b -= a;
    CHECK(b.norm_l2() < 1e-12 * f.norm_l2());
}

TEST_CASE("wave packet travels at the group velocity") {
    Grid g(512, 420.0);
    const double k0 = 1.0, sx = 12.0;
    std::vector<cdouble> p(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const double x = g.coord(ix), y = g.coord(iy);
            p[g.idx(ix, iy)] = std::exp(cdouble(-(x * x + y * y) / (2.0 * sx * sx), k0 * x));
        }
    SpectralField f = SpectralField::from_phys(g, std::move(p));

    auto com = [&](const SpectralField& h) {
        const auto& v = h.phys();
        double m = 0.0, cx = 0.0, cy = 0.0;
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy) {
                const double w = std::norm(v[g.idx(ix, iy)]);
                m += w;
                cx += w * g.coord(ix);
                cy += w * g.coord(iy);
            }
        return std::array<double, 2>{cx / m, cy / m};
    };

    const auto c1 = com(propagate(f, 10.0));
    const auto c2 = com(propagate(f, 100.0));
    const double speed = std::hypot(c2[0] - c1[0], c2[1] - c1[1]) / 90.0;
    CHECK(speed == doctest::Approx(lambda_eval(k0, 1)).epsilon(0.02));
    CHECK(std::abs(c2[1] - c1[1]) < 0.02 * std::abs(c2[0] - c1[0]) + 1e-6);
}

TEST_CASE("stationary points of the group speed") {
    const double g0 = dispersion::gamma0();
    const double vmin = dispersion::lambda_prime_min();

    auto at_min = stationary_points(vmin);
    REQUIRE(at_min.size() == 1);
    CHECK(at_min[0] == doctest::Approx(g0).epsilon(1e-12));

    CHECK(stationary_points(0.5 * vmin).empty());
    CHECK(stationary_points(1.5).empty());  // above sqrt(2)

    auto two = stationary_points(lambda_eval(1.0, 1));
    REQUIRE(two.size() == 2);
    CHECK(two[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(two[1] > g0);
    for (double r : two) CHECK(std::abs(lambda_eval(r, 1) - lambda_eval(1.0, 1)) < 1e-12);

    // 1 < r' < sqrt(2): only the decreasing branch contributes
    auto one = stationary_points(1.2);
    REQUIRE(one.size() == 1);
    CHECK(one[0] < g0);
}

TEST_CASE("decay probe machinery at desk scale") {
    DecayProbeSpec s = generic_shell_probe(60.0, 256);
    auto res = decay_exponent_probe(s);
    REQUIRE(res.times.size() == res.supnorm.size());
    // L2 conserved along the flow
    for (double v : res.l2norm) CHECK(v == doctest::Approx(res.l2norm[0]).epsilon(1e-12));
    // decay trend: transitional slope, loose bounds
    CHECK(res.slope < -0.35);
    CHECK(res.slope > -1.4);
    for (std::size_t i = 1; i < res.supnorm.size(); ++i)
        CHECK(res.supnorm[i] < res.supnorm[i - 1] * 1.05);
}

TEST_CASE("decay probe aborts on wrap-around") {
    DecayProbeSpec s = generic_shell_probe(60.0, 256);
    s.domain_length = 140.0;  // far below the no-wrap bound ~339
    CHECK_THROWS_AS(decay_exponent_probe(s), std::runtime_error);
}

TEST_CASE("narrow gamma0 bump follows the coherent t^{-1/2} branch") {
    // width 0.05 << Airy scale: the paper's t^{-1/2} 2^{-n} alternative
    oracle::RadialField f;
    const double g0 = dispersion::gamma0();
    f.profile = [g0](double r) {
        const double u = (r - g0) / 0.05;
        return std::exp(-0.5 * u * u);
    };
    f.rho_lo = g0 - 0.35;
    f.rho_hi = g0 + 0.35;
    f.nq = 20000;
    std::vector<double> ts, sups;
    for (double t : {100.0, 215.0, 464.0, 1000.0}) {
        ts.push_back(t);
        sups.push_back(f.supnorm(t, 0.9 * dispersion::lambda_prime_min(), 1.02));
    }
    const double slope = oracle::fit_loglog_slope(ts, sups);
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.12));
}

TEST_CASE("low-frequency shells: t^{-1} decay with 2^{-k} prefactor growth") {
    // scaled windows t ~ 2^{-3k}: the non-degenerate stationary-phase regime
    double prefactor_prev = 0.0;
    for (int k : {-2, -3}) {
        const double c = std::ldexp(1.0, k);
        oracle::RadialField f;
        f.profile = [c](double r) {
            const double u = (r - c) / (0.5 * c);
            return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
        };
        f.rho_lo = 0.5 * c - 1e-9;
        f.rho_hi = 1.5 * c + 1e-9;
        f.nq = (k == -2) ? 32768 : 131072;
        const double nrm = f.l2norm_2d();
        const double t0 = 640.0 * std::pow(8.0, -k - 2), t1 = 10.0 * t0;
        const double vlo = lambda_eval(1.5 * c, 1), vhi = lambda_eval(0.5 * c, 1);
        std::vector<double> ts, sups;
        for (int i = 0; i < 6; ++i) {
            const double t = t0 * std::pow(t1 / t0, i / 5.0);
            ts.push_back(t);
            sups.push_back(f.supnorm(t, 0.92 * vlo, 1.05 * vhi) / nrm);
        }
        const double slope = oracle::fit_loglog_slope(ts, sups);
        CHECK(std::abs(slope - (-1.0)) < 0.15);
        const double pref = sups.back() * ts.back();
        if (prefactor_prev > 0.0) {
            const double growth = pref / prefactor_prev;
            CHECK(growth > 1.5);
            CHECK(growth < 2.4);
        }
        prefactor_prev = pref;
    }
}
