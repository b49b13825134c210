#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ion2d/elliptic.hpp"
#include "ion2d/rng.hpp"

#include <cmath>

using namespace ion2d;
using namespace ion2d::elliptic;

namespace {

SpectralField constant_field(const Grid& g, double c) {
    return SpectralField::from_phys(g, std::vector<cdouble>(g.size(), cdouble(c, 0.0)));
}

SpectralField cos_x1(const Grid& g, double amp) {
    std::vector<cdouble> p(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            p[g.idx(ix, iy)] = amp * std::cos(g.coord(ix));
    return SpectralField::from_phys(g, std::move(p));
}

SpectralField random_small(const Grid& g, std::uint64_t seed, double amp) {
    auto rng = make_stream(seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cdouble> fh(g.size(), cdouble(0.0));
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const double r = std::hypot(g.freq(ix), g.freq(iy));
            if (r > 2.0) continue;
            fh[g.idx(ix, iy)] = cdouble(gauss(rng), gauss(rng)) * std::exp(-r * r);
        }
    // hermitian symmetrize for a real field
    std::vector<cdouble> sym(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const std::size_t i = g.idx(ix, iy);
            const std::size_t j = g.idx((g.n - ix) % g.n, (g.n - iy) % g.n);
            sym[i] = 0.5 * (fh[i] + std::conj(fh[j]));
        }
    SpectralField f = SpectralField::from_freq(g, std::move(sym));
    const double s = f.sup_abs();
    if (s > 0.0) f *= amp / s;
    return f;
}

}  // namespace

TEST_CASE("zero data gives the zero solution in one iteration") {
    Grid g(64, 8.0 * M_PI);
    SolveInfo info;
    SpectralField phi = solve_phi(constant_field(g, 0.0), {}, &info);
    CHECK(phi.norm_l2() == 0.0);
    CHECK(info.iterations == 1);
}

TEST_CASE("constant data: exact solution log(1+c)") {
    Grid g(64, 8.0 * M_PI);
    const double c = 0.1;
    SpectralField nt = constant_field(g, c);
    SpectralField phi = solve_phi(nt, {});
    const auto& p = phi.phys();
    double maxdev = 0.0;
    for (const auto& v : p) maxdev = std::max(maxdev, std::abs(v - std::log(1.0 + c)));
    CHECK(maxdev < 1e-12);
    CHECK(residual_l2(phi, nt) < 1e-12);
}

TEST_CASE("first-order response to eps cos(x1) is (eps/2) cos(x1)") {
    Grid g(64, 8.0 * M_PI);
    double c_prev = -1.0;
    for (double eps : {1e-3, 5e-4}) {
        SpectralField nt = cos_x1(g, eps);
        SpectralField phi = solve_phi(nt, {});
        // remove the predicted first order and measure the remainder
        SpectralField lin = cos_x1(g, eps / 2.0);
        SpectralField rem = phi;
        rem -= lin;
        const double r = rem.norm_l2();
        CHECK(r < 10.0 * eps * eps * g.length);  // O(eps^2)
        const double cfit = r / (eps * eps);
        if (c_prev > 0.0) CHECK(cfit == doctest::Approx(c_prev).epsilon(0.25));
        c_prev = cfit;
        // sign check: phi has the same sign as n~ at the crest
        const auto& pp = phi.phys();
        CHECK(pp[g.idx(0, 0)].real() > 0.0);
    }
}

TEST_CASE("contraction ratio below one for admissible data") {
    Grid g(64, 8.0 * M_PI);
    SpectralField nt = random_small(g, 7, 0.5);
    SolveInfo info;
    SpectralField phi = solve_phi(nt, {}, &info);
    CHECK(info.contraction_ratio > 0.0);
    CHECK(info.contraction_ratio < 1.0);
    CHECK(residual_l2(phi, nt) <= 1e-12);
}

TEST_CASE("newton and fixed point agree to 10 tol") {
    Grid g(64, 8.0 * M_PI);
    SpectralField nt = random_small(g, 11, 0.4);
    EllipticConfig fp;
    fp.tol = 1e-12;
    EllipticConfig nw = fp;
    nw.scheme = EllipticConfig::Scheme::newton;
    SpectralField a = solve_phi(nt, fp);
    SpectralField b = solve_phi(nt, nw);
    b -= a;
    CHECK(b.norm_l2() <= 10.0 * fp.tol);
}

TEST_CASE("smallness violation throws") {
    Grid g(64, 8.0 * M_PI);
    SpectralField nt = random_small(g, 13, 0.8);
    CHECK_THROWS_AS(solve_phi(nt, {}), std::domain_error);
}

TEST_CASE("stability bound ||phi||_2 <= C ||n~||_2 under amplitude halving") {
    Grid g(64, 8.0 * M_PI);
    double c_prev = -1.0;
    for (double amp : {0.4, 0.2, 0.1}) {
        SpectralField nt = random_small(g, 17, amp);
        SpectralField phi = solve_phi(nt, {});
        const double c = phi.norm_l2() / nt.norm_l2();
        CHECK(c > 0.0);
        CHECK(c < 2.0);
        if (c_prev > 0.0) CHECK(c == doctest::Approx(c_prev).epsilon(0.2));
        c_prev = c;
    }
}

TEST_CASE("expansion terms: telescoping and quadratic leading order") {
    Grid g(64, 8.0 * M_PI);
    SpectralField phi = random_small(g, 19, 0.3);

    SpectralField zero(g);
    for (int order : {2, 3, 4}) CHECK(phi_expansion_terms(zero, order).norm_l2() == 0.0);

    // E2 - E3 = (Delta-1)^{-1} (phi^2/2)
    SpectralField e2 = phi_expansion_terms(phi, 2);
    SpectralField e3 = phi_expansion_terms(phi, 3);
    e2 -= e3;
    std::vector<cdouble> sq = padded_product(g, phi.freq(), phi.freq());
    for (auto& v : sq) v *= 0.5;
    SpectralField q = SpectralField::from_freq(g, std::move(sq));
    q.apply_multiplier(
        [](double kx, double ky) { return -1.0 / (1.0 + kx * kx + ky * ky); });
    q -= e2;
    CHECK(q.norm_l2() < 1e-12 * std::max(1.0, e2.norm_l2()));

    // ||E2(phi)|| = O(||phi||^2): halving the amplitude quarters it
    SpectralField half = phi;
    half *= 0.5;
    const double r = phi_expansion_terms(half, 2).norm_l2() /
                     phi_expansion_terms(phi, 2).norm_l2();
    CHECK(r == doctest::Approx(0.25).epsilon(0.05));
}
