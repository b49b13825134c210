#pragma once

#include "ion2d/dispersion.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ion2d {
namespace resonance {

using Vec2 = std::array<double, 2>;
using dispersion::SignPair;

struct SignTriple {
    int iota1 = +1, iota2 = +1, iota3 = +1;
};

// Phi_{i1,i2}(xi,eta) = -Lambda(xi) + i1 Lambda(xi-eta) + i2 Lambda(eta)
double phi(const Vec2& xi, const Vec2& eta, SignPair signs);
// Xi = grad_eta Phi
Vec2 grad_eta_phi(const Vec2& xi, const Vec2& eta, SignPair signs);

// PhiTilde_{i1,i2,i3}(xi,eta,sigma) =
//   -Lambda(xi) + i1 Lambda(xi-eta) + i2 Lambda(eta-sigma) + i3 Lambda(sigma)
double phi_tilde(const Vec2& xi, const Vec2& eta, const Vec2& sigma, SignTriple signs);
Vec2 grad_xi_phi_tilde(const Vec2& xi, const Vec2& eta, const Vec2& sigma, SignTriple signs);
// XiTilde = (grad_eta, grad_sigma) PhiTilde, returned as a 4-vector
std::array<double, 4> grad_etasigma_phi_tilde(const Vec2& xi, const Vec2& eta,
                                              const Vec2& sigma, SignTriple signs);

// (Lambda(a)+Lambda(b)-Lambda(c)) / RHS with c=a+b and
// RHS = |a|(1-c.a^ + 1-c.b^) + (|b||c|/(1+|b||c|)) (|a|/(1+|a|^2)).
// Preconditions: a,b,c nonzero and |a| <= min(|b|,|c|).
double time_resonance_ratio(const Vec2& a, const Vec2& b);

struct VerificationReport {
    std::string lemma;
    std::uint64_t samples = 0;     // admissible samples examined
    std::uint64_t requested = 0;   // draws requested
    bool vacuous = false;
    double min_ratio = 0.0;        // lemma-specific normalized extremum
    std::vector<double> argmin;    // frequency tuple attaining it
    double window = 0.0;
    std::uint64_t seed = 0;
    std::string note;
};

// Time-resonance lemma scan: min of time_resonance_ratio over `n_samples`
// admissible pairs (log-uniform magnitudes, uniform angles) plus collinear
// and |a|->0 stress sets.
VerificationReport verify_time_resonance(std::uint64_t n_samples, std::uint64_t seed);

// Space-resonance lemma check at output frequency xi: samples eta with
// xi-eta, eta in A(gamma0, window) and |Xi| <= kappa, and reports the max of
//   |[eta-p(xi)].xi_perp| / kappa   and   |[eta-p(xi)].xi_hat| (kappa^{2/3}+||xi|-2g0|) / kappa
// over the nearest resonance point p(xi).  min_ratio carries the max of the
// two normalized distances (the lemma's implicit constant).
VerificationReport verify_space_resonance(const Vec2& xi, double kappa, SignPair signs,
                                          std::uint64_t n_samples, std::uint64_t seed,
                                          double window = 1e-2);

// Iterated-resonance lemma check, signs (-,+,+): constrained sampling of
// collinear tuples with |XiTilde| <= kappa1, |grad_xi PhiTilde| >= kappa2 and
// inputs in A(gamma0, window); reports min |PhiTilde| / kappa2^{3/2}.
// Deterministic boundary refinement keeps the minimum sampling-noise free.
VerificationReport verify_iterated_resonance(double kappa1, double kappa2,
                                             std::uint64_t n_samples, std::uint64_t seed,
                                             double window = 0.2);

// For sign patterns other than {(+,+,-),(+,-,+),(-,+,+)} the second
// resonance function is uniformly of size one; reports min |PhiTilde| over
// unconstrained annulus samples with a "non-degenerate" note.
VerificationReport verify_iterated_nondegenerate(SignTriple signs, std::uint64_t n_samples,
                                                 std::uint64_t seed, double window = 0.2);

// Lipschitz-grid certificate in reduced radial coordinates.
// For kind==PhiRadial the box is (r1,r2,c) = (|xi|, |eta|, cos angle(xi,eta)),
// f = sign * Phi_{i1,i2}; for kind==PhiTildeCollinear the box is (x,y,z)
// (collinear reduced inputs), f = sign * PhiTilde_{(-,+,+)} = -lam(y+z-x)-lam(x)+lam(y)+lam(z).
// Returns a lower bound valid on the whole box:
//   min over global-lattice cell centers - lipschitz * step * sqrt(3) / 2.
// The lattice is anchored at the origin so sub-boxes never certify less.
struct BoxCertificate {
    double lower_bound = 0.0;
    bool conclusive = false;  // lower_bound > 0
    std::uint64_t evaluations = 0;
};

enum class CertFunction { PhiRadial, PhiTildeCollinear };

BoxCertificate certify_min_on_box(CertFunction kind, SignPair signs, double sign,
                                  const std::array<double, 3>& lo,
                                  const std::array<double, 3>& hi, double lipschitz,
                                  double grid_step);

// A valid Lipschitz bound for Phi in the reduced coordinates on the box,
// infinity when the box touches a zero-frequency degeneracy.
double phi_radial_lipschitz_bound(const std::array<double, 3>& lo,
                                  const std::array<double, 3>& hi);
double phi_tilde_collinear_lipschitz_bound(const std::array<double, 3>& lo,
                                           const std::array<double, 3>& hi);

}  // namespace resonance
}  // namespace ion2d
