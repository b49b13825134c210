#pragma once

#include <array>
#include <optional>
#include <vector>

namespace ion2d {
namespace dispersion {

// Radial dispersion profile lambda(x) = x sqrt((2+x^2)/(1+x^2)) and its
// derivatives up to order 4 (closed forms).  x > 0, order in 0..4.
double lambda_eval(double x, int order);

// gamma0 = sqrt(1+sqrt(7)), the positive root of lambda''.
double gamma0();

// min of lambda' (attained at gamma0)
double lambda_prime_min();

enum class Branch { below_gamma0, above_gamma0 };

// Invert lambda' on one monotone branch; empty if v is outside the branch
// range (lambda' decreases from sqrt(2) to lambda'(gamma0) on (0,gamma0],
// increases from lambda'(gamma0) to 1 on [gamma0,inf)).
std::optional<double> invert_lambda_prime(double v, Branch b);

// Reflection map: the unique y on the opposite side of gamma0 with
// lambda'(y) = lambda'(x).  pi_map(gamma0) = gamma0.  `window` bounds
// |x-gamma0|; the paper's 2^{-D1/3} window is available but the practical
// default is 0.5.  Throws std::domain_error when x is outside the window or
// no reflected root exists (lambda'(x) >= 1 on the left branch).
double pi_map(double x, double window = 0.5);

struct SignPair {
    int iota1 = +1, iota2 = +1;  // each +1 or -1
    bool equal() const { return iota1 == iota2; }
};

// Space-resonance roots P_{i1,i2}(s): solutions r of
//   lambda'(s-r) = lambda'(r)   (equal signs; roots r=s/2 and x+pi(x)=s)
//   lambda'(r-s) = lambda'(r)   (opposite signs; root r=pi(x), pi(x)-x=s)
// restricted to r and s-r (resp. r-s) within `window` of gamma0 (the
// symmetric root s/2 is kept whenever it lies in the window).  Each root is
// refined until the lambda' residual is below 1e-12.  Sorted ascending.
std::vector<double> space_resonance_roots(double s, SignPair signs, double window = 0.5);

enum class SymbolId { Lambda, q, L, inv_one_minus_laplacian };

// Radial symbols evaluated at a 2D frequency; all defined at xi=0 by limit
// (Lambda(0)=0, q(0)=sqrt(2), L(0)=0, (1-Delta)^{-1}(0)=1).
double symbol_eval(double xi1, double xi2, SymbolId which);
double symbol_radial(double r, SymbolId which);

}  // namespace dispersion
}  // namespace ion2d
