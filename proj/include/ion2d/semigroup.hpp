#pragma once

#include "ion2d/field.hpp"

#include <string>
#include <vector>

namespace ion2d {
namespace semigroup {

// e^{i t Lambda(D)}: frequency-space phase multiplication, unitary on L^2.
SpectralField propagate(const SpectralField& f, double t);
void propagate_inplace(SpectralField& f, double t);

// radii rho with lambda'(rho) = r_prime; 0, 1 or 2 of them (lambda' has its
// global minimum at gamma0, tends to sqrt(2) at 0+ and to 1 at infinity)
std::vector<double> stationary_points(double r_prime);

// Radial spectral profile of a decay probe.
//   kind "shell":    C^inf bump exp(-1/(1-u^2)), u=(r-center)/width
//   kind "flattop":  1 on [lo+sh_lo, hi-sh_hi] with smooth shoulders
struct ProbeProfile {
    std::string kind = "shell";
    double center = 0.5, width = 0.3;       // shell
    double lo = 0.0, hi = 0.0, sh_lo = 0.0, sh_hi = 0.0;  // flattop
    double eval(double r) const;
    double support_lo() const;
    double support_hi() const;
    double max_group_speed() const;  // sup of lambda' over the support
};

struct DecayProbeSpec {
    ProbeProfile profile;
    std::vector<double> times;     // increasing, positive
    double domain_length = 0.0;    // box side; see no-wrap rules below
    int grid = 0;                  // power-of-two points per side
    double fit_tmin = 0.0;         // earliest time entering the log-log fit
};

struct DecayProbeResult {
    std::vector<double> times;
    std::vector<double> supnorm;
    std::vector<double> l2norm;
    double slope = 0.0;            // fitted d log sup / d log t over t >= fit_tmin
    double slope_halfwidth = 0.0;  // 95% confidence halfwidth of the slope
    double prefactor = 0.0;        // exp(intercept) of the fit
};

// L^2-normalized probe evolved by e^{itLambda}; sup over the grid at each
// time (quadratically peak-refined), log-log slope over t >= fit_tmin.
// Aborts with std::runtime_error when wrap-around is detected (modulus near
// the box boundary above 1e-6 of the global sup).
DecayProbeResult decay_exponent_probe(const DecayProbeSpec& spec);

// canonical probe specs used by the acceptance suite
DecayProbeSpec generic_shell_probe(double tmax, int grid);
DecayProbeSpec gamma0_bump_probe(double tmax, int grid);

}  // namespace semigroup
}  // namespace ion2d
