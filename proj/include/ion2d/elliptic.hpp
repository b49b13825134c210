#pragma once

#include "ion2d/field.hpp"

namespace ion2d {
namespace elliptic {

struct EllipticConfig {
    double tol = 1e-12;      // L2 residual target
    int max_iter = 200;
    enum class Scheme { fixed_point, newton } scheme = Scheme::fixed_point;
};

struct SolveInfo {
    int iterations = 0;
    double residual = 0.0;          // final ||Delta phi - e^phi + 1 + n~||_2
    double contraction_ratio = 0.0; // max observed ||d_{m+1}||/||d_m|| (fixed point)
};

// Solve Delta phi = e^phi - 1 - n~ for real phi by the contraction map
//   phi -> (Delta-1)^{-1}(-n~) + (Delta-1)^{-1}[e^x]_{>=2}(phi),
// [e^x]_{>=2}(phi) = e^phi - 1 - phi, products dealiased by 2x zero padding.
// Newton scheme: linearized solves (Delta - e^phi) d = -residual, inner
// iteration preconditioned by (Delta-1)^{-1}.
// Requires ||n~||_inf <= smallness (default 0.5); throws std::domain_error
// otherwise, std::runtime_error on non-convergence or overflow.
SpectralField solve_phi(const SpectralField& n_tilde, const EllipticConfig& cfg,
                        SolveInfo* info = nullptr, const SpectralField* initial = nullptr,
                        double smallness = 0.5);

// E_i = (Delta-1)^{-1} [e^x]_{>=order}(phi),  [e^x]_{>=m}(phi) = e^phi - sum_{i<m} phi^i/i!
SpectralField phi_expansion_terms(const SpectralField& phi, int order);

// independent residual ||Delta phi - e^phi + 1 + n~||_2 (dealiased e^phi)
double residual_l2(const SpectralField& phi, const SpectralField& n_tilde);

}  // namespace elliptic
}  // namespace ion2d
