#pragma once

#include "ion2d/field.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ion2d {
namespace paley {

// Smooth transition h: 0 on t<=0, 1 on t>=1, C^inf, built from e^{-1/t}.
double smoothstep(double t);

// The master bump: 1 on [-5/4,5/4], supported in [-3/2,3/2].
double bump_phi(double x);
// psi(x) = phi(x) - phi(2x); supported in 5/8 <= |x| <= 3/2.
double bump_psi(double x);

enum class CutoffKind { phi, psi_k, varphi_l_k, tilde_varphi_l_k };

// varphi^l_k: psi_k if k>l, phi_l if k=l (requires k >= l).
// tilde varphi^l_k: psi_k if k<l, 1-phi_{l-1} if k=l (requires k <= l).
double cutoff_eval(CutoffKind kind, int k, int l, double point);

struct DyadicIndex {
    int k = 0;        // frequency shell 2^k
    int j = 0;        // spatial shell 2^j
    int n = 0;        // gamma0-distance shell 2^{-n} (scaled)
};

struct NormParams {
    double delta = 1e-5;
    double N0 = 6.0, N1 = 4.0, N2 = 3.0, N3 = 2.0;
    double gamma_scale = 64.0;  // surrogate for the paper's 2^100 in A_n
};

// lowest admissible spatial shell for frequency shell k
inline int j_min(int k) { return k < 0 ? -k : 0; }

enum class Projection { P_k, Q_jk, Qstar_jk, A_n_Qstar_jk };

// Apply the localization operator.  P_k acts in frequency; Q adds the
// spatial cutoff (plateau phi_{j} at j = j_min(k), annulus psi_j above);
// Qstar_jk = P_{[k-2,k+2]} Q_j P_k; A_n uses gamma_scale*(|xi|-gamma0).
// Throws std::domain_error when the grid cannot resolve the shell.
SpectralField project(const SpectralField& f, const DyadicIndex& index, Projection which,
                      const NormParams& params = {});

struct ZNormResult {
    double value = 0.0;
    int arg_j = 0, arg_k = 0;
};

// ||f||_Z = sup over admissible (j,k) of 2^{10 k_+} 2^{delta k}
// 2^{(1-20 delta)(j+k)} ||Q_{jk} f||_2, truncated to grid-resolvable shells.
// Empty ranges contribute nothing (value 0).
ZNormResult z_norm(const SpectralField& profile, const NormParams& params,
                   std::optional<std::pair<int, int>> k_range = std::nullopt,
                   std::optional<std::pair<int, int>> j_range = std::nullopt);

// grid-resolvable shell ranges for a given grid
std::pair<int, int> resolvable_k_range(const Grid& g);
std::pair<int, int> resolvable_j_range(const Grid& g);

// ||(Lam^delta + Lam^N0) f||_2 + ||Lam^delta Omega^n_rot f||_2 with
// Lam = |D| and Omega the rotation field, applied as the angular derivative
// on a polar resampling of the transform.  Throws when the spectrum carries
// corner mass the polar grid cannot represent.
double energy_norm(const SpectralField& f, const NormParams& params, int n_rot);

// just the rotational part ||Lam^delta Omega^a f||_2 (a >= 0; a=0 allowed)
double omega_term(const SpectralField& f, double delta, int a);

}  // namespace paley
}  // namespace ion2d
