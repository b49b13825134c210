#pragma once

#include "ion2d/elliptic.hpp"
#include "ion2d/field.hpp"
#include "ion2d/paley.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ion2d {
namespace solver {

// numeric guard violation (vacuum, non-finite values): CLI exit code 3
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimState {
    SpectralField rho, psi;  // real fields
    double t = 0.0;
    SpectralField phi;       // cached electron potential
    bool phi_valid = false;
};

struct InitialDataSpec {
    double amplitude = 1e-2;          // target energy norm of U_0
    std::string shape = "bandlimited";  // "bandlimited" | "gamma0"
    std::uint64_t seed = 1;
    double k_cutoff = 2.5;            // spectral support radius
};

struct SimConfig {
    int grid = 256;
    double domain_length = 16.0 * M_PI;
    double dt = 0.0;                  // <= 0: choose by the stability self-test
    double t_end = 10.0;
    int diagnostics_every = 20;
    InitialDataSpec initial_data;
    elliptic::EllipticConfig elliptic{1e-11, 200, elliptic::EllipticConfig::Scheme::fixed_point};
    paley::NormParams norm_params;
    int n_rot = 2;                    // Omega order tracked in the energy norm
    double vacuum_floor = 0.5;        // abort when 1 + n~ <= this
};

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;          // int n~ dx
    double hamiltonian = 0.0;
    double l2_U = 0.0;
    double energy_norm = 0.0;   // on U
    double z_norm = 0.0;        // on the profile V
    double sup_n = 0.0;         // sup |n~|
    double sup_gradpsi = 0.0;
    bool flagged = false;       // set on the final record when a guard tripped
};

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    bool guard_tripped = false;
    std::string guard_message;
    double dt_used = 0.0;
};

// U = psi + i q(D) rho in frequency space; inverse split enforces realness
SpectralField u_from_state(const SimState& s);
void state_from_u(const SpectralField& u, SimState& s);
// profile V = e^{-it Lambda(D)} U
SpectralField profile_of(const SimState& s);

// exact system right-hand side (meqrho)/(meqpsi); phi solved from Lambda rho
// and cached into the state.  Throws guard_error on vacuum violation.
void rhs(SimState& s, const SimConfig& cfg, SpectralField& rho_t, SpectralField& psi_t);

// integrating-factor RK4 step: exact linear flow e^{i dt Lambda} on U,
// classic RK4 on the conjugated nonlinear remainder
void step(SimState& s, const SimConfig& cfg, double dt);

double mass(const SimState& s);
double hamiltonian(SimState& s, const SimConfig& cfg);

SimState initial_state(const SimConfig& cfg);

// halve dt from 0.1 until the relative Hamiltonian drift over 100 steps
// drops below 1e-10
double dt_selftest(const SimConfig& cfg);

using RecordHook = std::function<void(const SimState&, const DiagnosticsRecord&)>;

RunResult run(const SimConfig& cfg, const RecordHook& hook = nullptr);

}  // namespace solver
}  // namespace ion2d
