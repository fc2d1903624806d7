#pragma once

#include "ghzsim/hamiltonian.hpp"
#include "ghzsim/metrics.hpp"

namespace ghzsim {

enum class ProtocolKind {
    SingleShot,   // conditional-phase evolution only, target = coupler+qubits GHZ
    Method1,      // + pi/2 pulse and projective measurement on the coupler
    Method2,      // qubit 1_1 held decoupled, then pi pulses and a swap
};

const char* protocol_name(ProtocolKind k);

// Interaction time and intra-cavity coupling that close both phase
// conditions: N mu_A^2 T / |Delta_A| = 2 m pi and lambda^2 T / |delta| = pi.
struct ProtocolTiming {
    int m = 0;
    double mu = 0.0;                // solved intra-cavity coupling (rad/s)
    double T = 0.0;                 // operation time (s)
    double lambda = 0.0;
    double delta = 0.0;             // Delta - Delta_A (signed)
    double coupler_phase_residual = 0.0;   // relative, should be ~1e-15
    double qubit_phase_residual = 0.0;
};

ProtocolTiming solve_coupling(int n_cavities, int m, double delta_big, double delta_A,
                              double mu_A);

// Initial product state: coupler alpha|g'> + beta|e>, every participating
// qubit in |+> (Method2: qubit 1_1 in |g'>), cavities in the given Fock
// levels. A nonzero preparation error epsilon biases every |+> and the
// coupler superposition toward sqrt((1+eps)/2), sqrt((1-eps)/2); it is only
// defined for the symmetric alpha = beta case.
DVec build_initial(const SystemParams& p, std::shared_ptr<const SpaceLayout> lay,
                   ProtocolKind kind, cd alpha, cd beta,
                   const std::vector<int>& fock_levels = {});

// Thermal cavities: mixture over Fock levels with Bose-Einstein weights.
DMat build_initial_thermal(const SystemParams& p, std::shared_ptr<const SpaceLayout> lay,
                           ProtocolKind kind, cd alpha, cd beta);

// Ideal outcome the fidelity is measured against (always the unperturbed,
// epsilon = 0 state). SingleShot: coupler+qubits GHZ with vacuum cavities.
// Method1: intra-cavity GHZ^+/-, coupler projected. Method2: intra-cavity
// GHZ with the coupler left in |g>.
DVec ideal_target(const SystemParams& p, std::shared_ptr<const SpaceLayout> lay,
                  ProtocolKind kind, cd alpha, cd beta, bool method1_minus = false);

// Single-qubit pulses and the two-qubit swap used by the two methods.
Operator coupler_half_pi(std::shared_ptr<const SpaceLayout> lay);
Operator pulse_gprime_to_g(std::shared_ptr<const SpaceLayout> lay, int site);
// |g>_{1_1}|e>_A -> -i|e>_{1_1}|g>_A (and the reverse), identity elsewhere.
Operator qubit_coupler_swap(std::shared_ptr<const SpaceLayout> lay);

void apply_unitary(const Operator& u, QuantumState& state);

struct MeasurementOutcome {
    double probability = 0.0;
    QuantumState post;              // normalized post-measurement state
};

// Projective measurement of the coupler in the {|g'>, |g>, |e>} basis.
MeasurementOutcome measure_coupler(const QuantumState& state, Level outcome);

// Post-evolution operations of the chosen method applied in place.
// Method1 projects onto `method1_outcome` (LVL_GPRIME -> GHZ^+, LVL_E ->
// GHZ^-) and returns the outcome probability; otherwise returns 1.
double finalize_protocol(ProtocolKind kind, QuantumState& state,
                         Level method1_outcome = LVL_GPRIME);

} // namespace ghzsim
