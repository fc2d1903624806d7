#pragma once

#include "ghzsim/operators.hpp"

namespace ghzsim {

// Fidelity against a pure target: |<target|psi>| for pure states,
// sqrt(<target|rho|target>) for density matrices.
double fidelity(const QuantumState& state, const DVec& target);

// Overlap probability <target|rho|target> (fidelity squared).
double overlap_probability(const QuantumState& state, const DVec& target);

// Overlap of the qubit register alone with the register part of `target`.
// The cavities are ancillas that ideally return to their initial (possibly
// thermal) states, so the score traces them out:
//   sum_c <t (x) c| rho |t (x) c>  over all cavity Fock configurations c,
// where t is the register part of `target` (read off its cavity-vacuum
// block; the target must have vacuum cavities). Equals
// overlap_probability() when the state has no cavity excitations.
double register_overlap_probability(const QuantumState& state, const DVec& target);

double purity(const QuantumState& state);   // tr(rho^2); 1 for pure states

struct StateDiagnostics {
    double trace_error = 0.0;      // |tr rho - 1| (or norm error for pure)
    double hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;   // most negative eigenvalue of rho (0 for pure)
    std::vector<double> cavity_photons;   // <a_j^dag a_j> per cavity
};

StateDiagnostics diagnose(const QuantumState& state);

} // namespace ghzsim
