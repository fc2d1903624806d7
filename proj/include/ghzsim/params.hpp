#pragma once

#include <string>
#include <vector>

namespace ghzsim {

// All rates, couplings and detunings in angular frequency (rad/s); times in
// seconds. Config-file parsing converts from laboratory units (GHz for f =
// omega/2pi, microseconds for inverse rates).
struct SystemParams {
    int n_cavities = 2;
    std::vector<int> qubits_per_cavity{1, 1};
    int fock_cutoff = 4;

    double mu = 0.0;            // intra-cavity qubit coupling
    double mu_A = 0.0;          // coupler coupling
    double mu_tilde = 0.0;      // parasitic |g'> <-> |e| coupling, intra-cavity
    double mu_tilde_A = 0.0;    // parasitic coupling, coupler
    double delta = 0.0;         // Delta = omega_c - omega_eg (signed)
    double delta_A = 0.0;       // Delta_A (signed)
    double delta_tilde = 0.0;   // Delta~ = omega_c - omega_eg' (signed)
    double delta_tilde_A = 0.0;
    double mu_12 = 0.0;         // inter-cavity crosstalk

    std::vector<double> kappa{};            // photon decay per cavity
    double gamma_eg = 0.0;                  // intra-cavity qubit rates
    double gamma_eg_prime = 0.0;
    double gamma_gprime_g = 0.0;
    double gamma_e_phi = 0.0;
    double gamma_gprime_phi = 0.0;
    double gamma_eg_A = 0.0;                // coupler rates
    double gamma_eg_prime_A = 0.0;
    double gamma_gprime_g_A = 0.0;
    double gamma_e_phi_A = 0.0;
    double gamma_gprime_phi_A = 0.0;

    double n_bar = 0.0;          // thermal photons per cavity (initial state)
    double epsilon = 0.0;        // initial-state preparation error

    // Per-intra-cavity-qubit inhomogeneity, linear index across cavities.
    // Empty means homogeneous (scale 1, offset 0).
    std::vector<double> coupling_scale{};
    std::vector<double> detuning_offset{};

    int total_qubits() const {
        int s = 0;
        for (int m : qubits_per_cavity) s += m;
        return s;
    }
    double qubit_mu(int q) const {
        return mu * (coupling_scale.empty() ? 1.0 : coupling_scale.at(q));
    }
    double qubit_delta(int q) const {
        return delta + (detuning_offset.empty() ? 0.0 : detuning_offset.at(q));
    }
    double kappa_at(int j) const {
        if (kappa.empty()) return 0.0;
        return kappa.size() == 1 ? kappa[0] : kappa.at(j);
    }

    // Throws on hard violations (negative rates, bad counts); returns
    // human-readable warnings for soft ones (dispersive regime not satisfied).
    std::vector<std::string> validate() const;
};

} // namespace ghzsim
