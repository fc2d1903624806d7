#pragma once

#include <string>

#include "ghzsim/evolve.hpp"
#include "ghzsim/protocol.hpp"

namespace ghzsim {

// Fig-8-style sweep settings: outer grid over the coupling ratio mu_A/mu,
// inner optimization over the timing integer m and the coupler detuning.
struct SweepConfig {
    double ratio_min = 1.0;
    double ratio_max = 2.0;
    int ratio_points = 40;
    std::vector<int> m_values;
    double delta_A_min = 0.0;      // rad/s, search window (magnitude)
    double delta_A_max = 0.0;
    double delta_A_step = 0.0;
    bool scan_negative_detuning = true;
    int refine_iters = 25;         // golden-section steps after the grid
};

struct Fig9Config {
    std::vector<double> epsilon_set{0.0, 0.05, 0.1};
    std::vector<double> t_over_T;  // default filled by the driver
    double n_bar = 0.1;            // thermal photons during the robustness scan
    double coupling_spread = 0.01;
    double detuning_spread = 0.05;
    std::uint64_t draw_seed = 7;
};

struct RunConfig {
    std::string name;
    SystemParams params;           // mu/mu_A filled from (ratio, m, detunings) unless explicit
    double ratio = 0.0;            // mu_A / mu; 0 = params carry explicit couplings
    double mu_tilde_ratio = 0.0;   // mu_tilde / mu (parasitic), applied on resolve
    double mu_tilde_A_ratio = 0.0;
    double mu_12_ratio = 0.0;      // mu_12 / mu_A
    int m = 0;                     // timing integer; 0 = unset
    Tier tier = Tier::Full_Eq15;
    ProtocolKind protocol = ProtocolKind::SingleShot;
    cd alpha{1.0 / 1.4142135623730951, 0.0};
    cd beta{1.0 / 1.4142135623730951, 0.0};

    std::string backend = "auto";  // auto | closed | lindblad | trajectories
    bool use_sector = true;        // evolve in the conserved-excitation subspace
    EvolveConfig evolve;
    TrajectoryConfig traj;
    bool idle_decoherence = false; // add Lindblad idling of t_d before and after
    double t_d = 2e-9;
    double t_scale = 1.0;          // evolve to t_scale * T (fig9 scans); target stays at T

    SweepConfig sweep;
    Fig9Config fig9;
    std::string output_dir = ".";
    std::string source_json;       // verbatim config text, for the run manifest
};

// Parse the JSON config format (lab units with mandatory suffixes: "1.0 GHz"
// frequencies meaning omega/2pi, "15 us" inverse rates, "2 ns" times).
// Unknown keys are rejected. Throws std::invalid_argument with the offending
// key in the message.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

RunConfig preset_config(const std::string& name);   // n3, n5, n7, n9
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);   // the shipped JSON itself

// Resolve mu, mu_A, T from (ratio, m, Delta, Delta_A); fills cfg.params and
// returns the timing. Throws if m/ratio are unset.
ProtocolTiming resolve_couplings(RunConfig& cfg);

std::string library_version();

} // namespace ghzsim
