#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ghzsim/hamiltonian.hpp"
#include "ghzsim/rng.hpp"

namespace ghzsim {

struct EvolveConfig {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = 0.0;        // 0 = auto (bounded by the fastest phase)
    double initial_step = 0.0;    // 0 = auto
    long max_steps = 50'000'000;
    std::int64_t dense_dim_limit = 5000;   // refuse dense Lindblad beyond this
};

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    double trace_err = 0.0;       // |tr rho - 1| at the end (Lindblad only)
    double norm_err = 0.0;        // | ||psi|| - 1 | at the end (closed only)
};

struct TrajectoryConfig {
    int n_traj = 2000;
    std::uint64_t seed = 1;
    int n_threads = 0;            // 0 = hardware concurrency
    double jump_cap = 0.1;        // max per-step jump probability
    std::int64_t mean_rho_dim_limit = 256;  // accumulate mean density only below this
};

struct TrajectoryResult {
    std::vector<double> scores;   // per-trajectory score, trajectory order
    double mean_score = 0.0;      // fixed-order pairwise sum / n
    double std_err = 0.0;         // standard error of the mean score
    DMat mean_rho;                // empty unless dim <= mean_rho_dim_limit
    long total_jumps = 0;
};

// Schroedinger evolution d psi/dt = -i H(t) psi.
DVec evolve_closed(const Generator& gen, DVec psi0, double t0, double t1,
                   const EvolveConfig& cfg, StepStats* stats = nullptr);

// Dense Lindblad master equation. The collapse set may be empty.
DMat evolve_lindblad(const Generator& gen, const std::vector<CollapseChannel>& collapse,
                     DMat rho0, double t0, double t1, const EvolveConfig& cfg,
                     StepStats* stats = nullptr);

// Monte-Carlo wave-function unraveling. `sample_initial` draws the initial
// state for one trajectory (identical pure state or a thermal mixture sample);
// `score` maps a normalized final state to the quantity being averaged
// (typically |<target|psi>|^2).
TrajectoryResult evolve_trajectories(const Generator& gen,
                                     const std::vector<CollapseChannel>& collapse,
                                     const std::function<DVec(SplitMix64&)>& sample_initial,
                                     const std::function<double(const DVec&)>& score,
                                     double t0, double t1,
                                     const EvolveConfig& cfg,
                                     const TrajectoryConfig& tcfg);

// States sampled at increasing times (each in [t0, t1]); evolution is chained
// segment by segment so the whole run shares one adaptive-step history.
std::vector<DVec> evolve_closed_sampled(const Generator& gen, DVec psi0, double t0,
                                        const std::vector<double>& sample_times,
                                        const EvolveConfig& cfg, StepStats* stats = nullptr);
std::vector<DMat> evolve_lindblad_sampled(const Generator& gen,
                                          const std::vector<CollapseChannel>& collapse,
                                          DMat rho0, double t0,
                                          const std::vector<double>& sample_times,
                                          const EvolveConfig& cfg, StepStats* stats = nullptr);

// Single-mode thermal density matrix diag(n_bar^n / (1+n_bar)^{n+1}),
// truncated at `cutoff` and renormalized.
DMat thermal_state(double n_bar, int cutoff, double* truncated_weight = nullptr);

// Normalized Bose-Einstein weights over `levels` Fock states, truncated and
// renormalized. `truncated_weight`, if given, receives the discarded tail.
std::vector<double> thermal_weights(double n_bar, int levels,
                                    double* truncated_weight = nullptr);

} // namespace ghzsim
