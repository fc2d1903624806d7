#pragma once

#include <functional>
#include <iosfwd>
#include <optional>

#include "ghzsim/config.hpp"
#include "ghzsim/metrics.hpp"

namespace ghzsim {

struct FidelityReport {
    double fidelity = 0.0;
    double std_err = 0.0;             // > 0 only for the trajectory backend
    double trace_err = 0.0;
    double herm_err = 0.0;
    double min_eigenvalue = 0.0;
    std::vector<double> cavity_photons;
    double outcome_probability = 1.0; // Method 1 projection probability
    std::string backend;
    ProtocolTiming timing;
    std::int64_t working_dim = 0;     // dimension actually evolved (sector-reduced)
};

// One CSV row of a sweep/scan.
struct SweepRecord {
    int n_total = 0;
    double ratio = 0.0;               // mu_A / mu; fig9 rows reuse it for t/T
    int m = 0;
    double delta_A_hz = 0.0;          // Delta_A / 2pi
    double t_op_s = 0.0;
    double fidelity = 0.0;
    std::optional<double> std_err;
    std::string backend;
    std::uint64_t seed = 0;
};

struct PerturbationModel {
    double coupling_spread = 0.01;    // fractional, per qubit
    double detuning_spread = 0.05;
    std::uint64_t draw_seed = 7;
};

struct OptimizeTracePoint {
    int m = 0;
    double delta_A = 0.0;
    double value = 0.0;
};

struct OptimizeResult {
    int m = 0;
    double delta_A = 0.0;
    double value = 0.0;
    std::vector<OptimizeTracePoint> trace;
};

struct OptimizeOptions {
    std::vector<int> m_values;
    double delta_A_min = 0.0;         // magnitudes; signs handled separately
    double delta_A_max = 0.0;
    double delta_A_step = 0.0;
    bool scan_negative = false;
    int refine_iters = 25;
    long budget = 1'000'000;          // max objective evaluations
};

// Deterministic coarse grid over (m, Delta_A) followed by golden-section
// refinement on Delta_A around the best grid point.
OptimizeResult optimize(const std::function<double(int, double)>& objective,
                        const OptimizeOptions& opt);

// Run one protocol instance end to end (resolves couplings, picks a backend,
// evolves, applies the method's closing operations, scores the fidelity).
FidelityReport run_protocol(const RunConfig& cfg);

// Fidelity-vs-coupling-ratio sweep with per-point (m, Delta_A) optimization.
std::vector<SweepRecord> sweep_fig8(const RunConfig& base, std::ostream* log = nullptr);

// Robustness scan at the stored optimum: thermal cavities, preparation error
// epsilon, per-qubit coupling/detuning perturbations, fidelity vs t/T.
std::vector<SweepRecord> scan_fig9(const RunConfig& base, std::ostream* log = nullptr);

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path);

// Deterministic JSON manifest (config + seeds) written next to the CSV.
void write_manifest(const RunConfig& cfg, const std::string& csv_path,
                    const std::string& experiment);

// Fast invariant suite (analytic oracles, closed-form protocol algebra,
// timing residuals). Logs one line per check; returns the number of failures.
int run_validation(std::ostream& log);

} // namespace ghzsim
