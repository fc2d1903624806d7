// Command-line harness for the GHZ-preparation simulator. Talks to the core
// exclusively through the C API in ghzsim/ghzsim.h.
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "ghzsim/ghzsim.h"

namespace {

struct CommonOpts {
    std::string preset;
    std::string config_file;
    std::string tier;
    std::string protocol;
    std::string backend;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int n_traj = 0;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_output) {
    cmd->add_option("--preset", o.preset, "shipped parameter set (n3, n5, n7, n9)");
    cmd->add_option("--config", o.config_file, "JSON config file (overrides --preset)");
    cmd->add_option("--tier", o.tier,
                    "Hamiltonian tier: ideal/full/effective2/effective3/effective5/diagonal");
    cmd->add_option("--protocol", o.protocol, "single-shot, method1 or method2");
    cmd->add_option("--backend", o.backend, "auto, closed, lindblad or trajectories");
    cmd->add_option("--seed", o.seed, "trajectory RNG seed")->each([&o](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--n-traj", o.n_traj, "number of MC trajectories");
    cmd->add_option("--threads", o.threads, "trajectory worker threads (0 = all cores)");
    if (with_output) cmd->add_option("--out", o.output_dir, "output directory for CSV/manifest");
}

int fail(const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, ghz_last_error());
    return 1;
}

ghz_config* load_config(const CommonOpts& o) {
    ghz_config* cfg = nullptr;
    ghz_status st;
    if (!o.config_file.empty())
        st = ghz_config_from_file(o.config_file.c_str(), &cfg);
    else if (!o.preset.empty())
        st = ghz_config_from_preset(o.preset.c_str(), &cfg);
    else {
        std::fprintf(stderr, "error: give --preset or --config\n");
        return nullptr;
    }
    if (st != GHZ_OK) {
        fail("loading config");
        return nullptr;
    }
    auto apply = [&](ghz_status s, const char* what) {
        if (s != GHZ_OK) {
            fail(what);
            ghz_config_free(cfg);
            cfg = nullptr;
        }
        return cfg != nullptr;
    };
    if (!o.tier.empty() && !apply(ghz_config_set_tier(cfg, o.tier.c_str()), "--tier")) return nullptr;
    if (!o.protocol.empty() &&
        !apply(ghz_config_set_protocol(cfg, o.protocol.c_str()), "--protocol"))
        return nullptr;
    if (!o.backend.empty() &&
        !apply(ghz_config_set_backend(cfg, o.backend.c_str()), "--backend"))
        return nullptr;
    if (o.seed_set && !apply(ghz_config_set_seed(cfg, o.seed), "--seed")) return nullptr;
    if (o.n_traj > 0 && !apply(ghz_config_set_n_traj(cfg, o.n_traj), "--n-traj")) return nullptr;
    if (o.threads >= 0 && !apply(ghz_config_set_threads(cfg, o.threads), "--threads"))
        return nullptr;
    if (!o.output_dir.empty() &&
        !apply(ghz_config_set_output_dir(cfg, o.output_dir.c_str()), "--out"))
        return nullptr;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GHZ-state preparation simulator (multi-cavity register with one "
                 "coupler qubit)"};
    app.require_subcommand(1);

    CommonOpts sim_o, fig8_o, fig9_o;
    auto* sim = app.add_subcommand("simulate", "run one protocol instance and print a report");
    add_common(sim, sim_o, false);
    auto* fig8 = app.add_subcommand(
        "fig8", "fidelity-vs-coupling-ratio sweep with per-point optimization (CSV)");
    add_common(fig8, fig8_o, true);
    std::string fig8_csv = "fig8.csv";
    fig8->add_option("--csv", fig8_csv, "CSV file name");
    auto* fig9 = app.add_subcommand(
        "fig9", "robustness scan: thermal photons, preparation error, inhomogeneity (CSV)");
    add_common(fig9, fig9_o, true);
    std::string fig9_csv = "fig9.csv";
    fig9->add_option("--csv", fig9_csv, "CSV file name");
    auto* validate = app.add_subcommand("validate", "run the fast invariant suite");
    auto* presets = app.add_subcommand("presets", "list shipped parameter presets");

    CLI11_PARSE(app, argc, argv);

    if (presets->parsed()) {
        char buf[256];
        if (ghz_preset_list(buf, sizeof buf) != GHZ_OK) return fail("presets");
        std::printf("%s\n", buf);
        return 0;
    }
    if (validate->parsed()) {
        if (ghz_run_validate() != GHZ_OK) return fail("validate");
        std::printf("all checks passed\n");
        return 0;
    }
    if (sim->parsed()) {
        ghz_config* cfg = load_config(sim_o);
        if (!cfg) return 1;
        ghz_report rep;
        if (ghz_run_simulate(cfg, &rep) != GHZ_OK) {
            ghz_config_free(cfg);
            return fail("simulate");
        }
        std::printf("fidelity           %.6f\n", rep.fidelity);
        if (rep.std_err > 0.0) std::printf("std_err            %.2e\n", rep.std_err);
        std::printf("outcome_prob       %.6f\n", rep.outcome_probability);
        std::printf("t_op               %.4f ns\n", rep.t_op_s * 1e9);
        std::printf("mu/2pi             %.4f MHz\n", rep.mu_hz / 1e6);
        std::printf("mu_A/2pi           %.4f MHz\n", rep.mu_A_hz / 1e6);
        std::printf("backend            %s (dim %lld)\n", rep.backend, rep.working_dim);
        std::printf("trace_err          %.2e\n", rep.trace_err);
        std::printf("herm_err           %.2e\n", rep.herm_err);
        std::printf("min_eigenvalue     %.2e\n", rep.min_eigenvalue);
        ghz_config_free(cfg);
        return 0;
    }
    if (fig8->parsed()) {
        ghz_config* cfg = load_config(fig8_o);
        if (!cfg) return 1;
        const ghz_status st = ghz_run_fig8(cfg, fig8_csv.c_str());
        ghz_config_free(cfg);
        if (st != GHZ_OK) return fail("fig8");
        std::printf("wrote %s and %s.manifest.json\n", fig8_csv.c_str(), fig8_csv.c_str());
        return 0;
    }
    if (fig9->parsed()) {
        ghz_config* cfg = load_config(fig9_o);
        if (!cfg) return 1;
        const ghz_status st = ghz_run_fig9(cfg, fig9_csv.c_str());
        ghz_config_free(cfg);
        if (st != GHZ_OK) return fail("fig9");
        std::printf("wrote %s and %s.manifest.json\n", fig9_csv.c_str(), fig9_csv.c_str());
        return 0;
    }
    return 0;
}
