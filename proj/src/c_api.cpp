#include "ghzsim/ghzsim.h"

#include <cstring>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>

#include "ghzsim/experiments.hpp"

using namespace ghzsim;

struct ghz_config {
    RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

ghz_status set_error(ghz_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class Fn>
ghz_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        return set_error(GHZ_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return set_error(GHZ_ERR_RUNTIME, e.what());
    }
}

std::string csv_path(const RunConfig& cfg, const char* name) {
    std::filesystem::path dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

} // namespace

extern "C" {

const char* ghz_version(void) {
    static const std::string v = library_version();
    return v.c_str();
}

const char* ghz_last_error(void) { return g_last_error.c_str(); }

ghz_status ghz_preset_list(char* buf, size_t buflen) {
    if (!buf) return set_error(GHZ_ERR_INVALID, "null buffer");
    std::string s;
    for (const auto& n : preset_names()) {
        if (!s.empty()) s += ",";
        s += n;
    }
    if (s.size() + 1 > buflen) return set_error(GHZ_ERR_INVALID, "buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return GHZ_OK;
}

ghz_status ghz_config_from_file(const char* path, ghz_config** out) {
    if (!path || !out) return set_error(GHZ_ERR_INVALID, "null argument");
    return guarded([&] {
        if (!std::filesystem::exists(path))
            return set_error(GHZ_ERR_IO, std::string("no such file: ") + path);
        *out = new ghz_config{parse_config_file(path)};
        return GHZ_OK;
    });
}

ghz_status ghz_config_from_text(const char* json_text, ghz_config** out) {
    if (!json_text || !out) return set_error(GHZ_ERR_INVALID, "null argument");
    return guarded([&] {
        *out = new ghz_config{parse_config_text(json_text)};
        return GHZ_OK;
    });
}

ghz_status ghz_config_from_preset(const char* name, ghz_config** out) {
    if (!name || !out) return set_error(GHZ_ERR_INVALID, "null argument");
    return guarded([&] {
        *out = new ghz_config{preset_config(name)};
        return GHZ_OK;
    });
}

void ghz_config_free(ghz_config* cfg) { delete cfg; }

ghz_status ghz_config_set_tier(ghz_config* cfg, const char* tier) {
    if (!cfg || !tier) return set_error(GHZ_ERR_INVALID, "null argument");
    return guarded([&] {
        // route through the parser for the same validation/diagnostics
        const std::string t = tier;
        if (t == "ideal") cfg->cfg.tier = Tier::Ideal_Eq1;
        else if (t == "full") cfg->cfg.tier = Tier::Full_Eq15;
        else if (t == "effective2") cfg->cfg.tier = Tier::Effective_Eq2;
        else if (t == "effective3") cfg->cfg.tier = Tier::Effective_Eq3;
        else if (t == "effective5") cfg->cfg.tier = Tier::Effective_Eq5;
        else if (t == "diagonal") cfg->cfg.tier = Tier::Diagonal_Eq6;
        else return set_error(GHZ_ERR_INVALID, "unknown tier '" + t + "'");
        return GHZ_OK;
    });
}

ghz_status ghz_config_set_protocol(ghz_config* cfg, const char* protocol) {
    if (!cfg || !protocol) return set_error(GHZ_ERR_INVALID, "null argument");
    const std::string p = protocol;
    if (p == "single-shot") cfg->cfg.protocol = ProtocolKind::SingleShot;
    else if (p == "method1") cfg->cfg.protocol = ProtocolKind::Method1;
    else if (p == "method2") cfg->cfg.protocol = ProtocolKind::Method2;
    else return set_error(GHZ_ERR_INVALID, "unknown protocol '" + p + "'");
    return GHZ_OK;
}

ghz_status ghz_config_set_backend(ghz_config* cfg, const char* backend) {
    if (!cfg || !backend) return set_error(GHZ_ERR_INVALID, "null argument");
    const std::string b = backend;
    if (b != "auto" && b != "closed" && b != "lindblad" && b != "trajectories")
        return set_error(GHZ_ERR_INVALID, "unknown backend '" + b + "'");
    cfg->cfg.backend = b;
    return GHZ_OK;
}

ghz_status ghz_config_set_seed(ghz_config* cfg, uint64_t seed) {
    if (!cfg) return set_error(GHZ_ERR_INVALID, "null config");
    cfg->cfg.traj.seed = seed;
    return GHZ_OK;
}

ghz_status ghz_config_set_n_traj(ghz_config* cfg, int n_traj) {
    if (!cfg || n_traj < 1) return set_error(GHZ_ERR_INVALID, "n_traj must be >= 1");
    cfg->cfg.traj.n_traj = n_traj;
    return GHZ_OK;
}

ghz_status ghz_config_set_threads(ghz_config* cfg, int threads) {
    if (!cfg || threads < 0) return set_error(GHZ_ERR_INVALID, "threads must be >= 0");
    cfg->cfg.traj.n_threads = threads;
    return GHZ_OK;
}

ghz_status ghz_config_set_output_dir(ghz_config* cfg, const char* dir) {
    if (!cfg || !dir) return set_error(GHZ_ERR_INVALID, "null argument");
    cfg->cfg.output_dir = dir;
    return GHZ_OK;
}

ghz_status ghz_run_simulate(const ghz_config* cfg, ghz_report* out) {
    if (!cfg || !out) return set_error(GHZ_ERR_INVALID, "null argument");
    return guarded([&] {
        RunConfig run = cfg->cfg;
        FidelityReport rep = run_protocol(run);
        std::memset(out, 0, sizeof *out);
        out->fidelity = rep.fidelity;
        out->std_err = rep.std_err;
        out->trace_err = rep.trace_err;
        out->herm_err = rep.herm_err;
        out->min_eigenvalue = rep.min_eigenvalue;
        out->outcome_probability = rep.outcome_probability;
        out->t_op_s = rep.timing.T;
        const double twopi = 2.0 * std::numbers::pi;
        out->mu_hz = rep.timing.mu / twopi;
        out->mu_A_hz = rep.timing.mu * (run.ratio != 0.0 ? run.ratio : 0.0) / twopi;
        if (run.ratio == 0.0) out->mu_A_hz = run.params.mu_A / twopi;
        out->working_dim = rep.working_dim;
        std::snprintf(out->backend, sizeof out->backend, "%s", rep.backend.c_str());
        return GHZ_OK;
    });
}

ghz_status ghz_run_fig8(const ghz_config* cfg, const char* csv_name) {
    if (!cfg || !csv_name) return set_error(GHZ_ERR_INVALID, "null argument");
    return guarded([&] {
        const std::string path = csv_path(cfg->cfg, csv_name);
        auto records = sweep_fig8(cfg->cfg, &std::cerr);
        emit_csv(records, path);
        write_manifest(cfg->cfg, path, "fig8");
        return GHZ_OK;
    });
}

ghz_status ghz_run_fig9(const ghz_config* cfg, const char* csv_name) {
    if (!cfg || !csv_name) return set_error(GHZ_ERR_INVALID, "null argument");
    return guarded([&] {
        const std::string path = csv_path(cfg->cfg, csv_name);
        auto records = scan_fig9(cfg->cfg, &std::cerr);
        emit_csv(records, path);
        write_manifest(cfg->cfg, path, "fig9");
        return GHZ_OK;
    });
}

ghz_status ghz_run_validate(void) {
    return guarded([&] {
        const int fails = run_validation(std::cout);
        if (fails > 0)
            return set_error(GHZ_ERR_RUNTIME,
                             std::to_string(fails) + " validation check(s) failed");
        return GHZ_OK;
    });
}

} // extern "C"
