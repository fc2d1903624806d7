#include "ghzsim/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ghzsim {

namespace {

using nlohmann::json;
constexpr double TWO_PI = 2.0 * std::numbers::pi;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config: key '" + key + "': " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (k == a) { ok = true; break; }
        if (!ok) fail(path.empty() ? k : path + "." + k, "unknown key");
    }
}

// "180.4 MHz" -> value and suffix
std::pair<double, std::string> split_unit(const json& v, const std::string& key) {
    if (!v.is_string())
        fail(key, "physical quantities must be strings with a unit suffix (e.g. \"1.0 GHz\")");
    std::istringstream is(v.get<std::string>());
    double x;
    std::string unit, extra;
    if (!(is >> x >> unit) || (is >> extra))
        fail(key, "expected \"<number> <unit>\", got \"" + v.get<std::string>() + "\"");
    return {x, unit};
}

// frequency f = omega / 2pi; returns omega in rad/s
double parse_frequency(const json& v, const std::string& key) {
    auto [x, unit] = split_unit(v, key);
    double scale;
    if (unit == "GHz") scale = 1e9;
    else if (unit == "MHz") scale = 1e6;
    else if (unit == "kHz") scale = 1e3;
    else if (unit == "Hz") scale = 1.0;
    else fail(key, "unknown frequency unit '" + unit + "' (use Hz/kHz/MHz/GHz)");
    return TWO_PI * x * scale;
}

double parse_time(const json& v, const std::string& key) {
    auto [x, unit] = split_unit(v, key);
    double scale;
    if (unit == "s") scale = 1.0;
    else if (unit == "ms") scale = 1e-3;
    else if (unit == "us") scale = 1e-6;
    else if (unit == "ns") scale = 1e-9;
    else fail(key, "unknown time unit '" + unit + "' (use s/ms/us/ns)");
    return x * scale;
}

// decay rates are configured as lifetimes; "inf" disables the channel
double parse_inverse_rate(const json& v, const std::string& key) {
    if (v.is_string() && v.get<std::string>() == "inf") return 0.0;
    const double t = parse_time(v, key);
    if (t <= 0.0) fail(key, "lifetime must be positive (or \"inf\")");
    return 1.0 / t;
}

double get_number(const json& obj, const std::string& path, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

void parse_register(const json& j, RunConfig& cfg) {
    check_keys(j, "register", {"cavities", "qubits_per_cavity", "fock_cutoff"});
    auto& p = cfg.params;
    if (j.contains("cavities")) p.n_cavities = j["cavities"].get<int>();
    if (j.contains("qubits_per_cavity"))
        p.qubits_per_cavity = j["qubits_per_cavity"].get<std::vector<int>>();
    if (j.contains("fock_cutoff")) p.fock_cutoff = j["fock_cutoff"].get<int>();
    else p.fock_cutoff = -1;   // resolved after n_bar is known
}

void parse_decoherence(const json& j, SystemParams& p) {
    check_keys(j, "decoherence",
               {"kappa_inv", "gamma_eg_inv", "gamma_eg_prime_inv", "gamma_gprime_g_inv",
                "gamma_e_phi_inv", "gamma_gprime_phi_inv", "coupler"});
    if (j.contains("kappa_inv"))
        p.kappa = {parse_inverse_rate(j["kappa_inv"], "decoherence.kappa_inv")};
    auto rate = [&](const char* key) {
        return j.contains(key) ? parse_inverse_rate(j[key], std::string("decoherence.") + key)
                               : 0.0;
    };
    p.gamma_eg = rate("gamma_eg_inv");
    p.gamma_eg_prime = rate("gamma_eg_prime_inv");
    p.gamma_gprime_g = rate("gamma_gprime_g_inv");
    p.gamma_e_phi = rate("gamma_e_phi_inv");
    p.gamma_gprime_phi = rate("gamma_gprime_phi_inv");
    if (!j.contains("coupler") || (j["coupler"].is_string() && j["coupler"] == "same")) {
        p.gamma_eg_A = p.gamma_eg;
        p.gamma_eg_prime_A = p.gamma_eg_prime;
        p.gamma_gprime_g_A = p.gamma_gprime_g;
        p.gamma_e_phi_A = p.gamma_e_phi;
        p.gamma_gprime_phi_A = p.gamma_gprime_phi;
    } else {
        const json& c = j["coupler"];
        check_keys(c, "decoherence.coupler",
                   {"gamma_eg_inv", "gamma_eg_prime_inv", "gamma_gprime_g_inv",
                    "gamma_e_phi_inv", "gamma_gprime_phi_inv"});
        auto crate = [&](const char* key) {
            return c.contains(key)
                       ? parse_inverse_rate(c[key], std::string("decoherence.coupler.") + key)
                       : 0.0;
        };
        p.gamma_eg_A = crate("gamma_eg_inv");
        p.gamma_eg_prime_A = crate("gamma_eg_prime_inv");
        p.gamma_gprime_g_A = crate("gamma_gprime_g_inv");
        p.gamma_e_phi_A = crate("gamma_e_phi_inv");
        p.gamma_gprime_phi_A = crate("gamma_gprime_phi_inv");
    }
}

Tier parse_tier(const std::string& s) {
    if (s == "ideal") return Tier::Ideal_Eq1;
    if (s == "full") return Tier::Full_Eq15;
    if (s == "effective2") return Tier::Effective_Eq2;
    if (s == "effective3") return Tier::Effective_Eq3;
    if (s == "effective5") return Tier::Effective_Eq5;
    if (s == "diagonal") return Tier::Diagonal_Eq6;
    fail("tier", "unknown tier '" + s +
                     "' (ideal/full/effective2/effective3/effective5/diagonal)");
}

ProtocolKind parse_protocol(const std::string& s) {
    if (s == "single-shot") return ProtocolKind::SingleShot;
    if (s == "method1") return ProtocolKind::Method1;
    if (s == "method2") return ProtocolKind::Method2;
    fail("protocol", "unknown protocol '" + s + "' (single-shot/method1/method2)");
}

void parse_sweep(const json& j, SweepConfig& s) {
    check_keys(j, "sweep",
               {"ratio_min", "ratio_max", "ratio_points", "m_values", "delta_A_min",
                "delta_A_max", "delta_A_step", "scan_negative_detuning", "refine_iters"});
    s.ratio_min = get_number(j, "sweep", "ratio_min", s.ratio_min);
    s.ratio_max = get_number(j, "sweep", "ratio_max", s.ratio_max);
    s.ratio_points = static_cast<int>(get_number(j, "sweep", "ratio_points", s.ratio_points));
    if (j.contains("m_values")) s.m_values = j["m_values"].get<std::vector<int>>();
    if (j.contains("delta_A_min")) s.delta_A_min = parse_frequency(j["delta_A_min"], "sweep.delta_A_min");
    if (j.contains("delta_A_max")) s.delta_A_max = parse_frequency(j["delta_A_max"], "sweep.delta_A_max");
    if (j.contains("delta_A_step")) s.delta_A_step = parse_frequency(j["delta_A_step"], "sweep.delta_A_step");
    if (j.contains("scan_negative_detuning"))
        s.scan_negative_detuning = j["scan_negative_detuning"].get<bool>();
    s.refine_iters = static_cast<int>(get_number(j, "sweep", "refine_iters", s.refine_iters));
}

void parse_fig9(const json& j, Fig9Config& f) {
    check_keys(j, "fig9", {"epsilon_set", "t_over_T", "n_bar", "coupling_spread",
                           "detuning_spread", "draw_seed"});
    if (j.contains("epsilon_set")) f.epsilon_set = j["epsilon_set"].get<std::vector<double>>();
    if (j.contains("t_over_T")) f.t_over_T = j["t_over_T"].get<std::vector<double>>();
    f.n_bar = get_number(j, "fig9", "n_bar", f.n_bar);
    f.coupling_spread = get_number(j, "fig9", "coupling_spread", f.coupling_spread);
    f.detuning_spread = get_number(j, "fig9", "detuning_spread", f.detuning_spread);
    if (j.contains("draw_seed")) f.draw_seed = j["draw_seed"].get<std::uint64_t>();
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    check_keys(j, "",
               {"name", "register", "detunings", "couplings", "timing", "decoherence",
                "initial", "protocol", "tier", "backend", "use_sector", "evolve",
                "trajectories", "idle", "sweep", "fig9", "output_dir"});

    RunConfig cfg;
    cfg.source_json = j.dump(2);
    if (j.contains("name")) cfg.name = j["name"].get<std::string>();
    if (j.contains("register")) parse_register(j["register"], cfg);
    else cfg.params.fock_cutoff = -1;

    if (!j.contains("detunings")) fail("detunings", "required section missing");
    {
        const json& d = j["detunings"];
        check_keys(d, "detunings", {"Delta", "Delta_A", "parasitic_offset"});
        if (!d.contains("Delta") || !d.contains("Delta_A"))
            fail("detunings", "Delta and Delta_A are required");
        cfg.params.delta = parse_frequency(d["Delta"], "detunings.Delta");
        cfg.params.delta_A = parse_frequency(d["Delta_A"], "detunings.Delta_A");
        if (d.contains("parasitic_offset")) {
            const double off = parse_frequency(d["parasitic_offset"], "detunings.parasitic_offset");
            cfg.params.delta_tilde = cfg.params.delta + off;
            cfg.params.delta_tilde_A = cfg.params.delta_A + off;
        }
    }
    if (j.contains("couplings")) {
        const json& c = j["couplings"];
        check_keys(c, "couplings",
                   {"ratio", "mu", "mu_A", "mu_tilde_over_mu", "mu_tilde_A_over_mu_A",
                    "mu_12_over_mu_A"});
        cfg.ratio = get_number(c, "couplings", "ratio", 0.0);
        if (c.contains("mu")) cfg.params.mu = parse_frequency(c["mu"], "couplings.mu");
        if (c.contains("mu_A")) cfg.params.mu_A = parse_frequency(c["mu_A"], "couplings.mu_A");
        if (cfg.ratio != 0.0 && cfg.params.mu != 0.0)
            fail("couplings", "give either 'ratio' or explicit 'mu'/'mu_A', not both");
        cfg.mu_tilde_ratio = get_number(c, "couplings", "mu_tilde_over_mu", 0.0);
        cfg.mu_tilde_A_ratio = get_number(c, "couplings", "mu_tilde_A_over_mu_A", 0.0);
        cfg.mu_12_ratio = get_number(c, "couplings", "mu_12_over_mu_A", 0.0);
    }
    if (j.contains("timing")) {
        check_keys(j["timing"], "timing", {"m"});
        cfg.m = static_cast<int>(get_number(j["timing"], "timing", "m", 0));
    }
    if (j.contains("decoherence")) parse_decoherence(j["decoherence"], cfg.params);
    if (j.contains("initial")) {
        const json& i = j["initial"];
        check_keys(i, "initial", {"n_bar", "epsilon", "alpha_sq"});
        cfg.params.n_bar = get_number(i, "initial", "n_bar", 0.0);
        cfg.params.epsilon = get_number(i, "initial", "epsilon", 0.0);
        const double a2 = get_number(i, "initial", "alpha_sq", 0.5);
        if (a2 < 0.0 || a2 > 1.0) fail("initial.alpha_sq", "must be in [0, 1]");
        cfg.alpha = std::sqrt(a2);
        cfg.beta = std::sqrt(1.0 - a2);
    }
    if (cfg.params.fock_cutoff == -1)
        cfg.params.fock_cutoff = cfg.params.n_bar > 0.0 ? 5 : 4;
    if (j.contains("protocol")) cfg.protocol = parse_protocol(j["protocol"].get<std::string>());
    if (j.contains("tier")) cfg.tier = parse_tier(j["tier"].get<std::string>());
    if (j.contains("backend")) {
        cfg.backend = j["backend"].get<std::string>();
        if (cfg.backend != "auto" && cfg.backend != "closed" && cfg.backend != "lindblad" &&
            cfg.backend != "trajectories")
            fail("backend", "unknown backend '" + cfg.backend + "'");
    }
    if (j.contains("use_sector")) cfg.use_sector = j["use_sector"].get<bool>();
    if (j.contains("evolve")) {
        const json& e = j["evolve"];
        check_keys(e, "evolve", {"rel_tol", "abs_tol", "max_step"});
        cfg.evolve.rtol = get_number(e, "evolve", "rel_tol", cfg.evolve.rtol);
        cfg.evolve.atol = get_number(e, "evolve", "abs_tol", cfg.evolve.atol);
        if (cfg.evolve.rtol <= 0.0 || cfg.evolve.rtol > 1e-2 || cfg.evolve.atol <= 0.0 ||
            cfg.evolve.atol > 1e-2)
            fail("evolve", "tolerances must lie in (0, 1e-2]");
        if (e.contains("max_step")) cfg.evolve.max_step = parse_time(e["max_step"], "evolve.max_step");
    }
    if (j.contains("trajectories")) {
        const json& t = j["trajectories"];
        check_keys(t, "trajectories", {"n_traj", "seed", "threads"});
        cfg.traj.n_traj = static_cast<int>(get_number(t, "trajectories", "n_traj", cfg.traj.n_traj));
        if (cfg.traj.n_traj < 1) fail("trajectories.n_traj", "must be >= 1");
        if (t.contains("seed")) cfg.traj.seed = t["seed"].get<std::uint64_t>();
        cfg.traj.n_threads = static_cast<int>(get_number(t, "trajectories", "threads", 0));
    }
    if (j.contains("idle")) {
        const json& i = j["idle"];
        check_keys(i, "idle", {"include", "t_d"});
        if (i.contains("include")) cfg.idle_decoherence = i["include"].get<bool>();
        if (i.contains("t_d")) cfg.t_d = parse_time(i["t_d"], "idle.t_d");
    }
    if (j.contains("sweep")) parse_sweep(j["sweep"], cfg.sweep);
    if (j.contains("fig9")) parse_fig9(j["fig9"], cfg.fig9);
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();

    cfg.params.validate();   // throws on hard violations
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    if (ss.str().empty()) throw std::invalid_argument("config: '" + path + "' is empty");
    return parse_config_text(ss.str());
}

namespace {

// Shipped reproduction presets. Detuning/timing optima were re-found with the
// shipped optimizer (the published parameter sets quote only mu, mu_A, T);
// sweep windows bracket them. Sweep ranges are narrowed from the full [1, 2]
// ratio interval to keep desk runtimes reasonable; widen via a config file.
// The sweeps hold the timing integer m fixed: the reference
// fidelity-vs-ratio curves are taken at fixed m, and freeing it would let
// the optimizer trade to shorter-T operating points off those curves.
// Fidelity vs ratio oscillates (the single-excitation Rabi returns only
// realign at discrete coupling values), so the grids use a 0.005 step and
// land exactly on the stored operating ratio; coarser grids alias the
// fringes and misplace the peak.
const char* PRESET_N3 = R"JSON({
  "name": "n3",
  "register": {"cavities": 2, "qubits_per_cavity": [1, 1], "fock_cutoff": 4},
  "detunings": {"Delta": "1.0 GHz", "Delta_A": "0.5855 GHz", "parasitic_offset": "1.5 GHz"},
  "couplings": {"ratio": 1.516, "mu_tilde_over_mu": 0.1, "mu_tilde_A_over_mu_A": 0.1, "mu_12_over_mu_A": 0.01},
  "timing": {"m": 12},
  "decoherence": {
    "kappa_inv": "15 us",
    "gamma_eg_inv": "5 us", "gamma_eg_prime_inv": "7.5 us", "gamma_gprime_g_inv": "15 us",
    "gamma_e_phi_inv": "5 us", "gamma_gprime_phi_inv": "7.5 us",
    "coupler": "same"
  },
  "initial": {"n_bar": 0.0, "epsilon": 0.0, "alpha_sq": 0.5},
  "protocol": "single-shot",
  "tier": "full",
  "backend": "auto",
  "sweep": {"ratio_min": 1.416, "ratio_max": 1.616, "ratio_points": 41},
  "fig9": {"epsilon_set": [0.0, 0.05, 0.1], "coupling_spread": 0.01, "detuning_spread": 0.05, "draw_seed": 7},
  "output_dir": "."
})JSON";

const char* PRESET_N5 = R"JSON({
  "name": "n5",
  "register": {"cavities": 2, "qubits_per_cavity": [2, 2], "fock_cutoff": 3},
  "detunings": {"Delta": "1.0 GHz", "Delta_A": "0.6400 GHz", "parasitic_offset": "1.5 GHz"},
  "couplings": {"ratio": 1.641, "mu_tilde_over_mu": 0.1, "mu_tilde_A_over_mu_A": 0.1, "mu_12_over_mu_A": 0.01},
  "timing": {"m": 14},
  "decoherence": {
    "kappa_inv": "15 us",
    "gamma_eg_inv": "5 us", "gamma_eg_prime_inv": "7.5 us", "gamma_gprime_g_inv": "15 us",
    "gamma_e_phi_inv": "5 us", "gamma_gprime_phi_inv": "7.5 us",
    "coupler": "same"
  },
  "initial": {"n_bar": 0.0, "epsilon": 0.0, "alpha_sq": 0.5},
  "protocol": "single-shot",
  "tier": "full",
  "backend": "auto",
  "sweep": {"ratio_min": 1.601, "ratio_max": 1.681, "ratio_points": 17},
  "fig9": {"epsilon_set": [0.0, 0.05, 0.1], "coupling_spread": 0.01, "detuning_spread": 0.05, "draw_seed": 7},
  "output_dir": "."
})JSON";

const char* PRESET_N7 = R"JSON({
  "name": "n7",
  "register": {"cavities": 2, "qubits_per_cavity": [3, 3], "fock_cutoff": 2},
  "detunings": {"Delta": "2.0 GHz", "Delta_A": "1.5620 GHz", "parasitic_offset": "1.5 GHz"},
  "couplings": {"ratio": 1.174, "mu_tilde_over_mu": 0.1, "mu_tilde_A_over_mu_A": 0.1, "mu_12_over_mu_A": 0.01},
  "timing": {"m": 16},
  "decoherence": {
    "kappa_inv": "15 us",
    "gamma_eg_inv": "5 us", "gamma_eg_prime_inv": "7.5 us", "gamma_gprime_g_inv": "15 us",
    "gamma_e_phi_inv": "5 us", "gamma_gprime_phi_inv": "7.5 us",
    "coupler": "same"
  },
  "initial": {"n_bar": 0.0, "epsilon": 0.0, "alpha_sq": 0.5},
  "protocol": "single-shot",
  "tier": "full",
  "backend": "auto",
  "trajectories": {"n_traj": 2000, "seed": 1, "threads": 0},
  "sweep": {"ratio_min": 1.114, "ratio_max": 1.234, "ratio_points": 25},
  "fig9": {"epsilon_set": [0.0, 0.05, 0.1], "coupling_spread": 0.01, "detuning_spread": 0.05, "draw_seed": 7},
  "output_dir": "."
})JSON";

const char* PRESET_N9 = R"JSON({
  "name": "n9",
  "register": {"cavities": 2, "qubits_per_cavity": [4, 4], "fock_cutoff": 2},
  "detunings": {"Delta": "2.0 GHz", "Delta_A": "1.3193 GHz", "parasitic_offset": "1.5 GHz"},
  "couplings": {"ratio": 1.242, "mu_tilde_over_mu": 0.1, "mu_tilde_A_over_mu_A": 0.1, "mu_12_over_mu_A": 0.01},
  "timing": {"m": 18},
  "decoherence": {
    "kappa_inv": "15 us",
    "gamma_eg_inv": "5 us", "gamma_eg_prime_inv": "7.5 us", "gamma_gprime_g_inv": "15 us",
    "gamma_e_phi_inv": "5 us", "gamma_gprime_phi_inv": "7.5 us",
    "coupler": "same"
  },
  "initial": {"n_bar": 0.0, "epsilon": 0.0, "alpha_sq": 0.5},
  "protocol": "single-shot",
  "tier": "full",
  "backend": "auto",
  "trajectories": {"n_traj": 2000, "seed": 1, "threads": 0},
  "sweep": {"ratio_min": 1.182, "ratio_max": 1.302, "ratio_points": 25},
  "fig9": {"epsilon_set": [0.0, 0.05, 0.1], "coupling_spread": 0.01, "detuning_spread": 0.05, "draw_seed": 7},
  "output_dir": "."
})JSON";

} // namespace

std::vector<std::string> preset_names() { return {"n3", "n5", "n7", "n9"}; }

std::string preset_text(const std::string& name) {
    if (name == "n3") return PRESET_N3;
    if (name == "n5") return PRESET_N5;
    if (name == "n7") return PRESET_N7;
    if (name == "n9") return PRESET_N9;
    throw std::invalid_argument("unknown preset '" + name + "' (available: n3, n5, n7, n9)");
}

RunConfig preset_config(const std::string& name) {
    return parse_config_text(preset_text(name));
}

ProtocolTiming resolve_couplings(RunConfig& cfg) {
    auto& p = cfg.params;
    if (cfg.m < 1)
        throw std::invalid_argument("resolve_couplings: timing integer m is unset");
    if (cfg.ratio == 0.0 && (p.mu == 0.0 || p.mu_A == 0.0))
        throw std::invalid_argument(
            "resolve_couplings: give either couplings.ratio or explicit mu and mu_A");
    ProtocolTiming timing;
    if (cfg.ratio != 0.0) {
        // mu follows from (N, m, Delta, Delta_A) alone; mu_A then sets T
        timing = solve_coupling(p.n_cavities, cfg.m, p.delta, p.delta_A, 1.0);
        p.mu = timing.mu;
        p.mu_A = cfg.ratio * p.mu;
    }
    timing = solve_coupling(p.n_cavities, cfg.m, p.delta, p.delta_A, p.mu_A);
    if (cfg.ratio != 0.0) p.mu = timing.mu;
    p.mu_tilde = cfg.mu_tilde_ratio * p.mu;
    p.mu_tilde_A = cfg.mu_tilde_A_ratio * p.mu_A;
    p.mu_12 = cfg.mu_12_ratio * p.mu_A;
    return timing;
}

std::string library_version() { return "0.1.0"; }

} // namespace ghzsim
