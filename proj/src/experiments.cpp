#include "ghzsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "ghzsim/evolve.hpp"
#include "ghzsim/rng.hpp"
#include "ghzsim/sector.hpp"

namespace ghzsim {

namespace {

bool any_decay(const SystemParams& p) {
    double s = p.gamma_eg + p.gamma_eg_prime + p.gamma_gprime_g + p.gamma_e_phi +
               p.gamma_gprime_phi + p.gamma_eg_A + p.gamma_eg_prime_A + p.gamma_gprime_g_A +
               p.gamma_e_phi_A + p.gamma_gprime_phi_A;
    for (double k : p.kappa) s += k;
    return s > 0.0;
}

struct Workspace {
    SystemParams p;                 // finalized parameter set
    ProtocolKind kind;
    cd alpha, beta;
    ProtocolTiming timing;
    std::shared_ptr<const SpaceLayout> lay;
    std::optional<Generator> gen;   // working-space generator
    std::vector<CollapseChannel> collapse;
    std::optional<SectorMap> smap;
    std::string backend;
    DVec target;                    // full-space ideal target (always at t = T)
};

Workspace make_workspace(RunConfig cfg) {
    Workspace w;
    w.timing = resolve_couplings(cfg);
    w.p = cfg.params;
    w.kind = cfg.protocol;
    w.alpha = cfg.alpha;
    w.beta = cfg.beta;
    if (w.kind == ProtocolKind::Method2) {
        // qubit 1_1 sits decoupled from its cavity during step 1
        if (w.p.coupling_scale.empty()) w.p.coupling_scale.assign(w.p.total_qubits(), 1.0);
        w.p.coupling_scale[0] = 0.0;
    }
    w.p.validate();
    w.lay = std::make_shared<const SpaceLayout>(
        SpaceLayout::compose_space(w.p.n_cavities, w.p.qubits_per_cavity, w.p.fock_cutoff));

    Generator full_gen = build_generator({cfg.tier, w.p, w.lay});
    std::vector<CollapseChannel> full_col;
    if (any_decay(w.p)) full_col = build_collapse_set(w.p, w.lay);

    // The exchange Hamiltonians conserve the total excitation number and all
    // collapse operators keep or lower it, so vacuum-cavity runs can be solved
    // exactly inside the one-excitation sector.
    if (cfg.use_sector && w.p.n_bar == 0.0) {
        w.smap.emplace(w.lay, 1);
        std::vector<HamTerm> terms;
        terms.reserve(full_gen.terms().size());
        for (const auto& t : full_gen.terms())
            terms.push_back(HamTerm{w.smap->restrict_op(t.op), w.smap->restrict_op(t.op_dag),
                                    t.omega});
        w.gen.emplace(w.lay, std::move(terms), w.smap->reduced_dim());
        for (const auto& c : full_col)
            w.collapse.push_back(CollapseChannel{w.smap->restrict_op(c.op), c.rate, c.name});
    } else {
        w.gen.emplace(std::move(full_gen));
        w.collapse = std::move(full_col);
    }

    w.backend = cfg.backend;
    if (w.backend == "auto") {
        if (w.collapse.empty())
            w.backend = "closed";
        else
            w.backend = w.gen->dim() <= cfg.evolve.dense_dim_limit ? "lindblad" : "trajectories";
    }
    if (w.backend == "closed" && !w.collapse.empty())
        w.collapse.clear();
    w.target = ideal_target(w.p, w.lay, w.kind, w.alpha, w.beta, false);
    return w;
}

Generator idle_generator(const Workspace& w) {
    return Generator(w.lay, {}, w.gen->dim());
}

// Lift (if sector-reduced), run the method's closing operations, score.
double final_overlap(const Workspace& w, const DVec& psi_working,
                     double* outcome_prob = nullptr) {
    QuantumState st{w.lay, w.smap ? w.smap->lift_vec(psi_working) : psi_working};
    const double pr = finalize_protocol(w.kind, st, LVL_GPRIME);
    if (outcome_prob) *outcome_prob = pr;
    return register_overlap_probability(st, w.target);
}

QuantumState lifted_density(const Workspace& w, DMat rho) {
    return QuantumState{w.lay, w.smap ? w.smap->lift_mat(rho) : std::move(rho)};
}

double decay_rate_at(const std::vector<CollapseChannel>& collapse, const DVec& psi) {
    double g = 0.0;
    for (const auto& c : collapse) g += c.rate * (c.op * psi).squaredNorm();
    return g;
}

void fill_diagnostics(FidelityReport& rep, const QuantumState& st) {
    StateDiagnostics d = diagnose(st);
    rep.trace_err = d.trace_error;
    rep.herm_err = d.hermiticity_error;
    rep.min_eigenvalue = d.min_eigenvalue;
    rep.cavity_photons = d.cavity_photons;
}

} // namespace

FidelityReport run_protocol(const RunConfig& cfg) {
    Workspace w = make_workspace(cfg);
    const double T = w.timing.T * (cfg.t_scale > 0.0 ? cfg.t_scale : 1.0);

    FidelityReport rep;
    rep.timing = w.timing;
    rep.backend = w.backend;
    rep.working_dim = w.gen->dim();

    if (w.backend == "closed") {
        DVec psi0 = build_initial(w.p, w.lay, w.kind, w.alpha, w.beta);
        if (w.smap) psi0 = w.smap->restrict_vec(psi0);
        StepStats st;
        DVec psiT = evolve_closed(*w.gen, std::move(psi0), 0.0, T, cfg.evolve, &st);
        QuantumState state{w.lay, w.smap ? w.smap->lift_vec(psiT) : psiT};
        rep.outcome_probability = finalize_protocol(w.kind, state, LVL_GPRIME);
        rep.fidelity = std::sqrt(register_overlap_probability(state, w.target));
        fill_diagnostics(rep, state);
        rep.trace_err = st.norm_err;
    } else if (w.backend == "lindblad") {
        DMat rho0;
        if (w.p.n_bar > 0.0) {
            rho0 = build_initial_thermal(w.p, w.lay, w.kind, w.alpha, w.beta);
        } else {
            DVec psi0 = build_initial(w.p, w.lay, w.kind, w.alpha, w.beta);
            rho0 = psi0 * psi0.adjoint();
        }
        if (w.smap) rho0 = w.smap->restrict_mat(rho0);
        StepStats st;
        if (cfg.idle_decoherence && cfg.t_d > 0.0)
            rho0 = evolve_lindblad(idle_generator(w), w.collapse, std::move(rho0), 0.0,
                                   cfg.t_d, cfg.evolve, &st);
        rho0 = evolve_lindblad(*w.gen, w.collapse, std::move(rho0), 0.0, T, cfg.evolve, &st);
        if (cfg.idle_decoherence && cfg.t_d > 0.0)
            rho0 = evolve_lindblad(idle_generator(w), w.collapse, std::move(rho0), 0.0,
                                   cfg.t_d, cfg.evolve, &st);
        QuantumState state = lifted_density(w, std::move(rho0));
        rep.outcome_probability = finalize_protocol(w.kind, state, LVL_GPRIME);
        rep.fidelity = std::sqrt(register_overlap_probability(state, w.target));
        fill_diagnostics(rep, state);
    } else if (w.backend == "trajectories") {
        if (cfg.idle_decoherence)
            throw std::invalid_argument(
                "idle decoherence is only modeled on the dense Lindblad backend");
        std::function<DVec(SplitMix64&)> sampler;
        if (w.p.n_bar > 0.0) {
            const auto weights = thermal_weights(w.p.n_bar, w.p.fock_cutoff);
            const SystemParams p = w.p;
            auto lay = w.lay;
            const ProtocolKind kind = w.kind;
            const cd a = w.alpha, b = w.beta;
            sampler = [p, lay, kind, a, b, weights](SplitMix64& rng) {
                std::vector<int> levels(p.n_cavities, 0);
                for (int j = 0; j < p.n_cavities; ++j) {
                    double u = rng.uniform();
                    int n = 0;
                    while (n + 1 < static_cast<int>(weights.size()) && u >= weights[n]) {
                        u -= weights[n];
                        ++n;
                    }
                    levels[j] = n;
                }
                return build_initial(p, lay, kind, a, b, levels);
            };
        } else {
            DVec psi0 = build_initial(w.p, w.lay, w.kind, w.alpha, w.beta);
            if (w.smap) psi0 = w.smap->restrict_vec(psi0);
            sampler = [psi0](SplitMix64&) { return psi0; };
        }
        auto score = [&w](const DVec& psi) { return final_overlap(w, psi); };
        TrajectoryResult res = evolve_trajectories(*w.gen, w.collapse, sampler, score, 0.0,
                                                   T, cfg.evolve, cfg.traj);
        rep.fidelity = std::sqrt(std::max(0.0, res.mean_score));
        rep.std_err = rep.fidelity > 0.0 ? res.std_err / (2.0 * rep.fidelity) : res.std_err;
        if (res.mean_rho.size() > 0) {
            QuantumState state = lifted_density(w, std::move(res.mean_rho));
            fill_diagnostics(rep, state);
        }
    } else {
        throw std::invalid_argument("run_protocol: unknown backend '" + w.backend + "'");
    }
    return rep;
}

OptimizeResult optimize(const std::function<double(int, double)>& objective,
                        const OptimizeOptions& opt) {
    if (opt.m_values.empty()) throw std::invalid_argument("optimize: no m values");
    if (!(opt.delta_A_max > opt.delta_A_min) || opt.delta_A_step <= 0.0)
        throw std::invalid_argument("optimize: bad Delta_A window");
    if (opt.budget < 1) throw std::invalid_argument("optimize: budget < 1");

    OptimizeResult best;
    best.value = -std::numeric_limits<double>::infinity();
    long evals = 0;
    auto eval = [&](int m, double dA) {
        const double v = objective(m, dA);
        ++evals;
        best.trace.push_back({m, dA, v});
        if (v > best.value) {
            best.value = v;
            best.m = m;
            best.delta_A = dA;
        }
    };

    const int n_steps =
        static_cast<int>(std::floor((opt.delta_A_max - opt.delta_A_min) / opt.delta_A_step)) + 1;
    for (int m : opt.m_values) {
        for (int s = 0; s < (opt.scan_negative ? 2 : 1); ++s) {
            const double sign = s == 0 ? 1.0 : -1.0;
            for (int i = 0; i < n_steps; ++i) {
                if (evals >= opt.budget) return best;
                eval(m, sign * (opt.delta_A_min + i * opt.delta_A_step));
            }
        }
    }

    // golden-section refinement on Delta_A around the best grid point
    const double gr = 0.6180339887498949;
    double a = best.delta_A - std::copysign(opt.delta_A_step, best.delta_A);
    double b = best.delta_A + std::copysign(opt.delta_A_step, best.delta_A);
    if (a > b) std::swap(a, b);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    if (evals >= opt.budget) return best;
    double f1 = objective(best.m, x1);
    ++evals;
    best.trace.push_back({best.m, x1, f1});
    if (evals >= opt.budget) return best;
    double f2 = objective(best.m, x2);
    ++evals;
    best.trace.push_back({best.m, x2, f2});
    for (int it = 0; it < opt.refine_iters && evals < opt.budget; ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = objective(best.m, x2);
            best.trace.push_back({best.m, x2, f2});
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = objective(best.m, x1);
            best.trace.push_back({best.m, x1, f1});
        }
        ++evals;
    }
    const double xb = f1 > f2 ? x1 : x2;
    const double fb = std::max(f1, f2);
    if (fb > best.value) {
        best.value = fb;
        best.delta_A = xb;
    }
    return best;
}

namespace {

// Cheap inner-loop objective: closed evolution in the reduced sector times a
// first-order decoherence penalty exp(-Gamma0 T / 2), Gamma0 evaluated on the
// initial state. Ranks (m, Delta_A) candidates; the winner is re-evaluated
// with the real dissipative backend.
double closed_surrogate(const RunConfig& base, double ratio, int m, double delta_A) {
    RunConfig c = base;
    c.ratio = ratio;
    c.m = m;
    c.params.delta_A = delta_A;
    c.backend = "closed";
    try {
        Workspace w = make_workspace(c);
        std::vector<CollapseChannel> col;
        if (any_decay(w.p)) {
            col = build_collapse_set(w.p, w.lay);
            if (w.smap) {
                for (auto& ch : col) ch.op = w.smap->restrict_op(ch.op);
            }
        }
        DVec psi0 = build_initial(w.p, w.lay, w.kind, w.alpha, w.beta);
        if (w.smap) psi0 = w.smap->restrict_vec(psi0);
        const double gamma0 = decay_rate_at(col, psi0);
        DVec psiT = evolve_closed(*w.gen, std::move(psi0), 0.0, w.timing.T, c.evolve);
        const double f = std::sqrt(final_overlap(w, psiT));
        return f * std::exp(-0.5 * gamma0 * w.timing.T);
    } catch (const std::invalid_argument&) {
        return -1.0;   // infeasible timing on this grid point
    }
}

std::uint64_t record_seed(const RunConfig& cfg, const std::string& backend) {
    return backend == "trajectories" ? cfg.traj.seed : 0;
}

} // namespace

std::vector<SweepRecord> sweep_fig8(const RunConfig& base, std::ostream* log) {
    const SweepConfig& s = base.sweep;
    // Without a Delta_A search window the sweep runs "pinned": every ratio
    // point reuses the stored (m, Delta_A) operating point and only re-solves
    // mu and T. That is how the reference fidelity-vs-ratio curves are taken;
    // re-optimizing Delta_A per point flattens the curve and moves its peak.
    const bool pinned = !(s.delta_A_max > s.delta_A_min) || s.delta_A_step <= 0.0;
    if (s.ratio_points < 1)
        throw std::invalid_argument("sweep_fig8: ratio grid is required");
    if (!pinned && s.m_values.empty())
        throw std::invalid_argument("sweep_fig8: Delta_A window given but m_values empty");
    if (pinned && base.m < 1)
        throw std::invalid_argument("sweep_fig8: pinned sweep needs timing.m in the config");
    const int n_total = base.params.total_qubits() + 1;
    std::vector<SweepRecord> out;
    for (int i = 0; i < s.ratio_points; ++i) {
        const double ratio =
            s.ratio_points == 1
                ? s.ratio_min
                : s.ratio_min + i * (s.ratio_max - s.ratio_min) / (s.ratio_points - 1);
        int m_pt = base.m;
        double dA_pt = base.params.delta_A;
        if (!pinned) {
            OptimizeOptions opt;
            opt.m_values = s.m_values;
            opt.delta_A_min = s.delta_A_min;
            opt.delta_A_max = s.delta_A_max;
            opt.delta_A_step = s.delta_A_step;
            opt.scan_negative = s.scan_negative_detuning;
            opt.refine_iters = s.refine_iters;
            OptimizeResult r = optimize(
                [&](int m, double dA) { return closed_surrogate(base, ratio, m, dA); }, opt);
            if (r.value < 0.0) {
                if (log) *log << "ratio " << ratio << ": no feasible timing, skipped\n";
                continue;
            }
            m_pt = r.m;
            dA_pt = r.delta_A;
        }
        RunConfig c = base;
        c.ratio = ratio;
        c.m = m_pt;
        c.params.delta_A = dA_pt;
        FidelityReport rep = run_protocol(c);
        SweepRecord rec;
        rec.n_total = n_total;
        rec.ratio = ratio;
        rec.m = m_pt;
        rec.delta_A_hz = dA_pt / (2.0 * std::numbers::pi);
        rec.t_op_s = rep.timing.T;
        rec.fidelity = rep.fidelity;
        if (rep.backend == "trajectories") rec.std_err = rep.std_err;
        rec.backend = rep.backend;
        rec.seed = record_seed(c, rep.backend);
        out.push_back(rec);
        if (log)
            *log << "ratio " << ratio << ": m=" << m_pt << " Delta_A/2pi="
                 << dA_pt / (2e9 * std::numbers::pi) << " GHz  F=" << rep.fidelity << " ("
                 << rep.backend << ")\n";
    }
    if (out.empty()) throw std::runtime_error("sweep_fig8: every ratio point was infeasible");
    return out;
}

std::vector<SweepRecord> scan_fig9(const RunConfig& base, std::ostream* log) {
    if (base.m < 1 || (base.ratio == 0.0 && base.params.mu_A == 0.0))
        throw std::invalid_argument(
            "scan_fig9: no stored operating point (timing.m and couplings.ratio); run the "
            "ratio sweep first and copy its optimum into the config");
    const Fig9Config& f9 = base.fig9;
    std::vector<double> grid = f9.t_over_T;
    if (grid.empty())
        for (int i = 0; i <= 8; ++i) grid.push_back(0.80 + 0.05 * i);

    // one fixed draw of per-qubit inhomogeneities for the whole scan
    const int nq = base.params.total_qubits();
    std::vector<double> scale(nq, 1.0), offset(nq, 0.0);
    SplitMix64 rng(f9.draw_seed, 0);
    for (int q = 0; q < nq; ++q) scale[q] = 1.0 + f9.coupling_spread * (2.0 * rng.uniform() - 1.0);
    for (int q = 0; q < nq; ++q)
        offset[q] = base.params.delta * f9.detuning_spread * (2.0 * rng.uniform() - 1.0);

    const int n_total = nq + 1;
    std::vector<SweepRecord> out;
    for (double eps : f9.epsilon_set) {
        for (double tf : grid) {
            RunConfig c = base;
            c.params.epsilon = eps;
            c.params.n_bar = f9.n_bar;
            c.params.coupling_scale = scale;
            c.params.detuning_offset = offset;
            c.t_scale = tf;
            FidelityReport rep = run_protocol(c);
            SweepRecord rec;
            rec.n_total = n_total;
            rec.ratio = tf;       // fig9 rows: column 2 holds t/T (see emit_csv docs)
            rec.m = base.m;
            rec.delta_A_hz = base.params.delta_A / (2.0 * std::numbers::pi);
            rec.t_op_s = rep.timing.T * tf;
            rec.fidelity = rep.fidelity;
            if (rep.backend == "trajectories") rec.std_err = rep.std_err;
            rec.backend = rep.backend;
            rec.seed = record_seed(c, rep.backend);
            out.push_back(rec);
            if (log)
                *log << "eps=" << eps << " t/T=" << tf << "  F=" << rep.fidelity << " ("
                     << rep.backend << ")\n";
        }
    }
    return out;
}

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    if (records.empty()) throw std::invalid_argument("emit_csv: no records");
    std::ofstream out(path, std::ios::binary);   // binary: LF endings everywhere
    if (!out) throw std::runtime_error("emit_csv: cannot write '" + path + "'");
    out << "n_total,ratio,m,delta_A_hz,t_op_s,fidelity,std_err,backend,seed\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return std::string(buf);
    };
    for (const auto& r : records) {
        out << r.n_total << ',' << num(r.ratio) << ',' << r.m << ',' << num(r.delta_A_hz)
            << ',' << num(r.t_op_s) << ',' << num(r.fidelity) << ','
            << (r.std_err ? num(*r.std_err) : std::string()) << ',' << r.backend << ','
            << r.seed << '\n';
    }
}

void write_manifest(const RunConfig& cfg, const std::string& csv_path,
                    const std::string& experiment) {
    nlohmann::json m;
    m["experiment"] = experiment;
    m["library_version"] = library_version();
    m["csv"] = csv_path.substr(csv_path.find_last_of('/') + 1);
    m["trajectory_seed"] = cfg.traj.seed;
    m["perturbation_seed"] = cfg.fig9.draw_seed;
    m["config"] = cfg.source_json.empty() ? nlohmann::json::object()
                                          : nlohmann::json::parse(cfg.source_json);
    std::ofstream out(csv_path + ".manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("write_manifest: cannot write manifest");
    out << m.dump(2) << '\n';
}

namespace {

RunConfig bare_config(int n_cavities, std::vector<int> qpc, int cutoff) {
    RunConfig c;
    c.params.n_cavities = n_cavities;
    c.params.qubits_per_cavity = std::move(qpc);
    c.params.fock_cutoff = cutoff;
    return c;
}

} // namespace

int run_validation(std::ostream& log) {
    int failures = 0;
    auto check = [&](const char* name, bool ok, double got, double want) {
        log << (ok ? "  ok   " : "  FAIL ") << name << "  (got " << got << ", want " << want
            << ")\n";
        if (!ok) ++failures;
    };
    const double twopi = 2.0 * std::numbers::pi;

    {   // coupling closed form and timing residuals
        ProtocolTiming t = solve_coupling(2, 10, twopi * 1e9, twopi * 1.5e9, twopi * 0.3e9);
        const double mu_mhz = t.mu / twopi / 1e6;
        check("solve_coupling mu", std::abs(mu_mhz - 219.089023) < 1e-3, mu_mhz, 219.089);
        check("timing residual (coupler phase)", t.coupler_phase_residual < 1e-12,
              t.coupler_phase_residual, 0.0);
        check("timing residual (qubit phase)", t.qubit_phase_residual < 1e-12,
              t.qubit_phase_residual, 0.0);
    }
    {   // effective coupling hand values
        SystemParams p;
        p.delta = twopi * 1e9;
        p.delta_A = twopi * 1.5e9;
        p.mu = twopi * 0.2e9;
        p.mu_A = twopi * 0.3e9;
        EffectiveCouplings ec = lambda_and_delta(p);
        check("lambda hand value", std::abs(ec.lambda / twopi / 1e9 - 0.05) < 1e-12,
              ec.lambda / twopi / 1e9, 0.05);
        check("delta hand value", std::abs(ec.delta / twopi / 1e9 + 0.5) < 1e-12,
              ec.delta / twopi / 1e9, -0.5);
    }
    {   // conditional-phase generator produces the GHZ state exactly
        RunConfig c = bare_config(2, {1, 1}, 2);
        c.params.delta = twopi * 1e9;
        c.params.delta_A = twopi * 0.7e9;
        c.m = 5;
        c.ratio = 1.5;
        c.alpha = 0.6;
        c.beta = 0.8;
        c.tier = Tier::Diagonal_Eq6;
        c.backend = "closed";
        FidelityReport r = run_protocol(c);
        check("diagonal-tier GHZ fidelity", r.fidelity > 1.0 - 1e-6, r.fidelity, 1.0);
    }
    {   // Method 1 measurement algebra on the exact GHZ input
        RunConfig c = bare_config(2, {1, 1}, 2);
        auto lay = std::make_shared<const SpaceLayout>(SpaceLayout::compose_space(2, {1, 1}, 2));
        const cd a = 1.0 / std::sqrt(2.0), b = 1.0 / std::sqrt(2.0);
        DVec ghz = ideal_target(c.params, lay, ProtocolKind::SingleShot, a, b);
        QuantumState st{lay, ghz};
        const double pr = finalize_protocol(ProtocolKind::Method1, st, LVL_GPRIME);
        check("method1 outcome probability", std::abs(pr - 0.5) < 1e-10, pr, 0.5);
        DVec tgt = ideal_target(c.params, lay, ProtocolKind::Method1, a, b, false);
        const double f = fidelity(st, tgt);
        check("method1 post-state", f > 1.0 - 1e-10, f, 1.0);
    }
    {   // Method 2 pulses and swap on the exact step-1 output
        RunConfig c = bare_config(2, {1, 1}, 2);
        c.params.delta = twopi * 1e9;
        c.params.delta_A = twopi * 0.7e9;
        c.m = 5;
        c.ratio = 1.5;
        c.protocol = ProtocolKind::Method2;
        c.tier = Tier::Diagonal_Eq6;
        c.backend = "closed";
        FidelityReport r = run_protocol(c);
        check("method2 fidelity", r.fidelity > 1.0 - 1e-6, r.fidelity, 1.0);
    }
    {   // thermal occupation
        double trunc = 0.0;
        auto w = thermal_weights(0.1, 6, &trunc);
        const double p0 = std::pow(0.1, 0) / 1.1, p1 = 0.1 / (1.1 * 1.1);
        check("thermal p0", std::abs(w[0] * (1.0 - trunc) - p0) < 1e-12, w[0] * (1.0 - trunc), p0);
        check("thermal p1", std::abs(w[1] * (1.0 - trunc) - p1) < 1e-12, w[1] * (1.0 - trunc), p1);
    }
    {   // resonant vacuum Rabi oscillation
        SystemParams p;
        p.n_cavities = 1;
        p.qubits_per_cavity = {1};
        p.fock_cutoff = 2;
        p.mu = twopi * 50e6;
        p.delta = 0.0;
        p.delta_A = twopi * 10e9;   // coupler far detuned and unused
        p.mu_A = 0.0;
        auto lay = std::make_shared<const SpaceLayout>(SpaceLayout::compose_space(1, {1}, 2));
        Generator gen = build_generator({Tier::Ideal_Eq1, p, lay});
        DVec psi0 = DVec::Zero(lay->total_dim());
        // coupler |g'>, qubit |g>, one photon
        std::int64_t idx = LVL_G * lay->stride_at(1) + 1 * lay->stride_at(2);
        psi0[idx] = 1.0;
        const double t = 0.37 / (twopi * 50e6);
        DVec psiT = evolve_closed(gen, psi0, 0.0, t, EvolveConfig{});
        Operator e_op = embed(projector_op(LVL_E, 3), 1, lay);
        const double pe = expectation(e_op, QuantumState{lay, psiT}).real();
        const double want = std::pow(std::sin(p.mu * t), 2);
        check("resonant Rabi sin^2(mu t)", std::abs(pe - want) < 1e-6, pe, want);
    }
    return failures;
}

} // namespace ghzsim
