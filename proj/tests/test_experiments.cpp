#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ghzsim/experiments.hpp"

using namespace ghzsim;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("optimizer finds the maximum of a smooth objective") {
    // Parabola in delta_A with the peak at 0.57, only for m = 12.
    auto objective = [](int m, double dA) {
        if (m != 12) return 0.1;
        double x = dA - 0.57;
        return 1.0 - 40.0 * x * x;
    };
    OptimizeOptions opt;
    opt.m_values = {11, 12, 13};
    opt.delta_A_min = 0.50;
    opt.delta_A_max = 0.65;
    opt.delta_A_step = 0.01;
    opt.refine_iters = 40;
    auto res = optimize(objective, opt);
    CHECK(res.m == 12);
    CHECK(res.delta_A == doctest::Approx(0.57).epsilon(1e-3));
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(!res.trace.empty());

    // Identical inputs give the identical trace (deterministic optimizer).
    auto res2 = optimize(objective, opt);
    REQUIRE(res.trace.size() == res2.trace.size());
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
        CHECK(res.trace[i].delta_A == res2.trace[i].delta_A);
        CHECK(res.trace[i].value == res2.trace[i].value);
    }
}

TEST_CASE("optimizer scans the negative-detuning branch") {
    auto objective = [](int, double dA) {
        double x = dA + 0.6;   // peak at negative detuning
        return 1.0 - 10.0 * x * x;
    };
    OptimizeOptions opt;
    opt.m_values = {12};
    opt.delta_A_min = 0.50;
    opt.delta_A_max = 0.70;
    opt.delta_A_step = 0.02;
    opt.scan_negative = true;
    opt.refine_iters = 40;
    auto res = optimize(objective, opt);
    CHECK(res.delta_A == doctest::Approx(-0.6).epsilon(1e-3));
}

TEST_CASE("optimizer respects the evaluation budget") {
    long calls = 0;
    auto objective = [&](int, double) {
        ++calls;
        return 1.0;
    };
    OptimizeOptions opt;
    opt.m_values = {12};
    opt.delta_A_min = 0.50;
    opt.delta_A_max = 0.70;
    opt.delta_A_step = 0.001;
    opt.budget = 10;
    (void)optimize(objective, opt);
    CHECK(calls <= 10);
}

TEST_CASE("emit_csv writes the pinned column order, 9 significant digits, LF") {
    std::vector<SweepRecord> recs;
    SweepRecord r;
    r.n_total = 3;
    r.ratio = 1.516;
    r.m = 12;
    r.delta_A_hz = 0.5855e9;
    r.t_op_s = 1.234567891e-7;
    r.fidelity = 0.123456789123;
    r.std_err = 0.001;
    r.backend = "lindblad";
    r.seed = 42;
    recs.push_back(r);
    r.std_err.reset();
    r.backend = "closed";
    recs.push_back(r);

    const std::string path = "emit_csv_test.csv";
    emit_csv(recs, path);
    std::string body = slurp(path);
    CHECK(body.find('\r') == std::string::npos);
    std::istringstream is(body);
    std::string line;
    std::getline(is, line);
    CHECK(line == "n_total,ratio,m,delta_A_hz,t_op_s,fidelity,std_err,backend,seed");
    std::getline(is, line);
    CHECK(line.find("0.123456789") != std::string::npos);   // 9 significant digits
    CHECK(line.find("lindblad") != std::string::npos);
    std::getline(is, line);
    CHECK(line.find(",,closed") != std::string::npos);      // empty std_err column

    // Byte-identical on rewrite.
    std::string again_path = "emit_csv_test2.csv";
    emit_csv(recs, again_path);
    CHECK(slurp(again_path) == body);
    std::remove(path.c_str());
    std::remove(again_path.c_str());
}

TEST_CASE("run_protocol on the diagonal tier hits the closed-form target") {
    RunConfig cfg = preset_config("n3");
    cfg.tier = Tier::Diagonal_Eq6;
    // Strip decoherence so the closed backend is selected.
    cfg.params.kappa.clear();
    cfg.params.gamma_eg = cfg.params.gamma_eg_prime = cfg.params.gamma_gprime_g = 0.0;
    cfg.params.gamma_e_phi = cfg.params.gamma_gprime_phi = 0.0;
    cfg.params.gamma_eg_A = cfg.params.gamma_eg_prime_A = cfg.params.gamma_gprime_g_A = 0.0;
    cfg.params.gamma_e_phi_A = cfg.params.gamma_gprime_phi_A = 0.0;
    auto rep = run_protocol(cfg);
    CHECK(rep.backend == "closed");
    CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.timing.T > 0.0);
}

TEST_CASE("run_protocol full tier with decoherence uses the Lindblad backend") {
    RunConfig cfg = preset_config("n3");
    auto rep = run_protocol(cfg);
    CHECK(rep.backend == "lindblad");
    CHECK(rep.working_dim == 36);   // excitation-restricted register
    CHECK(rep.fidelity > 0.9);
    CHECK(rep.fidelity < 1.0);
    CHECK(rep.trace_err < 1e-7);

    // Deterministic: a second run reproduces the number bit for bit.
    auto rep2 = run_protocol(cfg);
    CHECK(rep.fidelity == rep2.fidelity);
}

TEST_CASE("trajectory backend agrees with the Lindblad backend") {
    RunConfig cfg = preset_config("n3");
    auto dense = run_protocol(cfg);

    cfg.backend = "trajectories";
    cfg.traj.n_traj = 150;
    cfg.traj.seed = 3;
    cfg.traj.n_threads = 1;
    auto mc = run_protocol(cfg);
    CHECK(mc.backend == "trajectories");
    CHECK(mc.std_err > 0.0);
    CHECK(std::abs(mc.fidelity - dense.fidelity) < 4.0 * mc.std_err);
}

TEST_CASE("fig9 scan at t = T with everything switched off reduces to fig8") {
    RunConfig cfg = preset_config("n3");
    cfg.fig9.epsilon_set = {0.0};
    cfg.fig9.t_over_T = {1.0};
    cfg.fig9.n_bar = 0.0;
    cfg.fig9.coupling_spread = 0.0;
    cfg.fig9.detuning_spread = 0.0;
    auto rows = scan_fig9(cfg);
    REQUIRE(rows.size() == 1);
    auto plain = run_protocol(cfg);
    CHECK(rows[0].fidelity == doctest::Approx(plain.fidelity).epsilon(1e-9));
    CHECK(rows[0].ratio == doctest::Approx(1.0));   // t/T column
}

TEST_CASE("manifest is deterministic and embeds the config") {
    RunConfig cfg = preset_config("n3");
    const std::string csv = "manifest_test.csv";
    write_manifest(cfg, csv, "fig8");
    std::string a = slurp(csv + ".manifest.json");
    write_manifest(cfg, csv, "fig8");
    std::string b = slurp(csv + ".manifest.json");
    CHECK(a == b);
    CHECK(a.find("fig8") != std::string::npos);
    CHECK(a.find(library_version()) != std::string::npos);
    std::remove((csv + ".manifest.json").c_str());
}

TEST_CASE("validation suite is green") {
    std::ostringstream log;
    CHECK(run_validation(log) == 0);
}
