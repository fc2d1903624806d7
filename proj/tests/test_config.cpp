#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "ghzsim/config.hpp"

using namespace ghzsim;

namespace {
constexpr double TWO_PI = 2.0 * std::numbers::pi;

std::string minimal_config(const std::string& extra = "") {
    return R"({
  "name": "test",
  "register": { "cavities": 2, "qubits_per_cavity": [1, 1], "fock_cutoff": 3 },
  "detunings": { "Delta": "1.0 GHz", "Delta_A": "0.5855 GHz" },
  "couplings": { "ratio": 1.516 },
  "timing": { "m": 12 })" +
           extra + "\n}";
}
} // namespace

TEST_CASE("presets parse and resolve") {
    auto names = preset_names();
    REQUIRE(names == std::vector<std::string>{"n3", "n5", "n7", "n9"});
    for (const auto& n : names) {
        RunConfig cfg = preset_config(n);
        CHECK(cfg.m > 0);
        CHECK(cfg.ratio > 1.0);
        auto timing = resolve_couplings(cfg);
        CHECK(timing.T > 0.0);
        CHECK(cfg.params.mu > 0.0);
        CHECK(cfg.params.mu_A == doctest::Approx(cfg.ratio * cfg.params.mu).epsilon(1e-12));
        CHECK(cfg.params.validate().empty());
    }
    CHECK_THROWS_AS((void)preset_config("n4"), std::invalid_argument);
}

TEST_CASE("n3 preset pins the decoherence rates") {
    RunConfig cfg = preset_config("n3");
    CHECK(cfg.params.n_cavities == 2);
    CHECK(cfg.params.qubits_per_cavity == std::vector<int>{1, 1});
    CHECK(cfg.params.delta == doctest::Approx(TWO_PI * 1e9).epsilon(1e-12));

    // Inverse-rate convention: "5 us" means gamma = 1/(5 us).
    CHECK(cfg.params.gamma_eg == doctest::Approx(1.0 / 5e-6).epsilon(1e-12));
    CHECK(cfg.params.gamma_eg_prime == doctest::Approx(1.0 / 7.5e-6).epsilon(1e-12));
    CHECK(cfg.params.kappa_at(0) == doctest::Approx(1.0 / 15e-6).epsilon(1e-12));
    CHECK(cfg.params.kappa_at(1) == doctest::Approx(1.0 / 15e-6).epsilon(1e-12));
    // Coupler shares the qubit rates.
    CHECK(cfg.params.gamma_eg_A == doctest::Approx(cfg.params.gamma_eg).epsilon(1e-12));
    CHECK(cfg.params.gamma_gprime_g > 0.0);
    CHECK(cfg.params.gamma_e_phi > 0.0);
}

TEST_CASE("unit suffixes are mandatory and converted") {
    RunConfig cfg = parse_config_text(minimal_config());
    CHECK(cfg.params.delta == doctest::Approx(TWO_PI * 1e9).epsilon(1e-12));
    CHECK(cfg.params.delta_A == doctest::Approx(TWO_PI * 0.5855e9).epsilon(1e-12));
    CHECK(cfg.ratio == doctest::Approx(1.516));
    CHECK(cfg.m == 12);
    // Cutoff honored; no decoherence section -> all rates zero.
    CHECK(cfg.params.fock_cutoff == 3);
    CHECK(cfg.params.gamma_eg == 0.0);

    // Missing suffix rejected.
    std::string bad = minimal_config();
    auto pos = bad.find("\"1.0 GHz\"");
    bad.replace(pos, 9, "1.0");
    CHECK_THROWS_AS((void)parse_config_text(bad), std::invalid_argument);

    // MHz scales correctly.
    std::string mhz = minimal_config();
    pos = mhz.find("\"1.0 GHz\"");
    mhz.replace(pos, 9, "\"1000 MHz\"");
    RunConfig cfg2 = parse_config_text(mhz);
    CHECK(cfg2.params.delta == doctest::Approx(cfg.params.delta).epsilon(1e-12));
}

TEST_CASE("unknown keys are rejected with the offending name") {
    std::string txt = minimal_config(R"(, "tpyo_key": 1)");
    try {
        (void)parse_config_text(txt);
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("tpyo_key") != std::string::npos);
    }
    // Nested unknown key too.
    std::string nested =
        minimal_config(R"(, "decoherence": { "kappa_inv": "1 ms", "oops": "15 us" })");
    CHECK_THROWS_AS((void)parse_config_text(nested), std::invalid_argument);
}

TEST_CASE("decoherence section with inf disables a channel") {
    std::string txt = minimal_config(
        R"(, "decoherence": { "kappa_inv": "1 ms", "gamma_eg_inv": "15 us",
            "gamma_eg_prime_inv": "inf", "gamma_gprime_g_inv": "inf",
            "gamma_e_phi_inv": "10 us", "gamma_gprime_phi_inv": "inf",
            "coupler": "same" })");
    RunConfig cfg = parse_config_text(txt);
    CHECK(cfg.params.gamma_eg == doctest::Approx(1.0 / 15e-6));
    CHECK(cfg.params.gamma_eg_prime == 0.0);
    CHECK(cfg.params.gamma_e_phi == doctest::Approx(1.0 / 10e-6));
    CHECK(cfg.params.gamma_eg_A == doctest::Approx(cfg.params.gamma_eg));
}

TEST_CASE("ratio and explicit couplings are mutually exclusive") {
    std::string both = minimal_config();
    auto pos = both.find(R"("ratio": 1.516)");
    both.replace(pos, 14, R"("ratio": 1.516, "mu": "100 MHz", "mu_A": "200 MHz")");
    CHECK_THROWS_AS((void)parse_config_text(both), std::invalid_argument);
}

TEST_CASE("bad values are rejected") {
    // Negative lifetime.
    std::string neg = minimal_config(R"(, "decoherence": { "kappa_inv": "-1 ms" })");
    CHECK_THROWS_AS((void)parse_config_text(neg), std::invalid_argument);
    // Tolerances outside (0, 1e-2].
    std::string tol = minimal_config(R"(, "evolve": { "rel_tol": 0.5 })");
    CHECK_THROWS_AS((void)parse_config_text(tol), std::invalid_argument);
    // Empty file.
    CHECK_THROWS_AS((void)parse_config_text(""), std::invalid_argument);
    // Not JSON.
    CHECK_THROWS_AS((void)parse_config_text("not json"), std::invalid_argument);
}

TEST_CASE("thermal occupancy bumps the default Fock cutoff") {
    std::string txt = R"({
  "name": "t",
  "register": { "cavities": 2, "qubits_per_cavity": [1, 1] },
  "detunings": { "Delta": "1.0 GHz", "Delta_A": "0.5855 GHz" },
  "couplings": { "ratio": 1.516 },
  "timing": { "m": 12 },
  "initial": { "n_bar": 0.1 }
})";
    RunConfig cfg = parse_config_text(txt);
    CHECK(cfg.params.n_bar == doctest::Approx(0.1));
    CHECK(cfg.params.fock_cutoff == 5);   // default 4, +1 with thermal photons

    std::string vac = R"({
  "name": "t",
  "register": { "cavities": 2, "qubits_per_cavity": [1, 1] },
  "detunings": { "Delta": "1.0 GHz", "Delta_A": "0.5855 GHz" },
  "couplings": { "ratio": 1.516 },
  "timing": { "m": 12 }
})";
    CHECK(parse_config_text(vac).params.fock_cutoff == 4);
}

TEST_CASE("parse_config_file round-trips through disk") {
    const std::string path = "test_config_roundtrip.json";
    {
        std::ofstream f(path);
        f << minimal_config();
    }
    RunConfig cfg = parse_config_file(path);
    CHECK(cfg.name == "test");
    CHECK(!cfg.source_json.empty());
    std::remove(path.c_str());
    CHECK_THROWS_AS((void)parse_config_file("does_not_exist.json"), std::invalid_argument);
}

TEST_CASE("resolve_couplings requires m and ratio") {
    RunConfig cfg = parse_config_text(minimal_config());
    cfg.m = 0;
    CHECK_THROWS_AS((void)resolve_couplings(cfg), std::invalid_argument);
}
