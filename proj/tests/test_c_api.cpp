#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "ghzsim/ghzsim.h"

TEST_CASE("version and preset listing") {
    CHECK(ghz_version() != nullptr);
    CHECK(std::string(ghz_version()).find('.') != std::string::npos);

    char buf[256];
    REQUIRE(ghz_preset_list(buf, sizeof buf) == GHZ_OK);
    std::string list(buf);
    CHECK(list.find("n3") != std::string::npos);
    CHECK(list.find("n9") != std::string::npos);

    // Short buffer is an error, not a truncation surprise.
    char tiny[3];
    CHECK(ghz_preset_list(tiny, sizeof tiny) == GHZ_ERR_INVALID);
}

TEST_CASE("config lifecycle and error reporting") {
    ghz_config* cfg = nullptr;
    CHECK(ghz_config_from_preset("does-not-exist", &cfg) == GHZ_ERR_INVALID);
    CHECK(cfg == nullptr);
    CHECK(std::strlen(ghz_last_error()) > 0);

    REQUIRE(ghz_config_from_preset("n3", &cfg) == GHZ_OK);
    REQUIRE(cfg != nullptr);
    CHECK(ghz_config_set_tier(cfg, "bogus") == GHZ_ERR_INVALID);
    CHECK(ghz_config_set_tier(cfg, "diagonal") == GHZ_OK);
    CHECK(ghz_config_set_backend(cfg, "bogus") == GHZ_ERR_INVALID);
    CHECK(ghz_config_set_n_traj(cfg, -3) == GHZ_ERR_INVALID);
    ghz_config_free(cfg);
    ghz_config_free(nullptr);   // must be a no-op

    CHECK(ghz_config_from_file("no_such_file.json", &cfg) == GHZ_ERR_IO);
    CHECK(ghz_config_from_text("{ not json", &cfg) == GHZ_ERR_INVALID);
}

TEST_CASE("simulate smoke test on the diagonal tier") {
    const char* txt = R"({
  "name": "smoke",
  "register": { "cavities": 2, "qubits_per_cavity": [1, 1], "fock_cutoff": 2 },
  "detunings": { "Delta": "1.0 GHz", "Delta_A": "0.5855 GHz" },
  "couplings": { "ratio": 1.516 },
  "timing": { "m": 12 },
  "tier": "diagonal"
})";
    ghz_config* cfg = nullptr;
    REQUIRE(ghz_config_from_text(txt, &cfg) == GHZ_OK);
    ghz_report rep;
    REQUIRE(ghz_run_simulate(cfg, &rep) == GHZ_OK);
    CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.t_op_s > 0.0);
    CHECK(rep.mu_hz > 0.0);
    CHECK(rep.mu_A_hz == doctest::Approx(1.516 * rep.mu_hz).epsilon(1e-9));
    CHECK(std::string(rep.backend) == "closed");
    ghz_config_free(cfg);

    // Null-pointer misuse is reported, not crashed on.
    CHECK(ghz_run_simulate(nullptr, &rep) == GHZ_ERR_INVALID);
}
