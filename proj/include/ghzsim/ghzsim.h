/* C interface to the GHZ-preparation simulator. All entry points return a
 * ghz_status; on failure ghz_last_error() carries a human-readable message
 * (thread-local). Configs are opaque handles owned by the caller. */
#ifndef GHZSIM_H
#define GHZSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ghz_config ghz_config;

typedef enum {
    GHZ_OK = 0,
    GHZ_ERR_INVALID = 1,   /* bad arguments / config */
    GHZ_ERR_RUNTIME = 2,   /* numerical or internal failure */
    GHZ_ERR_IO = 3         /* file could not be read or written */
} ghz_status;

const char* ghz_version(void);
const char* ghz_last_error(void);

/* comma-separated preset names; returns GHZ_ERR_INVALID if buf is too small */
ghz_status ghz_preset_list(char* buf, size_t buflen);

ghz_status ghz_config_from_file(const char* path, ghz_config** out);
ghz_status ghz_config_from_text(const char* json_text, ghz_config** out);
ghz_status ghz_config_from_preset(const char* name, ghz_config** out);
void ghz_config_free(ghz_config* cfg);

/* common overrides applied after loading */
ghz_status ghz_config_set_tier(ghz_config* cfg, const char* tier);
ghz_status ghz_config_set_protocol(ghz_config* cfg, const char* protocol);
ghz_status ghz_config_set_backend(ghz_config* cfg, const char* backend);
ghz_status ghz_config_set_seed(ghz_config* cfg, uint64_t seed);
ghz_status ghz_config_set_n_traj(ghz_config* cfg, int n_traj);
ghz_status ghz_config_set_threads(ghz_config* cfg, int threads);
ghz_status ghz_config_set_output_dir(ghz_config* cfg, const char* dir);

typedef struct {
    double fidelity;
    double std_err;              /* > 0 only for the trajectory backend */
    double trace_err;
    double herm_err;
    double min_eigenvalue;
    double outcome_probability;  /* Method 1 projection probability */
    double t_op_s;               /* solved operation time */
    double mu_hz;                /* solved couplings, as f = omega/2pi */
    double mu_A_hz;
    long long working_dim;
    char backend[16];
} ghz_report;

ghz_status ghz_run_simulate(const ghz_config* cfg, ghz_report* out);

/* write CSV + .manifest.json into the config's output_dir; csv_name is the
 * bare file name */
ghz_status ghz_run_fig8(const ghz_config* cfg, const char* csv_name);
ghz_status ghz_run_fig9(const ghz_config* cfg, const char* csv_name);

/* fast invariant suite; prints one line per check to stdout.
 * GHZ_OK if everything passed. */
ghz_status ghz_run_validate(void);

#ifdef __cplusplus
}
#endif

#endif /* GHZSIM_H */
