#ifndef NOSCHED_H
#define NOSCHED_H

/* C interface to the delay-aware spiking scheduler library. All entry points
 * return a status code; details for the last failure on the calling thread
 * come from nos_last_error(). Out parameters are untouched on failure. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nos_status {
    NOS_OK = 0,
    NOS_EINVAL = 1,    /* bad argument (null handle, unknown name, bad index) */
    NOS_ECONFIG = 2,   /* configuration rejected */
    NOS_EUNSTABLE = 3, /* open loop has no stability margin */
    NOS_ENUMERIC = 4,  /* numeric routine failed to converge */
    NOS_EDIVERGED = 5, /* simulation state blew up */
    NOS_EIO = 6        /* file could not be read or written */
} nos_status;

/* never NULL; empty string when no error was recorded on this thread */
const char* nos_last_error(void);

const char* nos_version(void);

/* ---- configuration ------------------------------------------------- */

typedef struct nos_config nos_config;

/* embedded defaults */
nos_status nos_config_create(nos_config** out);
/* defaults overlaid with a key-value file */
nos_status nos_config_load(const char* path, nos_config** out);
void nos_config_free(nos_config* cfg);

nos_status nos_config_set(nos_config* cfg, const char* key, const char* value);
/* copies the raw value into buf (cap bytes incl. terminator); *needed gets the
 * full length regardless, so cap 0 sizes the buffer */
nos_status nos_config_get(const nos_config* cfg, const char* key, char* buf, size_t cap,
                          size_t* needed);
nos_status nos_config_dump(const nos_config* cfg, char* buf, size_t cap, size_t* needed);
/* 16 hex digits + terminator */
nos_status nos_config_hash(const nos_config* cfg, char* buf, size_t cap);

/* ---- interference graphs ------------------------------------------- */

typedef struct nos_graph nos_graph;

nos_status nos_graph_named(const char* name, double weight, nos_graph** out);
/* whitespace-separated square matrix, '#' comments */
nos_status nos_graph_from_file(const char* path, nos_graph** out);
void nos_graph_free(nos_graph* g);

nos_status nos_graph_nodes(const nos_graph* g, int* out);
nos_status nos_graph_edges(const nos_graph* g, int* out);
nos_status nos_graph_weight(const nos_graph* g, int i, int j, double* out);
nos_status nos_graph_spectral_radius(const nos_graph* g, double* out);

/* ---- stability ------------------------------------------------------ */

typedef struct nos_margin_row {
    double k_star;      /* delay-aware threshold at delta_ms */
    double coupling;    /* g * H * rho(W) */
    double margin;      /* k_star - coupling */
    double omega0;      /* zero-delay crossing frequency */
    double rho;
    double h_max;       /* integration step bound at this loop gain */
    int degenerate;     /* exact scan found no finite crossing / flat correction */
} nos_margin_row;

/* local-loop parameters and the gain come from the study section of cfg
 * (study.coupling "auto" reports the uncoupled margin); use_exact switches the
 * threshold from the delay envelope to the characteristic-equation crossing */
nos_status nos_stability_margin(const nos_config* cfg, const char* topology, double delta_ms,
                                int use_exact, nos_margin_row* out);

/* ---- deterministic study ------------------------------------------- */

typedef struct nos_calibration {
    double g;
    int floored; /* parity had no root in the bracket; nearest match returned */
    int iters;
} nos_calibration;

nos_status nos_study_calibrate(const nos_config* cfg, nos_calibration* out);

/* runs the calibrated sweep and writes auc.csv, maxq.csv, p999.csv,
 * tails_line4.csv, summary.csv into out_dir; reports the calibration used */
nos_status nos_study_run(const nos_config* cfg, const char* out_dir, nos_calibration* out);

/* ---- simulation ------------------------------------------------------ */

typedef struct nos_sim_summary {
    double mean_queue;
    double p999_delay_slots;
    double max_queue;
    double util;
    double trend_slope;
    double virtual_delay_slots;
    int64_t warn_count;
    int delta_ms;
} nos_sim_summary;

nos_status nos_sim_run(const nos_config* cfg, const char* scheduler, uint64_t seed,
                       nos_sim_summary* out);

/* every configured scheduler x seed; writes sim_metrics.csv into out_dir;
 * *n_rows (optional) gets the row count */
nos_status nos_sim_run_all(const nos_config* cfg, const char* out_dir, int n_threads,
                           int* n_rows);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NOSCHED_H */
