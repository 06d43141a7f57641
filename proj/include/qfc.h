/* C interface for the feedback-cooling simulation library. All entry points
 * return QFC_OK or an error code; when errbuf is non-NULL a human-readable
 * message is copied into it on failure. */
#ifndef QFC_H
#define QFC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define QFC_OK 0
#define QFC_ERR_FAIL 1        /* internal failure */
#define QFC_ERR_CONFIG 2      /* bad configuration or problem file */
#define QFC_ERR_INTEGRATION 3 /* propagation failed or too many aborts */
#define QFC_ERR_USAGE 4       /* bad arguments to the call itself */

typedef struct qfc_config qfc_config;

const char* qfc_version(void);

/* Reference configuration; never fails. */
qfc_config* qfc_config_default(void);
/* Parse a key = value file into a fresh configuration. */
int qfc_config_load(const char* path, qfc_config** out, char* errbuf,
                    size_t errlen);
void qfc_config_free(qfc_config* cfg);

int qfc_config_set_seed(qfc_config* cfg, uint64_t seed);
int qfc_config_set_n_traj(qfc_config* cfg, int n_traj);
/* threads <= 0 selects the hardware concurrency. */
int qfc_config_set_threads(qfc_config* cfg, int threads);
int qfc_config_set_out_dir(qfc_config* cfg, const char* out_dir);
int qfc_config_set_write_trajectories(qfc_config* cfg, int enable);

/* Closed-loop ensemble; writes stats.csv and run.json (and per-trajectory
 * files when enabled) into the configured output directory. */
int qfc_simulate(const qfc_config* cfg, char* errbuf, size_t errlen);

/* Single closed-loop trajectory; writes trajectory.csv and run.json. */
int qfc_trajectory(const qfc_config* cfg, char* errbuf, size_t errlen);

/* Fast self-consistency battery; prints one PASS/FAIL line per check to
 * stdout and stores the failure count. Returns QFC_OK when the battery ran,
 * whatever the counts say. */
int qfc_check(const qfc_config* cfg, int* n_failed, char* errbuf,
              size_t errlen);

/* Finite-horizon measurement-strategy optimization; prints the optimal cost
 * and writes strategy.json into out_dir (out_dir may be NULL or empty to
 * skip the file). */
int qfc_bellman(const char* problem_path, const char* out_dir, char* errbuf,
                size_t errlen);

/* Ensemble per (k, Gamma) cell; writes sweep.csv into the configured output
 * directory. */
int qfc_sweep(const qfc_config* cfg, char* errbuf, size_t errlen);

#ifdef __cplusplus
}
#endif

#endif /* QFC_H */
