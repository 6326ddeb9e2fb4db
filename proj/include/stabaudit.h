/*
 * stabaudit: C API for the black-box stability auditing toolkit.
 *
 * The library computes rank-order stability, locational stability, and total
 * variation for paired control/treatment score runs, applies multiple-
 * hypothesis corrections, and renders reports and plots. This header is the
 * stable ABI surface: opaque handles plus integer status codes. All strings
 * are UTF-8 and NUL-terminated.
 *
 * Status codes double as process exit codes: 0 success, 2 configuration
 * error, 3 data error, 4 internal error.
 */
#ifndef STABAUDIT_H
#define STABAUDIT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sa_status {
  SA_OK = 0,
  SA_ERROR_CONFIG = 2,
  SA_ERROR_DATA = 3,
  SA_ERROR_INTERNAL = 4
} sa_status;

/* A loaded audit configuration (schema, facet files, thresholds). */
typedef struct sa_audit sa_audit;
/* A computed or re-loaded audit report bundle. */
typedef struct sa_report sa_report;

const char* sa_version(void);

/* Message for the most recent failing call on this thread. Never NULL. */
const char* sa_last_error(void);

/* Parses and validates a JSON audit config; relative paths resolve against
 * the config file's directory. */
sa_status sa_audit_open(const char* config_path, sa_audit** out);

/* Configured output directory of a loaded audit. Owned by the handle. */
const char* sa_audit_output_dir(const sa_audit* audit);

/* Ingests the configured runs and computes the full report in memory.
 * Nothing is written to disk. */
sa_status sa_audit_run(sa_audit* audit, sa_report** out);

void sa_audit_close(sa_audit* audit);

/* Generates a synthetic ground-truth scenario (stable, file_format_unstable,
 * discontinuous, linked, drifting, baseline): writes the generated input
 * data and config under out_dir and computes the audit report over them. */
sa_status sa_demo_run(const char* scenario, uint64_t seed, const char* out_dir, sa_report** out);

/* Writes every artifact of the bundle (report.json, summary.csv, plots/)
 * under out_dir. All bytes are prepared before the first write; on failure
 * the partial files are removed and out_dir/error.json is left instead. */
sa_status sa_report_write(const sa_report* report, const char* out_dir);

/* Loads a machine report written earlier (report.json). */
sa_status sa_report_open(const char* report_json_path, sa_report** out);

/* Renders the verdict grid: format is "csv" or "text". On success *out_text
 * is heap-allocated; release it with sa_string_free. */
sa_status sa_report_render(const sa_report* report, const char* format, char** out_text);

/* Serialized machine report (JSON). Owned by the handle. */
const char* sa_report_json(const sa_report* report);

void sa_report_close(sa_report* report);
void sa_string_free(char* text);

/* Writes out_dir/error.json describing the most recent failure on this
 * thread. Used by callers honoring the no-partial-reports contract. */
sa_status sa_error_manifest_write(const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* STABAUDIT_H */
