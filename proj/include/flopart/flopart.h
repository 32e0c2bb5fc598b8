#ifndef FLOPART_H
#define FLOPART_H

/* Constrained peak detection in weighted count sequences.
 *
 * Every fallible call returns a flopart_status; on failure,
 * flopart_last_error() carries a message for the calling thread. Handles
 * are opaque and owned by the caller via the matching _destroy call.
 * Handles are immutable after creation and safe to share across threads;
 * per-call output buffers are not synchronized.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum flopart_status {
  FLOPART_OK = 0,
  FLOPART_ERR_INVALID = 1,    /* bad argument or numeric input */
  FLOPART_ERR_VALIDATION = 2, /* label or file content rejected */
  FLOPART_ERR_INFEASIBLE = 3, /* labels rule out every model */
  FLOPART_ERR_IO = 4,         /* file access failed */
  FLOPART_ERR_TOO_LARGE = 5,  /* instance over a hard size limit */
  FLOPART_ERR_NOMEM = 6,      /* allocation failed */
  FLOPART_ERR_INTERNAL = 7    /* broken internal invariant */
} flopart_status;

typedef enum flopart_label_kind {
  FLOPART_NO_PEAKS = 0,
  FLOPART_PEAK_START = 1,
  FLOPART_PEAK_END = -1
} flopart_label_kind;

typedef enum flopart_outcome {
  FLOPART_CORRECT = 0,
  FLOPART_FALSE_POSITIVE = 1,
  FLOPART_FALSE_NEGATIVE = 2
} flopart_outcome;

typedef enum flopart_format {
  FLOPART_FORMAT_BEDGRAPH = 0, /* chrom start end count, weight = width */
  FLOPART_FORMAT_COUNTS = 1    /* one value per line, unit weights */
} flopart_format;

/* Message of the most recent failure on this thread, "" when none. The
 * pointer stays valid until the next failing call on the same thread. */
const char* flopart_last_error(void);

typedef struct flopart_data flopart_data;
typedef struct flopart_labels flopart_labels;
typedef struct flopart_result flopart_result;

/* ---- data sequences ---- */

/* values[i] >= 0; weights may be NULL for all-ones, else weights[i] > 0. */
flopart_status flopart_data_create(const double* values, const double* weights,
                                   int64_t n, flopart_data** out);
flopart_status flopart_data_read(const char* path, flopart_format format,
                                 flopart_data** out);
void flopart_data_destroy(flopart_data* d);
int64_t flopart_data_length(const flopart_data* d);
double flopart_data_total_weight(const flopart_data* d);

/* ---- labels ---- */

/* lo/hi are 1-based inclusive index bounds; kind entries are
 * flopart_label_kind values. count may be 0 (labels handle with no
 * labels). Validates range, width, and separation against length n. */
flopart_status flopart_labels_create(const int64_t* lo, const int64_t* hi,
                                     const int32_t* kind, size_t count, int64_t n,
                                     flopart_labels** out);
/* Label file with header. index_mode nonzero: columns `lo hi type`;
 * otherwise `chrom start end type` mapped onto the data coordinates. */
flopart_status flopart_labels_read(const char* path, int index_mode,
                                   const flopart_data* data, flopart_labels** out);
void flopart_labels_destroy(flopart_labels* l);
size_t flopart_labels_count(const flopart_labels* l);
flopart_status flopart_labels_get(const flopart_labels* l, size_t k, int64_t* lo,
                                  int64_t* hi, int32_t* kind);

/* ---- fitting ---- */

/* Optimal constrained segmentation at the given penalty (>= 0). labels may
 * be NULL for the unconstrained up-down model. */
flopart_status flopart_fit(const flopart_data* data, const flopart_labels* labels,
                           double penalty, flopart_result** out);

void flopart_result_destroy(flopart_result* r);
int64_t flopart_result_segment_count(const flopart_result* r);
flopart_status flopart_result_segment(const flopart_result* r, int64_t k,
                                      int64_t* start, int64_t* end, double* mean,
                                      int32_t* state);
/* states: one entry per data point, 0 background / 1 peak; buffer of the
 * data length. */
flopart_status flopart_result_states(const flopart_result* r, int8_t* out_states);
int64_t flopart_result_peak_count(const flopart_result* r);
flopart_status flopart_result_peak(const flopart_result* r, int64_t k,
                                   int64_t* start, int64_t* end);
double flopart_result_total_loss(const flopart_result* r);
double flopart_result_penalized_cost(const flopart_result* r);
int64_t flopart_result_change_count(const flopart_result* r);

/* Segment table to `segments_path` (TSV `chrom segStart segEnd mean state`)
 * and, when summary_path is non-NULL, fit metrics beside it. */
flopart_status flopart_result_write(const flopart_result* r, const flopart_data* data,
                                    double penalty, const char* segments_path,
                                    const char* summary_path);

/* ---- scoring ---- */

/* Scores the fitted peaks against the labels. outcomes may be NULL or a
 * buffer with one flopart_outcome per label. Any count pointer may be
 * NULL. */
flopart_status flopart_label_errors(const flopart_result* r, const flopart_labels* labels,
                                    int32_t* outcomes, int64_t* false_positives,
                                    int64_t* false_negatives, int64_t* possible_fp,
                                    int64_t* possible_fn);

/* log log N, the BIC log penalty for total data weight N >= 2. */
flopart_status flopart_bic_log_penalty(double total_weight, double* out);

/* ---- synthetic data ---- */

/* Poisson counts with planted peaks and matching labels, byte-identical
 * under a seed. Either out pointer may be NULL to skip that handle. */
flopart_status flopart_synth_create(int64_t n, int64_t peak_count,
                                    double background_mean, double peak_mean,
                                    uint64_t seed, flopart_data** out_data,
                                    flopart_labels** out_labels);

/* ---- verification ---- */

/* Seeded agreement trials of the engine against the exhaustive reference
 * solver (instances of length <= n_max <= 12, each fitted at every given
 * penalty). agreed == trials means full agreement; otherwise failure_msg
 * (when given, cap bytes) receives a description of the first failing
 * trial. */
flopart_status flopart_oracle_check(int64_t trials, int64_t n_max, uint64_t seed,
                                    const double* penalties, size_t penalty_count,
                                    int64_t* agreed, double* worst_rel_gap,
                                    char* failure_msg, size_t cap);

#ifdef __cplusplus
}
#endif

#endif
