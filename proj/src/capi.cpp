#include "flopart/flopart.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "dp.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "io.hpp"
#include "labels.hpp"
#include "oracle.hpp"
#include "sequence.hpp"
#include "synthetic.hpp"

// The C surface owns plain wrappers around the value types so handle
// lifetimes are explicit and the C++ types can keep evolving behind it.
struct flopart_data {
  flopart::CountSequence seq;
};
struct flopart_labels {
  flopart::LabelSet set;
};
struct flopart_result {
  flopart::SegmentationResult res;
};

namespace {

thread_local std::string g_last_error;

flopart_status status_of(flopart::errc code) {
  switch (code) {
    case flopart::errc::invalid_argument: return FLOPART_ERR_INVALID;
    case flopart::errc::validation: return FLOPART_ERR_VALIDATION;
    case flopart::errc::infeasible: return FLOPART_ERR_INFEASIBLE;
    case flopart::errc::io: return FLOPART_ERR_IO;
    case flopart::errc::too_large: return FLOPART_ERR_TOO_LARGE;
    case flopart::errc::internal: return FLOPART_ERR_INTERNAL;
  }
  return FLOPART_ERR_INTERNAL;
}

flopart_status fail(flopart_status s, const char* what) {
  g_last_error = what;
  return s;
}

// Runs the body and funnels every failure into a status code.
template <class F>
flopart_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const flopart::error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FLOPART_ERR_NOMEM;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FLOPART_ERR_INTERNAL;
  }
}

flopart::LabelKind kind_from_int(int32_t v) {
  switch (v) {
    case 0: return flopart::LabelKind::noPeaks;
    case 1: return flopart::LabelKind::peakStart;
    case -1: return flopart::LabelKind::peakEnd;
  }
  flopart::throw_error(flopart::errc::validation, "unknown label kind");
}

}  // namespace

extern "C" {

const char* flopart_last_error(void) { return g_last_error.c_str(); }

flopart_status flopart_data_create(const double* values, const double* weights,
                                   int64_t n, flopart_data** out) {
  if (!out) return fail(FLOPART_ERR_INVALID, "out pointer is null");
  *out = nullptr;
  if (!values || n < 1) return fail(FLOPART_ERR_INVALID, "data length must be >= 1");
  return guarded([&] {
    auto d = std::make_unique<flopart_data>();
    d->seq.z.assign(values, values + n);
    if (weights) d->seq.w.assign(weights, weights + n);
    else d->seq.w.assign(std::size_t(n), 1.0);
    for (std::size_t i = 0; i < d->seq.z.size(); ++i) {
      if (!(d->seq.z[i] >= 0.0))
        flopart::throw_error(flopart::errc::invalid_argument, "negative value");
      if (!(d->seq.w[i] > 0.0))
        flopart::throw_error(flopart::errc::invalid_argument, "non-positive weight");
    }
    *out = d.release();
    return FLOPART_OK;
  });
}

flopart_status flopart_data_read(const char* path, flopart_format format,
                                 flopart_data** out) {
  if (!out) return fail(FLOPART_ERR_INVALID, "out pointer is null");
  *out = nullptr;
  if (!path) return fail(FLOPART_ERR_INVALID, "path is null");
  return guarded([&] {
    auto d = std::make_unique<flopart_data>();
    d->seq = flopart::read_coverage(path, format == FLOPART_FORMAT_BEDGRAPH
                                              ? flopart::CoverageFormat::bedgraph
                                              : flopart::CoverageFormat::counts);
    *out = d.release();
    return FLOPART_OK;
  });
}

void flopart_data_destroy(flopart_data* d) { delete d; }

int64_t flopart_data_length(const flopart_data* d) {
  return d ? int64_t(d->seq.size()) : 0;
}

double flopart_data_total_weight(const flopart_data* d) {
  if (!d) return 0.0;
  double total = 0.0;
  for (double w : d->seq.w) total += w;
  return total;
}

flopart_status flopart_labels_create(const int64_t* lo, const int64_t* hi,
                                     const int32_t* kind, size_t count, int64_t n,
                                     flopart_labels** out) {
  if (!out) return fail(FLOPART_ERR_INVALID, "out pointer is null");
  *out = nullptr;
  if (count > 0 && (!lo || !hi || !kind))
    return fail(FLOPART_ERR_INVALID, "label arrays are null");
  return guarded([&] {
    std::vector<flopart::Label> raw(count);
    for (size_t k = 0; k < count; ++k) {
      raw[k].lo = lo[k];
      raw[k].hi = hi[k];
      raw[k].kind = kind_from_int(kind[k]);
    }
    auto l = std::make_unique<flopart_labels>();
    l->set = flopart::validate(std::move(raw), n);
    *out = l.release();
    return FLOPART_OK;
  });
}

flopart_status flopart_labels_read(const char* path, int index_mode,
                                   const flopart_data* data, flopart_labels** out) {
  if (!out) return fail(FLOPART_ERR_INVALID, "out pointer is null");
  *out = nullptr;
  if (!path) return fail(FLOPART_ERR_INVALID, "path is null");
  if (!data) return fail(FLOPART_ERR_INVALID, "data handle is null");
  return guarded([&] {
    std::vector<flopart::Label> raw;
    if (index_mode) {
      raw = flopart::read_index_labels(path);
    } else {
      raw = flopart::map_genomic_to_indices(flopart::read_genomic_labels(path),
                                            data->seq);
    }
    auto l = std::make_unique<flopart_labels>();
    l->set = flopart::validate(std::move(raw), int64_t(data->seq.size()));
    *out = l.release();
    return FLOPART_OK;
  });
}

void flopart_labels_destroy(flopart_labels* l) { delete l; }

size_t flopart_labels_count(const flopart_labels* l) { return l ? l->set.size() : 0; }

flopart_status flopart_labels_get(const flopart_labels* l, size_t k, int64_t* lo,
                                  int64_t* hi, int32_t* kind) {
  if (!l) return fail(FLOPART_ERR_INVALID, "labels handle is null");
  if (k >= l->set.size()) return fail(FLOPART_ERR_INVALID, "label index out of range");
  const flopart::Label& lab = l->set.labels[k];
  if (lo) *lo = lab.lo;
  if (hi) *hi = lab.hi;
  if (kind) *kind = int32_t(lab.kind);
  return FLOPART_OK;
}

flopart_status flopart_fit(const flopart_data* data, const flopart_labels* labels,
                           double penalty, flopart_result** out) {
  if (!out) return fail(FLOPART_ERR_INVALID, "out pointer is null");
  *out = nullptr;
  if (!data) return fail(FLOPART_ERR_INVALID, "data handle is null");
  return guarded([&] {
    auto r = std::make_unique<flopart_result>();
    if (labels) r->res = flopart::fit(data->seq, labels->set, penalty);
    else r->res = flopart::fit_unlabeled(data->seq, penalty);
    *out = r.release();
    return FLOPART_OK;
  });
}

void flopart_result_destroy(flopart_result* r) { delete r; }

int64_t flopart_result_segment_count(const flopart_result* r) {
  return r ? int64_t(r->res.segments.size()) : 0;
}

flopart_status flopart_result_segment(const flopart_result* r, int64_t k,
                                      int64_t* start, int64_t* end, double* mean,
                                      int32_t* state) {
  if (!r) return fail(FLOPART_ERR_INVALID, "result handle is null");
  if (k < 0 || k >= int64_t(r->res.segments.size()))
    return fail(FLOPART_ERR_INVALID, "segment index out of range");
  const flopart::Segment& s = r->res.segments[std::size_t(k)];
  if (start) *start = s.start;
  if (end) *end = s.end;
  if (mean) *mean = s.mean;
  if (state) *state = s.state;
  return FLOPART_OK;
}

flopart_status flopart_result_states(const flopart_result* r, int8_t* out_states) {
  if (!r) return fail(FLOPART_ERR_INVALID, "result handle is null");
  if (!out_states) return fail(FLOPART_ERR_INVALID, "states buffer is null");
  std::memcpy(out_states, r->res.states.data(), r->res.states.size());
  return FLOPART_OK;
}

int64_t flopart_result_peak_count(const flopart_result* r) {
  return r ? int64_t(r->res.peaks.size()) : 0;
}

flopart_status flopart_result_peak(const flopart_result* r, int64_t k, int64_t* start,
                                   int64_t* end) {
  if (!r) return fail(FLOPART_ERR_INVALID, "result handle is null");
  if (k < 0 || k >= int64_t(r->res.peaks.size()))
    return fail(FLOPART_ERR_INVALID, "peak index out of range");
  if (start) *start = r->res.peaks[std::size_t(k)].start;
  if (end) *end = r->res.peaks[std::size_t(k)].end;
  return FLOPART_OK;
}

double flopart_result_total_loss(const flopart_result* r) {
  return r ? r->res.total_loss : 0.0;
}

double flopart_result_penalized_cost(const flopart_result* r) {
  return r ? r->res.penalized_cost : 0.0;
}

int64_t flopart_result_change_count(const flopart_result* r) {
  return r ? r->res.change_count : 0;
}

flopart_status flopart_result_write(const flopart_result* r, const flopart_data* data,
                                    double penalty, const char* segments_path,
                                    const char* summary_path) {
  if (!r) return fail(FLOPART_ERR_INVALID, "result handle is null");
  if (!data) return fail(FLOPART_ERR_INVALID, "data handle is null");
  if (!segments_path) return fail(FLOPART_ERR_INVALID, "segments path is null");
  return guarded([&] {
    flopart::write_segments(r->res, data->seq, segments_path);
    if (summary_path) flopart::write_summary(r->res, penalty, summary_path);
    return FLOPART_OK;
  });
}

flopart_status flopart_label_errors(const flopart_result* r, const flopart_labels* labels,
                                    int32_t* outcomes, int64_t* false_positives,
                                    int64_t* false_negatives, int64_t* possible_fp,
                                    int64_t* possible_fn) {
  if (!r) return fail(FLOPART_ERR_INVALID, "result handle is null");
  if (!labels) return fail(FLOPART_ERR_INVALID, "labels handle is null");
  return guarded([&] {
    flopart::LabelErrorReport rep = flopart::label_errors(r->res.peaks, labels->set);
    if (outcomes)
      for (std::size_t k = 0; k < rep.outcomes.size(); ++k)
        outcomes[k] = int32_t(rep.outcomes[k]);
    if (false_positives) *false_positives = rep.fp;
    if (false_negatives) *false_negatives = rep.fn;
    if (possible_fp) *possible_fp = rep.possible_fp;
    if (possible_fn) *possible_fn = rep.possible_fn;
    return FLOPART_OK;
  });
}

flopart_status flopart_bic_log_penalty(double total_weight, double* out) {
  if (!out) return fail(FLOPART_ERR_INVALID, "out pointer is null");
  return guarded([&] {
    *out = flopart::bic_log_penalty(total_weight);
    return FLOPART_OK;
  });
}

flopart_status flopart_synth_create(int64_t n, int64_t peak_count,
                                    double background_mean, double peak_mean,
                                    uint64_t seed, flopart_data** out_data,
                                    flopart_labels** out_labels) {
  if (out_data) *out_data = nullptr;
  if (out_labels) *out_labels = nullptr;
  return guarded([&] {
    flopart::SyntheticData s =
        flopart::generate_synthetic(n, peak_count, background_mean, peak_mean, seed);
    if (out_data) {
      auto d = std::make_unique<flopart_data>();
      d->seq = std::move(s.data);
      *out_data = d.release();
    }
    if (out_labels) {
      auto l = std::make_unique<flopart_labels>();
      l->set = std::move(s.labels);
      *out_labels = l.release();
    }
    return FLOPART_OK;
  });
}

flopart_status flopart_oracle_check(int64_t trials, int64_t n_max, uint64_t seed,
                                    const double* penalties, size_t penalty_count,
                                    int64_t* agreed, double* worst_rel_gap,
                                    char* failure_msg, size_t cap) {
  if (penalty_count > 0 && !penalties)
    return fail(FLOPART_ERR_INVALID, "penalties array is null");
  if (failure_msg && cap > 0) failure_msg[0] = '\0';
  return guarded([&] {
    std::vector<double> lambdas(penalties, penalties + penalty_count);
    flopart::OracleCheckReport rep =
        flopart::oracle_check(trials, n_max, seed, lambdas);
    if (agreed) *agreed = rep.agreed;
    if (worst_rel_gap) *worst_rel_gap = rep.worst_rel_gap;
    if (failure_msg && cap > 0) {
      std::size_t len = std::min(cap - 1, rep.first_failure.size());
      std::memcpy(failure_msg, rep.first_failure.data(), len);
      failure_msg[len] = '\0';
    }
    return FLOPART_OK;
  });
}

}  // extern "C"
