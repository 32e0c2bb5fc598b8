#include "dp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "error.hpp"

namespace flopart {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(const CountSequence& data, double lambda) {
  if (data.size() == 0) throw_error(errc::validation, "data length must be >= 1");
  if (data.w.size() != data.z.size()) {
    throw_error(errc::validation, "weights and values differ in length");
  }
  if (!(lambda >= 0.0)) throw_error(errc::validation, "penalty must be >= 0");
  char buf[96];
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (!(data.z[k] >= 0.0)) {
      std::snprintf(buf, sizeof buf, "negative value at index %zu", k + 1);
      throw_error(errc::validation, buf);
    }
    if (!(data.w[k] > 0.0)) {
      std::snprintf(buf, sizeof buf, "non-positive weight at index %zu", k + 1);
      throw_error(errc::validation, buf);
    }
  }
}

}  // namespace

double poisson_loss(double z, double w, double mu) {
  if (z == 0.0) return w * mu;
  if (mu <= 0.0) return kInf;
  return w * (mu - z * std::log(mu));
}

std::vector<Peak> peaks_from_states(const std::vector<std::int8_t>& states) {
  std::vector<Peak> peaks;
  std::int64_t n = std::int64_t(states.size());
  for (std::int64_t i = 0; i < n;) {
    if (states[i] != 1) { ++i; continue; }
    std::int64_t j = i;
    while (j < n && states[j] == 1) ++j;
    peaks.push_back({i + 1, j});
    i = j;
  }
  return peaks;
}

RuleKind get_rule(std::int8_t s, const LabelQuery& q) {
  if (q.pos == LabelPos::unlabeled) return RuleKind::unlabeled;
  switch (q.kind) {
    case LabelKind::noPeaks:
      return s == 1 ? RuleKind::forbidden : RuleKind::unlabeled;
    case LabelKind::peakStart:
      // the region starts down and ends up, with its one change being up
      if (s == 0) {
        if (q.pos == LabelPos::first) return RuleKind::unlabeled;
        if (q.pos == LabelPos::last) return RuleKind::forbidden;
        return RuleKind::stay_only;
      }
      return q.pos == LabelPos::first ? RuleKind::forbidden : RuleKind::unlabeled;
    case LabelKind::peakEnd:
      // mirror: starts up, ends down
      if (s == 1) {
        if (q.pos == LabelPos::first) return RuleKind::unlabeled;
        if (q.pos == LabelPos::last) return RuleKind::forbidden;
        return RuleKind::stay_only;
      }
      return q.pos == LabelPos::first ? RuleKind::forbidden : RuleKind::unlabeled;
  }
  return RuleKind::unlabeled;
}

bool init_state_allowed(std::int8_t s, const LabelQuery& q) {
  if (q.pos == LabelPos::unlabeled) return true;
  switch (q.kind) {
    case LabelKind::noPeaks: return s == 0;
    case LabelKind::peakStart: return q.pos == LabelPos::first ? s == 0 : true;
    case LabelKind::peakEnd: return q.pos == LabelPos::first ? s == 1 : true;
  }
  return true;
}

void init_costs(double z1, double w1, const LabelQuery& q, double dom_lo,
                double dom_hi, CostFunction& c0, CostFunction& c1) {
  CostFunction loss = add_loss(CostFunction::constant(0.0, dom_lo, dom_hi), z1, w1);
  c0 = init_state_allowed(0, q) ? loss : CostFunction::infinity(dom_lo, dom_hi);
  c1 = init_state_allowed(1, q) ? std::move(loss) : CostFunction::infinity(dom_lo, dom_hi);
}

CostFunction apply_rule(RuleKind rule, std::int8_t s, const CostFunction& c0_prev,
                        const CostFunction& c1_prev, double z, double w,
                        double lambda, std::int64_t i) {
  const CostFunction& stay = s == 0 ? c0_prev : c1_prev;
  switch (rule) {
    case RuleKind::forbidden:
      return CostFunction::infinity(stay.domain_lo, stay.domain_hi);
    case RuleKind::stay_only:
      if (stay.is_infinite()) return stay;
      return add_loss(stay, z, w);
    case RuleKind::unlabeled:
      break;
  }
  // Change term: a down change comes from a peak with a larger-or-equal
  // mean, an up change from background with a smaller-or-equal mean.
  CostFunction change = s == 0 ? min_more(c1_prev) : min_less(c0_prev);
  for (PoissonPiece& p : change.pieces) {
    p.prev_end = std::int32_t(i - 1);
    p.prev_state = std::int8_t(1 - s);
    p.const_coef += lambda;
  }
  CostFunction merged = pointwise_min(stay, change);  // ties keep the stay branch
  if (merged.is_infinite()) return merged;
  return add_loss(merged, z, w);
}

namespace {

// All-equal data (which includes length-1 data) collapses the mean domain to
// a point, so the piecewise machinery does not apply: every feasible model
// has all segment means equal to the shared value and the same total loss,
// and only the number of changes separates candidates. A change-counting
// pass over (index, state) with the same rule table finds the optimum.
SegmentationResult fit_degenerate(const CountSequence& data, const LabelSet* labels,
                                  double lambda) {
  const std::int64_t n = std::int64_t(data.size());
  const double v = data.z[0];
  constexpr std::int64_t big = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> d0(n), d1(n);
  std::vector<std::int8_t> p0(n), p1(n);  // state the optimal edge came from

  LabelSet none;
  none.n = n;
  LabelCursor cur(labels ? *labels : none);
  LabelQuery q = cur.get_label(1);
  d0[0] = init_state_allowed(0, q) ? 0 : big;
  d1[0] = init_state_allowed(1, q) ? 0 : big;
  p0[0] = p1[0] = kNoPrevState;
  for (std::int64_t i = 2; i <= n; ++i) {
    q = cur.get_label(i);
    for (std::int8_t s = 0; s <= 1; ++s) {
      std::int64_t& d = s == 0 ? d0[i - 1] : d1[i - 1];
      std::int8_t& par = s == 0 ? p0[i - 1] : p1[i - 1];
      std::int64_t stay = s == 0 ? d0[i - 2] : d1[i - 2];
      std::int64_t change = (s == 0 ? d1[i - 2] : d0[i - 2]) + 1;
      switch (get_rule(s, q)) {
        case RuleKind::forbidden: d = big; par = kNoPrevState; break;
        case RuleKind::stay_only: d = stay; par = s; break;
        case RuleKind::unlabeled:
          if (stay <= change) { d = stay; par = s; }
          else { d = change; par = std::int8_t(1 - s); }
          break;
      }
    }
  }
  if (d0[n - 1] >= big && d1[n - 1] >= big) {
    throw_error(errc::infeasible, "infeasible label configuration");
  }
  SegmentationResult r;
  r.states.resize(n);
  std::int8_t s = d0[n - 1] <= d1[n - 1] ? 0 : 1;
  for (std::int64_t i = n; i >= 1; --i) {
    r.states[i - 1] = s;
    s = s == 0 ? p0[i - 1] : p1[i - 1];
  }
  for (std::int64_t i = 0; i < n;) {
    std::int64_t j = i;
    while (j < n && r.states[j] == r.states[i]) ++j;
    r.segments.push_back({i + 1, j, v, r.states[i]});
    i = j;
  }
  r.changes.resize(n > 0 ? n - 1 : 0);
  for (std::int64_t i = 0; i + 1 < n; ++i) {
    r.changes[i] = std::int8_t(r.states[i + 1] - r.states[i]);
    if (r.changes[i] != 0) ++r.change_count;
  }
  r.peaks = peaks_from_states(r.states);
  for (std::int64_t i = 0; i < n; ++i) r.total_loss += poisson_loss(data.z[i], data.w[i], v);
  r.penalized_cost = r.total_loss + lambda * double(r.change_count);
  r.max_column_pieces = 1;
  return r;
}

SegmentationResult fit_impl(const CountSequence& data, const LabelSet* labels,
                            double lambda) {
  check_inputs(data, lambda);
  const std::int64_t n = std::int64_t(data.size());
  if (labels && labels->n != n) {
    throw_error(errc::validation, "label set was validated for a different length");
  }
  double zmin = data.z[0], zmax = data.z[0];
  for (double z : data.z) { zmin = std::min(zmin, z); zmax = std::max(zmax, z); }
  if (zmin == zmax) return fit_degenerate(data, labels, lambda);

  // Fill the 2 x n matrix of cost functions. Every column is kept: decode
  // walks the backtrace annotations through earlier columns.
  std::vector<CostFunction> col0(n), col1(n);
  LabelSet none;
  none.n = n;
  LabelCursor cur(labels ? *labels : none);
  LabelQuery q = cur.get_label(1);
  init_costs(data.z[0], data.w[0], q, zmin, zmax, col0[0], col1[0]);
  std::int64_t max_pieces = 1;
  for (std::int64_t i = 2; i <= n; ++i) {
    q = cur.get_label(i);
    const CostFunction& c0p = col0[i - 2];
    const CostFunction& c1p = col1[i - 2];
    col0[i - 1] = apply_rule(get_rule(0, q), 0, c0p, c1p, data.z[i - 1],
                             data.w[i - 1], lambda, i);
    col1[i - 1] = apply_rule(get_rule(1, q), 1, c0p, c1p, data.z[i - 1],
                             data.w[i - 1], lambda, i);
    if (col0[i - 1].is_infinite() && col1[i - 1].is_infinite()) {
      throw_error(errc::infeasible, "infeasible label configuration");
    }
    max_pieces = std::max({max_pieces, std::int64_t(col0[i - 1].pieces.size()),
                           std::int64_t(col1[i - 1].pieces.size())});
  }

  // Decode: best final state (ties to background), then follow prev_end /
  // prev_state / prev_mean right to left, one segment per hop.
  bool f0 = !col0[n - 1].is_infinite();
  bool f1 = !col1[n - 1].is_infinite();
  if (!f0 && !f1) throw_error(errc::infeasible, "infeasible label configuration");
  MinimizeResult m0, m1;
  if (f0) m0 = minimize(col0[n - 1]);
  if (f1) m1 = minimize(col1[n - 1]);
  std::int8_t s = (f0 && (!f1 || m0.cost <= m1.cost)) ? 0 : 1;
  const MinimizeResult& best = s == 0 ? m0 : m1;

  SegmentationResult r;
  r.penalized_cost = best.cost;
  r.max_column_pieces = max_pieces;
  double mu = best.mu;
  std::int64_t i = n;
  const PoissonPiece* piece = &(s == 0 ? col0 : col1)[n - 1].pieces[best.piece_index];
  std::vector<Segment> rev;
  for (;;) {
    std::int64_t e = piece->prev_end == kNoPrevEnd ? 0 : piece->prev_end;
    rev.push_back({e + 1, i, mu, s});
    if (piece->prev_end == kNoPrevEnd) break;
    double next_mu = piece->prev_mean_same ? mu : piece->prev_mean;
    s = piece->prev_state;
    i = e;
    const CostFunction& f = (s == 0 ? col0 : col1)[i - 1];
    if (f.is_infinite()) throw_error(errc::internal, "backtrace entered an infeasible state");
    piece = &f.pieces[f.piece_index_at(next_mu)];
    mu = next_mu;
  }
  r.segments.assign(rev.rbegin(), rev.rend());

  r.states.resize(n);
  for (const Segment& seg : r.segments) {
    for (std::int64_t k = seg.start; k <= seg.end; ++k) r.states[k - 1] = seg.state;
  }
  r.changes.resize(n - 1);
  for (std::int64_t k = 0; k + 1 < n; ++k) {
    r.changes[k] = std::int8_t(r.states[k + 1] - r.states[k]);
    if (r.changes[k] != 0) ++r.change_count;
  }
  r.peaks = peaks_from_states(r.states);
  r.total_loss = r.penalized_cost - lambda * double(r.change_count);
  return r;
}

}  // namespace

SegmentationResult fit(const CountSequence& data, const LabelSet& labels,
                       double lambda) {
  return fit_impl(data, &labels, lambda);
}

SegmentationResult fit_unlabeled(const CountSequence& data, double lambda) {
  return fit_impl(data, nullptr, lambda);
}

}  // namespace flopart
