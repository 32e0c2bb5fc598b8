#include "evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "error.hpp"
#include "rng.hpp"

namespace flopart {

const char* label_outcome_name(LabelOutcome o) {
  switch (o) {
    case LabelOutcome::correct: return "correct";
    case LabelOutcome::false_positive: return "false_positive";
    case LabelOutcome::false_negative: return "false_negative";
  }
  return "?";
}

LabelErrorReport label_errors(const std::vector<Peak>& peaks, const LabelSet& labels) {
  LabelErrorReport rep;
  rep.outcomes.reserve(labels.size());
  for (const Label& lab : labels.labels) {
    ++rep.possible_fp;
    LabelOutcome out = LabelOutcome::correct;
    if (lab.kind == LabelKind::noPeaks) {
      for (const Peak& p : peaks) {
        if (p.start <= lab.hi && p.end >= lab.lo) {
          out = LabelOutcome::false_positive;
          break;
        }
      }
    } else {
      ++rep.possible_fn;
      std::int64_t events = 0;
      for (const Peak& p : peaks) {
        std::int64_t at = lab.kind == LabelKind::peakStart ? p.start : p.end;
        if (at >= lab.lo && at <= lab.hi) ++events;
      }
      if (events == 0) out = LabelOutcome::false_negative;
      else if (events > 1) out = LabelOutcome::false_positive;
    }
    if (out == LabelOutcome::false_positive) ++rep.fp;
    if (out == LabelOutcome::false_negative) ++rep.fn;
    rep.outcomes.push_back(out);
  }
  rep.errors = rep.fp + rep.fn;
  return rep;
}

double bic_log_penalty(double total_weight) {
  if (!(total_weight >= 2.0))
    throw_error(errc::invalid_argument, "total weight must be >= 2");
  return std::log(std::log(total_weight));
}

double PenaltyModel::predict_log_penalty(double total_weight) const {
  switch (kind) {
    case Kind::bic: return bic_log_penalty(total_weight);
    case Kind::constant: return log_lambda;
    case Kind::linear: return w * bic_log_penalty(total_weight) + b;
  }
  throw_error(errc::internal, "unknown penalty model kind");
}

std::vector<double> log_penalty_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo)) throw_error(errc::invalid_argument, "penalty grid bounds must satisfy 0 < lo <= hi");
  if (count < 1) throw_error(errc::invalid_argument, "penalty grid needs at least one value");
  std::vector<double> grid;
  grid.reserve(std::size_t(count));
  if (count == 1) {
    grid.push_back(lo);
    return grid;
  }
  double llo = std::log(lo), lhi = std::log(hi);
  for (int j = 0; j < count; ++j)
    grid.push_back(std::exp(llo + (lhi - llo) * double(j) / double(count - 1)));
  return grid;
}

std::vector<double> default_penalty_grid() { return log_penalty_grid(1e-5, 1e6, 23); }

PenaltyModel learn_constant(const std::vector<double>& penalty_grid,
                            const std::vector<std::vector<std::int64_t>>& per_sequence_errors) {
  if (penalty_grid.empty()) throw_error(errc::validation, "empty penalty grid");
  for (double p : penalty_grid)
    if (!(p > 0.0)) throw_error(errc::invalid_argument, "penalty grid entries must be positive");
  for (const auto& row : per_sequence_errors)
    if (row.size() != penalty_grid.size())
      throw_error(errc::invalid_argument, "error rows do not match the grid");
  std::size_t best = 0;
  std::int64_t best_total = 0;
  for (std::size_t j = 0; j < penalty_grid.size(); ++j) {
    std::int64_t total = 0;
    for (const auto& row : per_sequence_errors) total += row[j];
    if (j == 0 || total < best_total ||
        (total == best_total && penalty_grid[j] > penalty_grid[best])) {
      best = j;
      best_total = total;
    }
  }
  PenaltyModel m;
  m.kind = PenaltyModel::Kind::constant;
  m.log_lambda = std::log(penalty_grid[best]);
  return m;
}

TargetInterval minimal_error_interval(const std::vector<double>& penalty_grid,
                                      const std::vector<std::int64_t>& errors) {
  if (penalty_grid.empty()) throw_error(errc::validation, "empty penalty grid");
  if (errors.size() != penalty_grid.size())
    throw_error(errc::invalid_argument, "error rows do not match the grid");
  std::int64_t best = *std::min_element(errors.begin(), errors.end());
  std::size_t run_lo = 0, run_hi = 0;
  bool found = false;
  std::size_t j = 0;
  while (j < errors.size()) {
    if (errors[j] != best) { ++j; continue; }
    std::size_t k = j;
    while (k + 1 < errors.size() && errors[k + 1] == best) ++k;
    // >= keeps the later run on equal width, matching the larger-penalty
    // tie rule of learn_constant
    if (!found || k - j >= run_hi - run_lo) { run_lo = j; run_hi = k; found = true; }
    j = k + 1;
  }
  TargetInterval iv;
  if (run_lo > 0) iv.lo = std::log(penalty_grid[run_lo]);
  if (run_hi + 1 < penalty_grid.size()) iv.hi = std::log(penalty_grid[run_hi]);
  return iv;
}

double squared_hinge_loss(double w, double b, const std::vector<double>& features,
                          const std::vector<TargetInterval>& targets) {
  if (features.size() != targets.size())
    throw_error(errc::invalid_argument, "features and intervals differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    double f = w * features[i] + b;
    if (std::isfinite(targets[i].lo)) {
      double m = targets[i].lo - f + 1.0;
      if (m > 0.0) total += m * m;
    }
    if (std::isfinite(targets[i].hi)) {
      double m = f - targets[i].hi + 1.0;
      if (m > 0.0) total += m * m;
    }
  }
  return total;
}

PenaltyModel learn_linear(const std::vector<double>& features,
                          const std::vector<TargetInterval>& targets) {
  if (features.size() != targets.size())
    throw_error(errc::invalid_argument, "features and intervals differ in length");
  if (features.empty()) throw_error(errc::validation, "unconstrained problem");
  bool any_finite = false;
  for (const TargetInterval& iv : targets) {
    if (iv.lo > iv.hi) throw_error(errc::invalid_argument, "empty target interval");
    if (std::isfinite(iv.lo) || std::isfinite(iv.hi)) any_finite = true;
  }
  if (!any_finite) throw_error(errc::validation, "unconstrained problem");

  const double step = 0.02;
  const double inv = 1.0 / double(features.size());
  double w = 0.0, b = 0.0;
  double prev = squared_hinge_loss(w, b, features, targets);
  double best_w = w, best_b = b, best_loss = prev;
  for (int iter = 0; iter < 2000; ++iter) {
    double gw = 0.0, gb = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
      double f = w * features[i] + b;
      if (std::isfinite(targets[i].lo)) {
        double m = targets[i].lo - f + 1.0;
        if (m > 0.0) { gw -= 2.0 * m * features[i]; gb -= 2.0 * m; }
      }
      if (std::isfinite(targets[i].hi)) {
        double m = f - targets[i].hi + 1.0;
        if (m > 0.0) { gw += 2.0 * m * features[i]; gb += 2.0 * m; }
      }
    }
    w -= step * gw * inv;
    b -= step * gb * inv;
    double cur = squared_hinge_loss(w, b, features, targets);
    if (cur < best_loss) { best_loss = cur; best_w = w; best_b = b; }
    if (prev - cur < 1e-9) break;
    prev = cur;
  }
  PenaltyModel m;
  m.kind = PenaltyModel::Kind::linear;
  m.w = best_w;
  m.b = best_b;
  return m;
}

namespace {

// exp overflow guard; beyond this the fit is a single state either way
double clamped_exp(double log_penalty) {
  return std::exp(std::clamp(log_penalty, -700.0, 700.0));
}

double trapezoid_auc(std::vector<RocPoint>& points) {
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    if (a.fpr != b.fpr) return a.fpr < b.fpr;
    return a.tpr < b.tpr;
  });
  double auc = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k)
    auc += (points[k].fpr - points[k - 1].fpr) * 0.5 * (points[k].tpr + points[k - 1].tpr);
  return auc;
}

}  // namespace

RocCurve roc_analysis(const std::vector<double>& predicted_log_penalties,
                      const std::vector<LabelSet>& test_labels,
                      const std::vector<double>& constants,
                      const std::function<std::vector<Peak>(std::size_t, double)>& peaks_at) {
  if (predicted_log_penalties.size() != test_labels.size())
    throw_error(errc::invalid_argument, "one predicted penalty per sequence required");
  std::int64_t possible_fp = 0, possible_fn = 0;
  for (const LabelSet& ls : test_labels) {
    possible_fp += std::int64_t(ls.size());
    for (const Label& lab : ls.labels)
      if (lab.kind != LabelKind::noPeaks) ++possible_fn;
  }
  if (possible_fn == 0) throw_error(errc::validation, "no positive labels");

  RocCurve curve;
  curve.points.reserve(constants.size() + 2);
  for (double c : constants) {
    RocPoint pt;
    pt.constant = c;
    for (std::size_t s = 0; s < test_labels.size(); ++s) {
      if (test_labels[s].empty()) continue;
      std::vector<Peak> peaks = peaks_at(s, clamped_exp(predicted_log_penalties[s] + c));
      LabelErrorReport rep = label_errors(peaks, test_labels[s]);
      pt.fp += rep.fp;
      pt.fn += rep.fn;
    }
    pt.fpr = double(pt.fp) / double(possible_fp);
    pt.tpr = 1.0 - double(pt.fn) / double(possible_fn);
    curve.points.push_back(pt);
  }
  RocPoint lo_end;  // huge penalty: nothing called, all positives missed
  lo_end.constant = std::numeric_limits<double>::infinity();
  lo_end.fn = possible_fn;
  RocPoint hi_end;  // tiny penalty: everything called
  hi_end.constant = -std::numeric_limits<double>::infinity();
  hi_end.fp = possible_fp;
  hi_end.fpr = 1.0;
  hi_end.tpr = 1.0;
  curve.points.push_back(lo_end);
  curve.points.push_back(hi_end);
  curve.auc = trapezoid_auc(curve.points);
  return curve;
}

std::vector<std::vector<std::int8_t>> split_labels_two_fold(
    const std::vector<std::size_t>& label_counts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::int8_t>> folds;
  folds.reserve(label_counts.size());
  for (std::size_t count : label_counts) {
    std::vector<std::int8_t> f(count);
    for (std::size_t k = 0; k < count; ++k) f[k] = uniform01(rng) < 0.5 ? 0 : 1;
    folds.push_back(std::move(f));
  }
  return folds;
}

}  // namespace flopart
