#ifndef FLOPART_EVALUATION_HPP
#define FLOPART_EVALUATION_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "dp.hpp"
#include "labels.hpp"

namespace flopart {

// One outcome per label; a label contributes at most one error.
enum class LabelOutcome : std::int8_t { correct, false_positive, false_negative };

const char* label_outcome_name(LabelOutcome o);

struct LabelErrorReport {
  std::vector<LabelOutcome> outcomes;  // one per label, in LabelSet order
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t errors = 0;       // fp + fn
  std::int64_t possible_fp = 0;  // every label can yield a false positive
  std::int64_t possible_fn = 0;  // only peakStart and peakEnd can yield a miss
};

// Score predicted peaks against labels. noPeaks fails on any overlapping
// peak; peakStart counts peak start indices inside the label (0 is a miss,
// more than one is a false positive); peakEnd does the same with peak ends.
// Peaks must be disjoint and sorted, as produced by peaks_from_states.
LabelErrorReport label_errors(const std::vector<Peak>& peaks, const LabelSet& labels);

// Penalty chosen for a sequence, on the log scale. The linear method maps
// x = log log N (N = total data weight) to a log penalty.
struct PenaltyModel {
  enum class Kind : std::int8_t { bic, constant, linear };
  Kind kind = Kind::bic;
  double log_lambda = 0.0;  // constant method
  double w = 0.0;           // linear method: log penalty = w * log log N + b
  double b = 0.0;

  // Predicted log penalty for total data weight N. BIC and linear need
  // N >= 2; the constant method ignores N.
  double predict_log_penalty(double total_weight) const;
};

// log log N, the BIC log penalty for total data weight N >= 2.
double bic_log_penalty(double total_weight);

// count penalties evenly spaced on the log scale over [lo, hi].
std::vector<double> log_penalty_grid(double lo, double hi, int count);

// The standard training grid: 23 penalties over 1e-5 .. 1e6.
std::vector<double> default_penalty_grid();

// Constant method: the grid penalty with the fewest total train errors.
// per_sequence_errors[s][j] is the error count of sequence s at grid[j].
// Ties prefer the larger penalty.
PenaltyModel learn_constant(const std::vector<double>& penalty_grid,
                            const std::vector<std::vector<std::int64_t>>& per_sequence_errors);

// Acceptable log-penalty range for one sequence. Infinite bounds mean the
// sequence does not constrain that side.
struct TargetInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

// Widest grid run of minimal error, as log-penalty bounds. A run touching
// the first or last grid cell extends to infinity on that side; among
// equally wide runs the one with larger penalties wins.
TargetInterval minimal_error_interval(const std::vector<double>& penalty_grid,
                                      const std::vector<std::int64_t>& errors);

// Squared hinge with margin 1 against the intervals, f_i = w * x_i + b.
// Infinite bounds drop their term.
double squared_hinge_loss(double w, double b, const std::vector<double>& features,
                          const std::vector<TargetInterval>& targets);

// Linear method: gradient descent on squared_hinge_loss from (0, 0),
// step 0.02 on the per-sequence mean gradient, at most 2000 iterations,
// stopping when the objective improves by less than 1e-9. Returns the best
// iterate seen.
PenaltyModel learn_linear(const std::vector<double>& features,
                          const std::vector<TargetInterval>& targets);

struct RocPoint {
  double constant = 0.0;  // c added to every predicted log penalty
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // sorted by (fpr, tpr), endpoints included
  double auc = 0.0;
};

// Sweep the constants grid: for each c, fit every sequence at
// lambda = exp(f_s + c) via peaks_at(s, lambda) and aggregate errors over
// the test labels. fpr = fp / possible_fp over all labels, tpr uses only
// peakStart and peakEnd labels. Appends the (0,0) and (1,1) endpoints and
// integrates by trapezoid over fpr. Throws when no label can yield a miss.
RocCurve roc_analysis(const std::vector<double>& predicted_log_penalties,
                      const std::vector<LabelSet>& test_labels,
                      const std::vector<double>& constants,
                      const std::function<std::vector<Peak>(std::size_t, double)>& peaks_at);

// Seeded random assignment of each label to fold 0 or 1. label_counts[s]
// is the number of labels of sequence s; the result has one fold id per
// label, in sequence order.
std::vector<std::vector<std::int8_t>> split_labels_two_fold(
    const std::vector<std::size_t>& label_counts, std::uint64_t seed);

}  // namespace flopart

#endif
