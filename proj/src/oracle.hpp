#ifndef FLOPART_ORACLE_HPP
#define FLOPART_ORACLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dp.hpp"
#include "labels.hpp"
#include "sequence.hpp"

namespace flopart {

// A fully specified candidate considered by the exhaustive solver: which
// gaps change, the alternating state assignment, which changes are
// equality-active, and the means fitted under those choices.
struct CandidateModel {
  std::vector<std::int64_t> boundaries;  // gap g means a change between points g and g+1
  std::vector<std::int8_t> states;       // per point
  std::vector<bool> active_set;          // parallel to boundaries
  std::vector<double> means;             // per segment, boundaries.size() + 1 entries
  bool feasible = false;
  double penalized_cost = 0.0;
};

// Optimal means for the segmentation cut at `boundaries` when the changes
// flagged in `active_set` are forced to equality: each run of segments
// joined by active changes shares the weighted mean of its union. Returns
// one mean per segment.
std::vector<double> pooled_fit(const CountSequence& data,
                               const std::vector<std::int64_t>& boundaries,
                               const std::vector<bool>& active_set);

// Exhaustive solver: every changepoint subset x both starting states x every
// active-constraint subset, keeping candidates that satisfy the label
// semantics (state 0 throughout noPeaks, down-then-up inside peakStart,
// up-then-down inside peakEnd) and all inactive mean inequalities. n <= 12
// enforced ("instance too large"); throws errc::infeasible
// ("no feasible model") when the labels rule everything out.
CandidateModel oracle_solve(const CountSequence& data, const LabelSet& labels,
                            double lambda);

// Structural audit of a decoded result: segment tiling, state/changes
// consistency, mean monotonicity across changes, and exact label
// satisfaction. Returns an empty string when clean, else a description of
// the first violation.
std::string verify_result_structure(const SegmentationResult& r,
                                    const LabelSet& labels);

// Deterministic small instance for agreement trials: Poisson(3) values,
// unit weights, up to two random non-touching labels (often none).
void random_oracle_instance(std::uint64_t seed, std::int64_t n_max,
                            CountSequence& data, LabelSet& labels);

struct OracleCheckReport {
  std::int64_t trials = 0;
  std::int64_t agreed = 0;
  double worst_rel_gap = 0.0;
  std::string first_failure;  // empty when all trials agree
};

// Run seeded agreement trials: for each instance and each penalty, the
// engine's cost must match the oracle optimum within 1e-8 relative and the
// decoded result must pass the structural audit.
OracleCheckReport oracle_check(std::int64_t trials, std::int64_t n_max,
                               std::uint64_t seed,
                               const std::vector<double>& lambdas);

}  // namespace flopart

#endif
