#ifndef FLOPART_DP_HPP
#define FLOPART_DP_HPP

#include <cstdint>
#include <vector>

#include "labels.hpp"
#include "piecewise.hpp"
#include "sequence.hpp"

namespace flopart {

// Weighted Poisson loss w * (mu - z * log mu), with the 0 log 0 = 0 limit.
double poisson_loss(double z, double w, double mu);

struct Segment {
  std::int64_t start = 0;  // 1-based inclusive
  std::int64_t end = 0;
  double mean = 0.0;
  std::int8_t state = 0;  // 0 background, 1 peak
};

struct Peak {
  std::int64_t start = 0;
  std::int64_t end = 0;
};

struct SegmentationResult {
  std::vector<Segment> segments;      // tile 1..n in order
  std::vector<std::int8_t> states;    // per point, n entries
  std::vector<std::int8_t> changes;   // per gap (i, i+1), n-1 entries, in {-1,0,+1}
  std::vector<Peak> peaks;            // maximal state-1 runs
  double total_loss = 0.0;
  double penalized_cost = 0.0;        // total_loss + lambda * (#nonzero changes)
  std::int64_t change_count = 0;
  std::int64_t max_column_pieces = 0; // diagnostic: widest cost function seen
};

// Maximal runs of state 1.
std::vector<Peak> peaks_from_states(const std::vector<std::int8_t>& states);

// How a state's cost at one index is updated from the previous column.
enum class RuleKind : std::int8_t {
  unlabeled,  // full update: stay or penalized change from the other state
  stay_only,  // interior of a peakStart/peakEnd label, no change allowed
  forbidden,  // state infeasible at this index
};

// Rule for state s at an index with the given label context.
RuleKind get_rule(std::int8_t s, const LabelQuery& q);

// Whether state s may hold at index 1 under the label context there.
bool init_state_allowed(std::int8_t s, const LabelQuery& q);

// First-column cost functions: the bare loss of the first point, with the
// label override for states ruled out at index 1.
void init_costs(double z1, double w1, const LabelQuery& q, double dom_lo,
                double dom_hi, CostFunction& c0, CostFunction& c1);

// One update step: compute C_{s,i} from the previous column. `i` is the
// 1-based index of the current point (used to stamp backtrace fields).
CostFunction apply_rule(RuleKind rule, std::int8_t s, const CostFunction& c0_prev,
                        const CostFunction& c1_prev, double z, double w,
                        double lambda, std::int64_t i);

// Optimal constrained segmentation. Labels must be validated against the
// data length. Throws errc::infeasible ("infeasible label configuration")
// when the labels rule out every model.
SegmentationResult fit(const CountSequence& data, const LabelSet& labels,
                       double lambda);

// Same engine with the unlabeled rule forced at every index (the plain
// up-down model, no label constraints).
SegmentationResult fit_unlabeled(const CountSequence& data, double lambda);

}  // namespace flopart

#endif
