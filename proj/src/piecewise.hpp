#ifndef FLOPART_PIECEWISE_HPP
#define FLOPART_PIECEWISE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace flopart {

// Tolerances for the piecewise algebra. The breakpoint tolerance bounds the
// allowed jump between adjacent pieces; the merge tolerance collapses pieces
// whose coefficients agree; the root tolerance is relative in mu.
inline constexpr double kBreakpointTol = 1e-8;
inline constexpr double kCoefMergeTol = 1e-10;
inline constexpr double kRootRelTol = 1e-12;
inline constexpr double kEndpointSnapTol = 1e-12;

inline constexpr std::int32_t kNoPrevEnd = -1;
inline constexpr std::int8_t kNoPrevState = -1;

// One piece of a cost function of the segment mean:
//   f(mu) = linear_coef * mu + log_coef * log(mu) + const_coef
// on [mu_lo, mu_hi]. log_coef <= 0 for every piece built from Poisson losses
// of non-negative data, so pieces are convex on mu > 0.
//
// The backtrace annotations record how the optimum reaching this piece was
// obtained: prev_end is the 1-based data index where the previous segment
// ended (kNoPrevEnd at the start of the sequence), prev_state the hidden
// state of that segment, and prev_mean its mean. prev_mean_same marks the
// equality-active case where the previous mean equals the current mu.
struct PoissonPiece {
  double linear_coef = 0.0;
  double log_coef = 0.0;
  double const_coef = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double prev_mean = 0.0;
  std::int32_t prev_end = kNoPrevEnd;
  std::int8_t prev_state = kNoPrevState;
  bool prev_mean_same = true;

  // Evaluate at mu, using the limit convention at mu = 0:
  // log term vanishes when log_coef == 0, otherwise the limit is +/-inf.
  double value_at(double mu) const;

  // Location of the piece minimum on [mu_lo, mu_hi]. Interior stationary
  // point -log_coef / linear_coef when it exists, else the lower endpoint
  // for non-decreasing pieces and the upper endpoint for decreasing ones.
  double argmin() const;

  bool same_coefs(const PoissonPiece& o, double tol = kCoefMergeTol) const;
  bool same_backtrace(const PoissonPiece& o) const;
};

// Piecewise cost function on the mean domain [domain_lo, domain_hi].
// Pieces tile the domain exactly; `infinite` marks the everywhere-infeasible
// function (no pieces stored).
struct CostFunction {
  std::vector<PoissonPiece> pieces;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
  bool infinite = false;

  static CostFunction constant(double value, double lo, double hi);
  static CostFunction infinity(double lo, double hi);

  bool is_infinite() const { return infinite; }

  // Value at mu; throws errc::invalid_argument outside the domain.
  double eval(double mu) const;

  // Index of the piece covering mu (first match at shared breakpoints).
  std::size_t piece_index_at(double mu) const;

  // Debug dump: one line per piece,
  // mu_lo mu_hi linear log const prev_end prev_state prev_mean  (tab-separated).
  std::string dump() const;

  // Verify tiling, continuity at breakpoints, and piece-count invariants.
  // Throws errc::internal on violation. Test/debug aid.
  void check(double tol = kBreakpointTol) const;
};

struct MinimizeResult {
  double mu = 0.0;
  double cost = 0.0;
  std::size_t piece_index = 0;
};

// All operations are pure: inputs are never mutated.

// Add the weighted Poisson loss w * (mu - z * log mu) to every piece.
CostFunction add_loss(const CostFunction& f, double z, double w);

// Add a constant penalty to every piece.
CostFunction add_constant(const CostFunction& f, double lambda);

// Prefix minimum over the mean axis: out(mu) = min_{x <= mu} f(x).
// Output is non-increasing. Stretches where f itself is the prefix minimum
// keep f's coefficients and are marked prev_mean_same; constant stretches
// carry the argmin where the running minimum was attained.
CostFunction min_less(const CostFunction& f);

// Suffix minimum: out(mu) = min_{x >= mu} f(x). Mirror of min_less.
CostFunction min_more(const CostFunction& f);

// Pointwise minimum of two functions on the same domain. Each output piece
// inherits the backtrace of whichever input is smaller there; exact ties
// prefer `a`.
CostFunction pointwise_min(const CostFunction& a, const CostFunction& b);

// Global minimum; throws errc::infeasible ("no feasible model") on the
// infinite function.
MinimizeResult minimize(const CostFunction& f);

}  // namespace flopart

#endif
