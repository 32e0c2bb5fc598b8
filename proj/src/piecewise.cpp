#include "piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "error.hpp"

namespace flopart {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative snap of a computed crossing onto a nearby interval endpoint.
double snap_to(double x, double lo, double hi) {
  if (std::fabs(x - lo) <= kEndpointSnapTol * std::max(1.0, std::fabs(lo))) return lo;
  if (std::fabs(x - hi) <= kEndpointSnapTol * std::max(1.0, std::fabs(hi))) return hi;
  return x;
}

// Difference of two pieces, d(mu) = da*mu + db*log(mu) + dc.
struct Diff {
  double da, db, dc;
  double value_at(double mu) const {
    double v = da * mu + dc;
    if (db != 0.0) {
      if (mu <= 0.0) return db < 0.0 ? kInf : -kInf;
      v += db * std::log(mu);
    }
    return v;
  }
  double slope_at(double mu) const { return da + db / mu; }
};

// Root of d on [lo, hi] where d is monotone and d(lo), d(hi) have opposite
// signs (infinite endpoint values allowed). Newton from the midpoint,
// falling back to bisection whenever a step leaves the bracket.
double solve_monotone(const Diff& d, double lo, double hi) {
  double xl = lo, xr = hi;
  bool lo_pos = d.value_at(xl) > 0.0;
  double x = 0.5 * (xl + xr);
  for (int it = 0; it < 200; ++it) {
    double v = d.value_at(x);
    if (v == 0.0) return x;
    if ((v > 0.0) == lo_pos) xl = x; else xr = x;
    if (xr - xl <= kRootRelTol * std::max(1.0, std::fabs(xr))) break;
    double slope = d.slope_at(x);
    double next = x - v / slope;
    if (!(next > xl && next < xr) || !std::isfinite(next)) next = 0.5 * (xl + xr);
    x = next;
  }
  return 0.5 * (xl + xr);
}

// Accumulates output pieces, dropping empty intervals and merging neighbours
// that share coefficients and backtrace.
struct Builder {
  std::vector<PoissonPiece> pieces;

  void push(PoissonPiece p) {
    if (!(p.mu_hi > p.mu_lo)) return;
    if (!pieces.empty()) {
      PoissonPiece& last = pieces.back();
      if (last.same_coefs(p) && last.same_backtrace(p)) {
        last.mu_hi = p.mu_hi;
        return;
      }
      p.mu_lo = last.mu_hi;
    }
    pieces.push_back(p);
  }
};

PoissonPiece flat_piece(double value, double lo, double hi, double argmin,
                        const PoissonPiece& src) {
  PoissonPiece p;
  p.const_coef = value;
  p.mu_lo = lo;
  p.mu_hi = hi;
  p.prev_end = src.prev_end;
  p.prev_state = src.prev_state;
  p.prev_mean_same = false;
  p.prev_mean = argmin;
  return p;
}

PoissonPiece slice_same(const PoissonPiece& src, double lo, double hi) {
  PoissonPiece p = src;
  p.mu_lo = lo;
  p.mu_hi = hi;
  p.prev_mean_same = true;
  p.prev_mean = 0.0;
  return p;
}

}  // namespace

double PoissonPiece::value_at(double mu) const {
  double v = linear_coef * mu + const_coef;
  if (log_coef != 0.0) {
    if (mu <= 0.0) return log_coef < 0.0 ? kInf : -kInf;
    v += log_coef * std::log(mu);
  }
  return v;
}

double PoissonPiece::argmin() const {
  if (log_coef < 0.0 && linear_coef > 0.0) {
    double stat = -log_coef / linear_coef;
    return std::min(std::max(stat, mu_lo), mu_hi);
  }
  if (log_coef < 0.0 || linear_coef < 0.0) return mu_hi;
  return mu_lo;
}

bool PoissonPiece::same_coefs(const PoissonPiece& o, double tol) const {
  return std::fabs(linear_coef - o.linear_coef) <= tol &&
         std::fabs(log_coef - o.log_coef) <= tol &&
         std::fabs(const_coef - o.const_coef) <= tol;
}

bool PoissonPiece::same_backtrace(const PoissonPiece& o) const {
  if (prev_end != o.prev_end || prev_state != o.prev_state) return false;
  if (prev_mean_same != o.prev_mean_same) return false;
  return prev_mean_same || prev_mean == o.prev_mean;
}

CostFunction CostFunction::constant(double value, double lo, double hi) {
  CostFunction f;
  f.domain_lo = lo;
  f.domain_hi = hi;
  PoissonPiece p;
  p.const_coef = value;
  p.mu_lo = lo;
  p.mu_hi = hi;
  p.prev_mean_same = false;
  f.pieces.push_back(p);
  return f;
}

CostFunction CostFunction::infinity(double lo, double hi) {
  CostFunction f;
  f.domain_lo = lo;
  f.domain_hi = hi;
  f.infinite = true;
  return f;
}

std::size_t CostFunction::piece_index_at(double mu) const {
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (mu <= pieces[k].mu_hi) return k;
  }
  return pieces.size() - 1;
}

double CostFunction::eval(double mu) const {
  if (infinite) return kInf;
  double slack = kRootRelTol * std::max(1.0, std::fabs(mu));
  if (mu < domain_lo - slack || mu > domain_hi + slack) {
    throw_error(errc::invalid_argument, "eval: mean outside the function domain");
  }
  mu = std::min(std::max(mu, domain_lo), domain_hi);
  return pieces[piece_index_at(mu)].value_at(mu);
}

std::string CostFunction::dump() const {
  std::string out;
  char buf[256];
  if (infinite) return "infinite\n";
  for (const PoissonPiece& p : pieces) {
    std::snprintf(buf, sizeof buf, "%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t",
                  p.mu_lo, p.mu_hi, p.linear_coef, p.log_coef, p.const_coef);
    out += buf;
    if (p.prev_end == kNoPrevEnd) out += "none\t"; else {
      std::snprintf(buf, sizeof buf, "%d\t", p.prev_end);
      out += buf;
    }
    if (p.prev_state == kNoPrevState) out += "none\t"; else {
      std::snprintf(buf, sizeof buf, "%d\t", int(p.prev_state));
      out += buf;
    }
    if (p.prev_mean_same) out += "same\n"; else {
      std::snprintf(buf, sizeof buf, "%.17g\n", p.prev_mean);
      out += buf;
    }
  }
  return out;
}

void CostFunction::check(double tol) const {
  if (infinite) {
    if (!pieces.empty()) throw_error(errc::internal, "infinite function has pieces");
    return;
  }
  if (pieces.empty()) throw_error(errc::internal, "finite function has no pieces");
  if (pieces.front().mu_lo != domain_lo || pieces.back().mu_hi != domain_hi) {
    throw_error(errc::internal, "pieces do not span the domain");
  }
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const PoissonPiece& p = pieces[k];
    if (!(p.mu_hi > p.mu_lo)) throw_error(errc::internal, "empty piece interval");
    if (p.log_coef > 0.0) throw_error(errc::internal, "positive log coefficient");
    if (k == 0) continue;
    const PoissonPiece& q = pieces[k - 1];
    if (q.mu_hi != p.mu_lo) throw_error(errc::internal, "pieces do not tile the domain");
    double x = p.mu_lo;
    double a = q.value_at(x), b = p.value_at(x);
    if (std::isinf(a) && std::isinf(b) && a == b) continue;
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    if (std::fabs(a - b) > tol * scale) {
      throw_error(errc::internal, "discontinuity at breakpoint");
    }
  }
}

CostFunction add_loss(const CostFunction& f, double z, double w) {
  if (z < 0.0 || w <= 0.0) {
    throw_error(errc::invalid_argument, "add_loss: need z >= 0 and w > 0");
  }
  CostFunction out = f;
  for (PoissonPiece& p : out.pieces) {
    p.linear_coef += w;
    p.log_coef -= w * z;
  }
  return out;
}

CostFunction add_constant(const CostFunction& f, double lambda) {
  CostFunction out = f;
  for (PoissonPiece& p : out.pieces) p.const_coef += lambda;
  return out;
}

CostFunction min_less(const CostFunction& f) {
  if (f.infinite) return f;
  Builder out;
  double best = kInf;
  double best_mu = f.domain_lo;
  PoissonPiece best_src;
  for (const PoissonPiece& p : f.pieces) {
    double xstar = p.argmin();
    double vstar = p.value_at(xstar);
    if (best <= vstar) {
      out.push(flat_piece(best, p.mu_lo, p.mu_hi, best_mu, best_src));
      continue;
    }
    // The piece dips below the running minimum somewhere on its decreasing
    // part [mu_lo, xstar]; find where it takes over. The takeover test must
    // use the same difference evaluation the root finder sees, or rounding
    // can desynchronize the two at a breakpoint where the values tie.
    double enter = p.mu_lo;
    Diff d{p.linear_coef, p.log_coef, p.const_coef - best};
    if (d.value_at(p.mu_lo) > 0.0) {
      enter = snap_to(solve_monotone(d, p.mu_lo, xstar), p.mu_lo, xstar);
      out.push(flat_piece(best, p.mu_lo, enter, best_mu, best_src));
    }
    out.push(slice_same(p, enter, xstar));
    best = vstar;
    best_mu = xstar;
    best_src = p;
    out.push(flat_piece(best, xstar, p.mu_hi, best_mu, best_src));
  }
  CostFunction g;
  g.domain_lo = f.domain_lo;
  g.domain_hi = f.domain_hi;
  g.pieces = std::move(out.pieces);
  return g;
}

CostFunction min_more(const CostFunction& f) {
  if (f.infinite) return f;
  // Sweep right to left, then reverse; the running value is the suffix
  // minimum over means to the right of the current point.
  std::vector<PoissonPiece> rev;
  Builder tail;
  double best = kInf;
  double best_mu = f.domain_hi;
  PoissonPiece best_src;
  for (auto it = f.pieces.rbegin(); it != f.pieces.rend(); ++it) {
    const PoissonPiece& p = *it;
    double xstar = p.argmin();
    double vstar = p.value_at(xstar);
    if (best <= vstar) {
      rev.push_back(flat_piece(best, p.mu_lo, p.mu_hi, best_mu, best_src));
      continue;
    }
    double exit_pt = p.mu_hi;
    Diff d{p.linear_coef, p.log_coef, p.const_coef - best};
    if (d.value_at(p.mu_hi) > 0.0) {
      exit_pt = snap_to(solve_monotone(d, xstar, p.mu_hi), xstar, p.mu_hi);
      rev.push_back(flat_piece(best, exit_pt, p.mu_hi, best_mu, best_src));
    }
    rev.push_back(slice_same(p, xstar, exit_pt));
    best = vstar;
    best_mu = xstar;
    best_src = p;
    rev.push_back(flat_piece(best, p.mu_lo, xstar, best_mu, best_src));
  }
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) tail.push(*it);
  CostFunction g;
  g.domain_lo = f.domain_lo;
  g.domain_hi = f.domain_hi;
  g.pieces = std::move(tail.pieces);
  return g;
}

namespace {

// Emit the smaller of a and b on [lo, hi], splitting at sign changes of the
// difference. Interior crossings are roots of da*mu + db*log(mu) + dc, of
// which there are at most two; the stationary point of the difference
// separates its monotone cells.
void emit_min_on_cell(const PoissonPiece& a, const PoissonPiece& b,
                      double lo, double hi, Builder& out) {
  Diff d{a.linear_coef - b.linear_coef, a.log_coef - b.log_coef,
         a.const_coef - b.const_coef};
  if (std::fabs(d.da) <= kCoefMergeTol && std::fabs(d.db) <= kCoefMergeTol &&
      std::fabs(d.dc) <= kCoefMergeTol) {
    PoissonPiece p = a;
    p.mu_lo = lo;
    p.mu_hi = hi;
    out.push(p);
    return;
  }
  // Collect candidate crossing points inside (lo, hi).
  double cuts[3];
  int ncuts = 0;
  auto consider_cell = [&](double l, double r) {
    double vl = d.value_at(l), vr = d.value_at(r);
    if (vl == 0.0 || vr == 0.0) return;           // boundary touch, no interior root
    if ((vl > 0.0) == (vr > 0.0)) return;          // no sign change
    double root = snap_to(solve_monotone(d, l, r), l, r);
    if (root > l && root < r) cuts[ncuts++] = root;
  };
  double stat = -1.0;
  if (d.da != 0.0 && d.db != 0.0) stat = -d.db / d.da;
  if (stat > lo && stat < hi) {
    consider_cell(lo, stat);
    consider_cell(stat, hi);
  } else {
    consider_cell(lo, hi);
  }
  double edges[4];
  int nedges = 0;
  edges[nedges++] = lo;
  for (int k = 0; k < ncuts; ++k) edges[nedges++] = cuts[k];
  edges[nedges++] = hi;
  for (int k = 0; k + 1 < nedges; ++k) {
    double l = edges[k], r = edges[k + 1];
    if (!(r > l)) continue;
    double mid = 0.5 * (l + r);
    double vm = d.value_at(mid);
    const PoissonPiece& win = vm <= 0.0 ? a : b;
    PoissonPiece p = win;
    p.mu_lo = l;
    p.mu_hi = r;
    out.push(p);
  }
}

}  // namespace

CostFunction pointwise_min(const CostFunction& a, const CostFunction& b) {
  if (a.domain_lo != b.domain_lo || a.domain_hi != b.domain_hi) {
    throw_error(errc::invalid_argument, "pointwise_min: domain mismatch");
  }
  if (a.infinite) return b;
  if (b.infinite) return a;
  Builder out;
  std::size_t ia = 0, ib = 0;
  double lo = a.domain_lo;
  while (ia < a.pieces.size() && ib < b.pieces.size()) {
    const PoissonPiece& pa = a.pieces[ia];
    const PoissonPiece& pb = b.pieces[ib];
    double hi = std::min(pa.mu_hi, pb.mu_hi);
    emit_min_on_cell(pa, pb, lo, hi, out);
    if (pa.mu_hi <= hi) ++ia;
    if (pb.mu_hi <= hi) ++ib;
    lo = hi;
  }
  CostFunction g;
  g.domain_lo = a.domain_lo;
  g.domain_hi = a.domain_hi;
  g.pieces = std::move(out.pieces);
  return g;
}

MinimizeResult minimize(const CostFunction& f) {
  if (f.infinite || f.pieces.empty()) {
    throw_error(errc::infeasible, "no feasible model");
  }
  MinimizeResult best;
  best.cost = kInf;
  for (std::size_t k = 0; k < f.pieces.size(); ++k) {
    double mu = f.pieces[k].argmin();
    double v = f.pieces[k].value_at(mu);
    if (v < best.cost) {
      best.cost = v;
      best.mu = mu;
      best.piece_index = k;
    }
  }
  if (std::isinf(best.cost)) throw_error(errc::infeasible, "no feasible model");
  return best;
}

}  // namespace flopart
