#ifndef FLOPART_TESTS_GRID_ORACLE_HPP
#define FLOPART_TESTS_GRID_ORACLE_HPP

// Grid-based reference implementations of the piecewise-function operations.
// Every function here works on sampled values only, so it cannot share bugs
// with the closed-form algebra under test. The grid is the union of 1000
// uniform points, all piece boundaries, and every clamped stationary point;
// between consecutive grid points each piece is monotone, so prefix/suffix
// minima over the grid equal the true minima at grid points exactly.

#include <algorithm>
#include <cmath>
#include <vector>

#include "../../src/piecewise.hpp"

namespace flopart::testing {

inline std::vector<double> oracle_grid(const CostFunction& f, int uniform = 1000) {
  std::vector<double> g;
  g.reserve(uniform + 2 * f.pieces.size() + 2);
  for (int i = 0; i <= uniform; ++i) {
    double t = double(i) / uniform;
    g.push_back(f.domain_lo + t * (f.domain_hi - f.domain_lo));
  }
  for (const PoissonPiece& p : f.pieces) {
    g.push_back(p.mu_lo);
    g.push_back(p.mu_hi);
    g.push_back(p.argmin());
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

// min over all grid points (reference for minimize()).
inline double oracle_min(const CostFunction& f) {
  double best = std::numeric_limits<double>::infinity();
  for (double x : oracle_grid(f)) best = std::min(best, f.eval(x));
  return best;
}

// Reference prefix minimum: values of min_{x <= g_i} f(x) at each grid point.
inline void oracle_prefix_min(const CostFunction& f, std::vector<double>& grid,
                              std::vector<double>& vals) {
  grid = oracle_grid(f);
  vals.resize(grid.size());
  double run = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    run = std::min(run, f.eval(grid[i]));
    vals[i] = run;
  }
}

inline void oracle_suffix_min(const CostFunction& f, std::vector<double>& grid,
                              std::vector<double>& vals) {
  grid = oracle_grid(f);
  vals.resize(grid.size());
  double run = std::numeric_limits<double>::infinity();
  for (std::size_t i = grid.size(); i-- > 0;) {
    run = std::min(run, f.eval(grid[i]));
    vals[i] = run;
  }
}

inline bool close_rel(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace flopart::testing

#endif
