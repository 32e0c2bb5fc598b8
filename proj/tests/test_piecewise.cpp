#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "../src/error.hpp"
#include "../src/piecewise.hpp"
#include "support/grid_oracle.hpp"

using namespace flopart;
using flopart::testing::close_rel;
using flopart::testing::oracle_grid;

namespace {

CostFunction loss_only(double z, double w, double lo, double hi) {
  return add_loss(CostFunction::constant(0.0, lo, hi), z, w);
}

// Compare a closed-form result against grid samples of the expected values.
void check_against_grid(const CostFunction& got, const std::vector<double>& grid,
                        const std::vector<double>& vals, double tol = 1e-8) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    INFO("mu = ", grid[i]);
    CHECK(close_rel(got.eval(grid[i]), vals[i], tol));
  }
}

}  // namespace

TEST_CASE("single weighted loss piece evaluates by formula") {
  CostFunction f = loss_only(3.0, 2.0, 0.0, 10.0);
  REQUIRE(f.pieces.size() == 1);
  CHECK(f.pieces[0].linear_coef == 2.0);
  CHECK(f.pieces[0].log_coef == -6.0);
  CHECK(f.pieces[0].const_coef == 0.0);
  CHECK(f.eval(1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.eval(5.0) == doctest::Approx(0.3433725253953978).epsilon(1e-12));
  // limit convention at mu = 0 with a negative log coefficient
  CHECK(std::isinf(f.eval(0.0)));
  CHECK(f.eval(0.0) > 0.0);
}

TEST_CASE("zero-count loss is finite at mu = 0") {
  CostFunction f = loss_only(0.0, 1.5, 0.0, 4.0);
  CHECK(f.pieces[0].log_coef == 0.0);
  CHECK(f.eval(0.0) == 0.0);
  CHECK(f.eval(2.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("add_loss accumulates and rejects bad arguments") {
  CostFunction f = loss_only(3.0, 2.0, 0.0, 10.0);
  f = add_loss(f, 1.0, 1.0);
  CHECK(f.pieces[0].linear_coef == 3.0);
  CHECK(f.pieces[0].log_coef == -7.0);
  CHECK_THROWS_AS(add_loss(f, -1.0, 1.0), error);
  CHECK_THROWS_AS(add_loss(f, 1.0, 0.0), error);
}

TEST_CASE("add_constant shifts values only") {
  CostFunction f = loss_only(3.0, 2.0, 0.0, 10.0);
  CostFunction g = add_constant(f, 1.25);
  for (double mu : {0.5, 1.0, 3.0, 9.0}) {
    CHECK(g.eval(mu) == doctest::Approx(f.eval(mu) + 1.25).epsilon(1e-12));
  }
  CHECK(g.pieces[0].linear_coef == f.pieces[0].linear_coef);
  CHECK(g.pieces[0].log_coef == f.pieces[0].log_coef);
}

TEST_CASE("minimize finds the interior stationary point") {
  CostFunction f = loss_only(3.0, 2.0, 0.0, 10.0);
  MinimizeResult m = minimize(f);
  CHECK(m.mu == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(m.cost == doctest::Approx(-0.5916737320086581).epsilon(1e-12));
  CHECK(m.piece_index == 0);
}

TEST_CASE("minimize clamps to the domain edge") {
  // stationary point mu = 3 lies outside [0, 2]
  CostFunction f = loss_only(3.0, 2.0, 0.0, 2.0);
  MinimizeResult m = minimize(f);
  CHECK(m.mu == 2.0);
  CHECK(m.cost == doctest::Approx(4.0 - 6.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("minimize of the infinite function reports infeasible") {
  CostFunction f = CostFunction::infinity(0.0, 5.0);
  CHECK_THROWS_WITH_AS(minimize(f), "no feasible model", error);
}

TEST_CASE("eval rejects points outside the domain") {
  CostFunction f = loss_only(1.0, 1.0, 0.0, 5.0);
  CHECK_THROWS_AS(f.eval(-0.5), error);
  CHECK_THROWS_AS(f.eval(5.5), error);
}

TEST_CASE("min_less of a convex piece keeps the dip and flattens after") {
  CostFunction f = loss_only(3.0, 2.0, 0.0, 10.0);
  CostFunction g = min_less(f);
  g.check();
  REQUIRE(g.pieces.size() == 2);
  // decreasing part kept verbatim, marked equality-active
  CHECK(g.pieces[0].mu_lo == 0.0);
  CHECK(g.pieces[0].mu_hi == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(g.pieces[0].log_coef == -6.0);
  CHECK(g.pieces[0].prev_mean_same);
  // constant tail at the minimum, remembering where it was attained
  CHECK(g.pieces[1].linear_coef == 0.0);
  CHECK(g.pieces[1].log_coef == 0.0);
  CHECK(g.pieces[1].const_coef == doctest::Approx(-0.5916737320086581).epsilon(1e-12));
  CHECK_FALSE(g.pieces[1].prev_mean_same);
  CHECK(g.pieces[1].prev_mean == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(g.eval(5.0) == doctest::Approx(-0.5916737320086581).epsilon(1e-12));
  CHECK(g.eval(1.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("min_more of a convex piece flattens before the minimum") {
  CostFunction f = loss_only(3.0, 2.0, 0.0, 10.0);
  CostFunction g = min_more(f);
  g.check();
  REQUIRE(g.pieces.size() == 2);
  CHECK(g.pieces[0].linear_coef == 0.0);
  CHECK(g.pieces[0].const_coef == doctest::Approx(-0.5916737320086581).epsilon(1e-12));
  CHECK_FALSE(g.pieces[0].prev_mean_same);
  CHECK(g.pieces[0].prev_mean == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(g.pieces[1].prev_mean_same);
  CHECK(g.eval(1.0) == doctest::Approx(-0.5916737320086581).epsilon(1e-12));
  CHECK(g.eval(5.0) == doctest::Approx(0.3433725253953978).epsilon(1e-12));
}

TEST_CASE("min_less result is non-increasing and min_more non-decreasing") {
  CostFunction f = loss_only(2.0, 1.0, 0.0, 8.0);
  f = add_loss(f, 5.0, 0.5);
  CostFunction le = min_less(f);
  CostFunction ge = min_more(f);
  auto grid = oracle_grid(le);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(le.eval(grid[i]) <= le.eval(grid[i - 1]) + 1e-9);
    CHECK(ge.eval(grid[i]) >= ge.eval(grid[i - 1]) - 1e-9);
  }
}

TEST_CASE("pointwise_min of two lines crosses once") {
  // mu  vs  2 - mu on [0, 2]: crossing at mu = 1
  CostFunction a = CostFunction::constant(0.0, 0.0, 2.0);
  a.pieces[0].linear_coef = 1.0;
  CostFunction b = CostFunction::constant(2.0, 0.0, 2.0);
  b.pieces[0].linear_coef = -1.0;
  b.pieces[0].prev_end = 4;  // marker to tell the winners apart
  b.pieces[0].prev_state = 1;
  CostFunction m = pointwise_min(a, b);
  m.check();
  REQUIRE(m.pieces.size() == 2);
  CHECK(m.pieces[0].mu_hi == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.pieces[0].prev_end == kNoPrevEnd);
  CHECK(m.pieces[1].prev_end == 4);
  CHECK(m.eval(0.5) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(m.eval(1.5) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("pointwise_min with a log curve yields two crossings") {
  // mu - 2 log mu  vs  constant 0.7: roots bracket the minimum at mu = 2
  CostFunction a = loss_only(2.0, 1.0, 0.0, 6.0);
  CostFunction b = CostFunction::constant(0.7, 0.0, 6.0);
  b.pieces[0].prev_end = 7;
  CostFunction m = pointwise_min(a, b);
  m.check();
  REQUIRE(m.pieces.size() == 3);
  CHECK(m.pieces[0].prev_end == 7);   // constant wins near 0 where the loss blows up
  CHECK(m.pieces[1].prev_end == kNoPrevEnd);
  CHECK(m.pieces[2].prev_end == 7);
  CHECK(m.pieces[0].mu_hi == doctest::Approx(1.4685471293645617).epsilon(1e-10));
  CHECK(m.pieces[1].mu_hi == doctest::Approx(2.6464018492619954).epsilon(1e-10));
}

TEST_CASE("pointwise_min ties prefer the first argument") {
  CostFunction a = CostFunction::constant(1.0, 0.0, 3.0);
  a.pieces[0].prev_state = 0;
  CostFunction b = CostFunction::constant(1.0, 0.0, 3.0);
  b.pieces[0].prev_state = 1;
  CostFunction m = pointwise_min(a, b);
  REQUIRE(m.pieces.size() == 1);
  CHECK(m.pieces[0].prev_state == 0);
}

TEST_CASE("pointwise_min against the infinite function returns the other side") {
  CostFunction a = loss_only(1.0, 1.0, 0.0, 5.0);
  CostFunction inf = CostFunction::infinity(0.0, 5.0);
  CostFunction m1 = pointwise_min(a, inf);
  CostFunction m2 = pointwise_min(inf, a);
  CHECK(m1.eval(2.0) == doctest::Approx(a.eval(2.0)));
  CHECK(m2.eval(2.0) == doctest::Approx(a.eval(2.0)));
  CHECK_THROWS_AS(pointwise_min(a, CostFunction::infinity(0.0, 6.0)), error);
}

TEST_CASE("min_less and min_more leave the infinite function infinite") {
  CostFunction inf = CostFunction::infinity(0.0, 5.0);
  CHECK(min_less(inf).is_infinite());
  CHECK(min_more(inf).is_infinite());
}

TEST_CASE("adjacent pieces with equal coefficients and backtrace merge") {
  CostFunction a = CostFunction::constant(1.0, 0.0, 3.0);
  CostFunction b = CostFunction::constant(2.0, 0.0, 3.0);
  // both halves of the envelope come from a; output must be a single piece
  CostFunction m = pointwise_min(a, b);
  CHECK(m.pieces.size() == 1);
  CHECK(m.pieces[0].mu_lo == 0.0);
  CHECK(m.pieces[0].mu_hi == 3.0);
}

TEST_CASE("dump lists one tab-separated line per piece") {
  CostFunction f = loss_only(3.0, 2.0, 0.0, 10.0);
  CostFunction g = min_less(f);
  std::string text = g.dump();
  CHECK(text ==
        "0\t3\t2\t-6\t0\tnone\tnone\tsame\n"
        "3\t10\t0\t0\t-0.59167373200865825\tnone\tnone\t3\n");
}

// Property tests: pump random loss mixtures through the operations and
// compare every result against the sampled-grid reference.

namespace {

CostFunction random_loss_function(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> zdist(0, 12);
  std::uniform_real_distribution<double> wdist(0.25, 4.0);
  std::uniform_int_distribution<int> terms(1, 5);
  CostFunction f = CostFunction::constant(0.0, 0.0, 12.0);
  int k = terms(rng);
  for (int i = 0; i < k; ++i) f = add_loss(f, zdist(rng), wdist(rng));
  return f;
}

// Multi-piece functions of the kind the update rules produce: envelopes of
// loss mixtures with more loss layered on, so decreasing runs cross piece
// joints and flats sit next to curved stretches.
CostFunction random_cost_function(std::mt19937_64& rng) {
  CostFunction f = random_loss_function(rng);
  int rounds = int(rng() % 3);
  for (int r = 0; r < rounds; ++r) {
    CostFunction g = add_constant(random_loss_function(rng), 0.2 * double(rng() % 12));
    f = pointwise_min(f, g);
    switch (rng() % 3) {
      case 0: f = min_less(f); break;
      case 1: f = min_more(f); break;
      default: break;
    }
    f = add_loss(f, double(rng() % 8), 0.5 + 0.25 * double(rng() % 6));
  }
  return f;
}

}  // namespace

TEST_CASE("property: min_less and min_more match the grid reference") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 200; ++trial) {
    CostFunction f = trial % 2 == 0 ? random_loss_function(rng)
                                    : random_cost_function(rng);
    std::vector<double> grid, vals;
    flopart::testing::oracle_prefix_min(f, grid, vals);
    CostFunction le = min_less(f);
    le.check();
    check_against_grid(le, grid, vals);
    flopart::testing::oracle_suffix_min(f, grid, vals);
    CostFunction ge = min_more(f);
    ge.check();
    check_against_grid(ge, grid, vals);
  }
}

TEST_CASE("property: pointwise_min matches the grid reference") {
  std::mt19937_64 rng(20240818);
  for (int trial = 0; trial < 200; ++trial) {
    CostFunction a = random_loss_function(rng);
    CostFunction b = add_constant(random_loss_function(rng), 0.5);
    // make the envelopes non-trivial before combining
    if (trial % 2 == 0) { a = min_less(a); b = min_more(b); }
    CostFunction m = pointwise_min(a, b);
    m.check();
    auto grid = oracle_grid(m);
    for (double x : grid) {
      double want = std::min(a.eval(x), b.eval(x));
      INFO("mu = ", x);
      CHECK(close_rel(m.eval(x), want, 1e-8));
    }
  }
}

TEST_CASE("property: minimize matches the grid reference") {
  std::mt19937_64 rng(20240819);
  for (int trial = 0; trial < 200; ++trial) {
    CostFunction f = random_cost_function(rng);
    if (trial % 3 == 0) f = pointwise_min(min_less(f), add_constant(f, 0.25));
    MinimizeResult m = minimize(f);
    CHECK(close_rel(m.cost, flopart::testing::oracle_min(f), 1e-8));
    CHECK(close_rel(f.eval(m.mu), m.cost, 1e-9));
  }
}

TEST_CASE("property: operations preserve convexity and tiling invariants") {
  std::mt19937_64 rng(20240820);
  for (int trial = 0; trial < 100; ++trial) {
    CostFunction f = random_loss_function(rng);
    CostFunction g = pointwise_min(min_less(f), add_constant(min_more(f), 0.1));
    g.check();
    for (const PoissonPiece& p : g.pieces) CHECK(p.log_coef <= 0.0);
    CHECK(g.domain_lo == f.domain_lo);
    CHECK(g.domain_hi == f.domain_hi);
  }
}
