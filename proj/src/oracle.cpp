#include "oracle.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "error.hpp"
#include "rng.hpp"

namespace flopart {

namespace {

// Loss written out independently of the engine's piecewise algebra, so the
// two sides of the agreement check share nothing but this definition.
double plain_loss(double z, double w, double mu) {
  if (z == 0.0) return w * mu;
  if (mu <= 0.0) return std::numeric_limits<double>::infinity();
  return w * (mu - z * std::log(mu));
}

}  // namespace

std::vector<double> pooled_fit(const CountSequence& data,
                               const std::vector<std::int64_t>& boundaries,
                               const std::vector<bool>& active_set) {
  const std::int64_t n = std::int64_t(data.size());
  const std::size_t nseg = boundaries.size() + 1;
  std::vector<double> means(nseg, 0.0);
  // walk runs of segments joined by active changes, pooling each run
  std::size_t seg = 0;
  while (seg < nseg) {
    std::size_t last = seg;
    while (last + 1 < nseg && active_set[last]) ++last;
    std::int64_t lo = seg == 0 ? 1 : boundaries[seg - 1] + 1;
    std::int64_t hi = last + 1 < nseg ? boundaries[last] : n;
    double sum_wz = 0.0, sum_w = 0.0;
    for (std::int64_t k = lo; k <= hi; ++k) {
      sum_wz += data.w[k - 1] * data.z[k - 1];
      sum_w += data.w[k - 1];
    }
    double mean = sum_wz / sum_w;
    for (std::size_t j = seg; j <= last; ++j) means[j] = mean;
    seg = last + 1;
  }
  return means;
}

CandidateModel oracle_solve(const CountSequence& data, const LabelSet& labels,
                            double lambda) {
  const std::int64_t n = std::int64_t(data.size());
  if (n > 12) throw_error(errc::too_large, "instance too large");
  if (n < 1) throw_error(errc::validation, "data length must be >= 1");
  if (!(lambda >= 0.0)) throw_error(errc::validation, "penalty must be >= 0");

  CandidateModel best;
  best.penalized_cost = std::numeric_limits<double>::infinity();
  std::vector<std::int8_t> states(n);
  std::vector<std::int64_t> boundaries;
  std::vector<bool> active;

  for (int s1 = 0; s1 <= 1; ++s1) {
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
      states[0] = std::int8_t(s1);
      for (std::int64_t g = 1; g < n; ++g) {
        bool change = (mask >> (g - 1)) & 1u;
        states[g] = change ? std::int8_t(1 - states[g - 1]) : states[g - 1];
      }
      bool ok = true;
      for (const Label& lab : labels.labels) {
        if (lab.kind == LabelKind::noPeaks) {
          for (std::int64_t i = lab.lo; i <= lab.hi && ok; ++i) ok = states[i - 1] == 0;
        } else {
          std::int8_t enter = lab.kind == LabelKind::peakStart ? 0 : 1;
          ok = states[lab.lo - 1] == enter && states[lab.hi - 1] == 1 - enter;
          // the one change inside must go in the label's direction
          for (std::int64_t g = lab.lo; g < lab.hi && ok; ++g) {
            if (states[g - 1] != states[g]) ok = states[g - 1] == enter;
          }
        }
        if (!ok) break;
      }
      if (!ok) continue;

      boundaries.clear();
      for (std::int64_t g = 1; g < n; ++g) {
        if (states[g - 1] != states[g]) boundaries.push_back(g);
      }
      const std::size_t k = boundaries.size();
      for (std::uint32_t amask = 0; amask < (1u << k); ++amask) {
        active.assign(k, false);
        for (std::size_t j = 0; j < k; ++j) active[j] = (amask >> j) & 1u;
        std::vector<double> means = pooled_fit(data, boundaries, active);
        bool sat = true;
        for (std::size_t j = 0; j < k && sat; ++j) {
          std::int64_t g = boundaries[j];
          bool up = states[g - 1] == 0;
          sat = up ? means[j] <= means[j + 1] : means[j] >= means[j + 1];
        }
        if (!sat) continue;
        double cost = lambda * double(k);
        std::size_t seg = 0;
        for (std::int64_t i = 1; i <= n; ++i) {
          if (seg < k && i > boundaries[seg]) ++seg;
          cost += plain_loss(data.z[i - 1], data.w[i - 1], means[seg]);
        }
        if (cost < best.penalized_cost) {
          best.boundaries = boundaries;
          best.states = states;
          best.active_set = active;
          best.means = std::move(means);
          best.feasible = true;
          best.penalized_cost = cost;
        }
      }
    }
  }
  if (!best.feasible) throw_error(errc::infeasible, "no feasible model");
  return best;
}

std::string verify_result_structure(const SegmentationResult& r,
                                    const LabelSet& labels) {
  char buf[160];
  const std::int64_t n = std::int64_t(r.states.size());
  if (r.segments.empty()) return "no segments";
  if (r.segments.front().start != 1 || r.segments.back().end != n) {
    return "segments do not span 1..n";
  }
  for (std::size_t k = 0; k < r.segments.size(); ++k) {
    const Segment& seg = r.segments[k];
    if (seg.start > seg.end) return "segment with start > end";
    for (std::int64_t i = seg.start; i <= seg.end; ++i) {
      if (r.states[i - 1] != seg.state) return "states disagree with segments";
    }
    if (k == 0) continue;
    const Segment& prev = r.segments[k - 1];
    if (prev.end + 1 != seg.start) return "segments do not tile";
    if (prev.state == seg.state) return "adjacent segments share a state";
    double tol = 1e-9 * std::max({1.0, std::fabs(prev.mean), std::fabs(seg.mean)});
    if (seg.state == 1 && prev.mean > seg.mean + tol) return "up change with decreasing mean";
    if (seg.state == 0 && prev.mean < seg.mean - tol) return "down change with increasing mean";
  }
  if (std::int64_t(r.changes.size()) != n - 1) return "changes vector has wrong length";
  std::int64_t nchanges = 0;
  for (std::int64_t g = 0; g + 1 < n; ++g) {
    if (r.changes[g] != r.states[g + 1] - r.states[g]) return "changes disagree with states";
    if (r.changes[g] != 0) ++nchanges;
  }
  if (nchanges != r.change_count) return "change_count mismatch";
  for (const Label& lab : labels.labels) {
    std::int64_t ups = 0, downs = 0;
    for (std::int64_t g = lab.lo; g < lab.hi; ++g) {
      if (r.changes[g - 1] > 0) ++ups;
      if (r.changes[g - 1] < 0) ++downs;
    }
    switch (lab.kind) {
      case LabelKind::noPeaks:
        for (std::int64_t i = lab.lo; i <= lab.hi; ++i) {
          if (r.states[i - 1] != 0) {
            std::snprintf(buf, sizeof buf, "peak state inside noPeaks [%lld, %lld]",
                          (long long)lab.lo, (long long)lab.hi);
            return buf;
          }
        }
        break;
      case LabelKind::peakStart:
        if (r.states[lab.lo - 1] != 0 || r.states[lab.hi - 1] != 1 || ups != 1 || downs != 0) {
          std::snprintf(buf, sizeof buf,
                        "peakStart [%lld, %lld] not satisfied (ups=%lld downs=%lld)",
                        (long long)lab.lo, (long long)lab.hi, (long long)ups,
                        (long long)downs);
          return buf;
        }
        break;
      case LabelKind::peakEnd:
        if (r.states[lab.lo - 1] != 1 || r.states[lab.hi - 1] != 0 || downs != 1 || ups != 0) {
          std::snprintf(buf, sizeof buf,
                        "peakEnd [%lld, %lld] not satisfied (ups=%lld downs=%lld)",
                        (long long)lab.lo, (long long)lab.hi, (long long)ups,
                        (long long)downs);
          return buf;
        }
        break;
    }
  }
  std::vector<Peak> want = peaks_from_states(r.states);
  if (want.size() != r.peaks.size()) return "peaks disagree with states";
  for (std::size_t k = 0; k < want.size(); ++k) {
    if (want[k].start != r.peaks[k].start || want[k].end != r.peaks[k].end) {
      return "peaks disagree with states";
    }
  }
  return "";
}

void random_oracle_instance(std::uint64_t seed, std::int64_t n_max,
                            CountSequence& data, LabelSet& labels) {
  std::mt19937_64 rng(seed);
  const std::int64_t n = 2 + std::int64_t(rng() % std::uint64_t(n_max - 1));
  data = CountSequence{};
  for (std::int64_t i = 0; i < n; ++i) {
    data.z.push_back(double(poisson_sample(rng, 3.0)));
    data.w.push_back(1.0);
  }
  std::vector<Label> labs;
  const std::uint64_t want = rng() % 3;  // 0, 1 or 2 labels
  std::int64_t next_lo = 1;
  for (std::uint64_t j = 0; j < want; ++j) {
    if (next_lo >= n) break;
    std::int64_t lo = next_lo + std::int64_t(rng() % 3);
    if (lo >= n) break;
    std::int64_t span = 1 + std::int64_t(rng() % 3);
    std::int64_t hi = std::min<std::int64_t>(lo + span, n);
    if (lo >= hi) break;
    Label lab;
    lab.lo = lo;
    lab.hi = hi;
    switch (rng() % 3) {
      case 0: lab.kind = LabelKind::noPeaks; break;
      case 1: lab.kind = LabelKind::peakStart; break;
      default: lab.kind = LabelKind::peakEnd; break;
    }
    labs.push_back(lab);
    next_lo = hi + 2;  // keep the strict gap between labels
  }
  labels = validate(std::move(labs), n);
}

OracleCheckReport oracle_check(std::int64_t trials, std::int64_t n_max,
                               std::uint64_t seed,
                               const std::vector<double>& lambdas) {
  if (n_max < 2 || n_max > 12) {
    throw_error(errc::validation, "n-max must be between 2 and 12");
  }
  OracleCheckReport rep;
  rep.trials = trials;
  char buf[256];
  for (std::int64_t t = 0; t < trials; ++t) {
    CountSequence data;
    LabelSet labels;
    random_oracle_instance(seed + std::uint64_t(t) * 1315423911u, n_max, data, labels);
    bool ok = true;
    for (double lambda : lambdas) {
      SegmentationResult r = fit(data, labels, lambda);
      CandidateModel m = oracle_solve(data, labels, lambda);
      double scale = std::max(1.0, std::fabs(m.penalized_cost));
      double gap = std::fabs(r.penalized_cost - m.penalized_cost) / scale;
      rep.worst_rel_gap = std::max(rep.worst_rel_gap, gap);
      std::string audit = verify_result_structure(r, labels);
      if (gap > 1e-8 || !audit.empty()) {
        ok = false;
        if (rep.first_failure.empty()) {
          std::snprintf(buf, sizeof buf,
                        "trial %lld lambda %g: rel gap %.3g%s%s", (long long)t,
                        lambda, gap, audit.empty() ? "" : ", audit: ",
                        audit.c_str());
          rep.first_failure = buf;
        }
      }
    }
    if (ok) ++rep.agreed;
  }
  return rep;
}

}  // namespace flopart
