#include "synthetic.hpp"

#include <algorithm>
#include <random>

#include "error.hpp"
#include "rng.hpp"

namespace flopart {

namespace {

Label mk(std::int64_t lo, std::int64_t hi, LabelKind kind) {
  Label lab;
  lab.lo = lo;
  lab.hi = hi;
  lab.kind = kind;
  return lab;
}

}  // namespace

SyntheticData generate_synthetic(std::int64_t n, std::int64_t peak_count,
                                 double background_mean, double peak_mean,
                                 std::uint64_t seed) {
  if (n < 1) throw_error(errc::invalid_argument, "data length must be >= 1");
  if (peak_count < 0) throw_error(errc::invalid_argument, "peak count must be >= 0");
  if (!(background_mean > 0.0) || !(peak_mean > background_mean))
    throw_error(errc::invalid_argument, "means must satisfy peak > background > 0");

  SyntheticData out;
  std::vector<Label> labels;
  if (peak_count == 0) {
    if (n < 2) throw_error(errc::validation, "peaks do not fit");
    labels.push_back(mk(1, n, LabelKind::noPeaks));
  } else {
    // Even layout: peak_count peaks of width pw separated by gaps of at
    // least 3 background points, which is exactly the room the two-point
    // edge labels need to stay separated.
    std::int64_t pw = std::max<std::int64_t>(3, n / (4 * peak_count));
    std::int64_t gap = (n - peak_count * pw) / (peak_count + 1);
    if (gap < 3) throw_error(errc::validation, "peaks do not fit");
    for (std::int64_t p = 0; p < peak_count; ++p) {
      std::int64_t ps = (p + 1) * gap + p * pw + 1;
      std::int64_t pe = ps + pw - 1;
      out.truth.push_back(Peak{ps, pe});
      labels.push_back(mk(ps - 1, ps, LabelKind::peakStart));
      labels.push_back(mk(pe, pe + 1, LabelKind::peakEnd));
    }
    // noPeaks labels wherever a gap leaves two points clear of the edge
    // labels on both sides
    if (out.truth.front().start - 3 >= 2)
      labels.push_back(mk(1, out.truth.front().start - 3, LabelKind::noPeaks));
    for (std::int64_t p = 1; p < peak_count; ++p) {
      std::int64_t lo = out.truth[std::size_t(p - 1)].end + 3;
      std::int64_t hi = out.truth[std::size_t(p)].start - 3;
      if (hi >= lo + 1) labels.push_back(mk(lo, hi, LabelKind::noPeaks));
    }
    if (n >= out.truth.back().end + 4)
      labels.push_back(mk(out.truth.back().end + 3, n, LabelKind::noPeaks));
  }

  out.truth_mean.assign(std::size_t(n), background_mean);
  for (const Peak& p : out.truth)
    for (std::int64_t i = p.start; i <= p.end; ++i)
      out.truth_mean[std::size_t(i - 1)] = peak_mean;

  std::mt19937_64 rng(seed);
  std::vector<double> z(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < z.size(); ++i)
    z[i] = double(poisson_sample(rng, out.truth_mean[i]));
  out.data = CountSequence::from_values(std::move(z));
  out.labels = validate(std::move(labels), n);
  return out;
}

}  // namespace flopart
