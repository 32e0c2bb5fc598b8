#ifndef FLOPART_SYNTHETIC_HPP
#define FLOPART_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "dp.hpp"
#include "labels.hpp"
#include "sequence.hpp"

namespace flopart {

struct SyntheticData {
  CountSequence data;
  LabelSet labels;
  std::vector<Peak> truth;         // planted peak index ranges
  std::vector<double> truth_mean;  // generating mean per point
};

// Poisson counts with evenly spaced planted peaks. Every peak gets a
// two-point peakStart label on its left edge and a two-point peakEnd label
// on its right edge; gaps wide enough for a separated noPeaks label get
// one. peak_count = 0 yields pure background with a single noPeaks label
// over everything. Byte-identical output for equal arguments.
// Throws "peaks do not fit" when the layout cannot hold the labels.
SyntheticData generate_synthetic(std::int64_t n, std::int64_t peak_count,
                                 double background_mean, double peak_mean,
                                 std::uint64_t seed);

}  // namespace flopart

#endif
