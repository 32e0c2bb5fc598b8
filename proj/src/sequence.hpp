#ifndef FLOPART_SEQUENCE_HPP
#define FLOPART_SEQUENCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace flopart {

// Weighted non-negative data sequence. Genomic coordinates are optional:
// coverage files carry half-open intervals [start, end) per data point,
// index-based inputs leave the coordinate vectors empty.
struct CountSequence {
  std::vector<double> z;  // values, z[i] >= 0
  std::vector<double> w;  // weights, w[i] > 0, same length as z

  std::string chrom;
  std::vector<std::int64_t> start;
  std::vector<std::int64_t> end;

  std::size_t size() const { return z.size(); }
  bool has_coords() const { return !start.empty(); }

  static CountSequence from_values(std::vector<double> values) {
    CountSequence s;
    s.w.assign(values.size(), 1.0);
    s.z = std::move(values);
    return s;
  }
};

}  // namespace flopart

#endif
