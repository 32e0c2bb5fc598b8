#ifndef FLOPART_IO_HPP
#define FLOPART_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dp.hpp"
#include "labels.hpp"
#include "sequence.hpp"

namespace flopart {

enum class CoverageFormat : std::int8_t { bedgraph, counts };

CoverageFormat coverage_format_from_name(const std::string& name);

// bedgraph: headerless rows `chrom start end count`, half-open intervals,
// weight = interval width, one chromosome per file. counts: one value per
// line, unit weights. Content problems raise validation errors
// ("malformed line <k>", "unsorted intervals", "negative count").
CountSequence read_coverage(const std::string& path, CoverageFormat format);

// Inverse of read_coverage. bedgraph needs coordinates; counts needs unit
// weights (the format cannot carry anything else).
void write_coverage(const CountSequence& data, const std::string& path,
                    CoverageFormat format);

// Labels file with header. Genomic mode: `chrom start end type` with
// half-open regions; index mode: `lo hi type`, 1-based inclusive.
std::vector<GenomicRegion> read_genomic_labels(const std::string& path);
std::vector<Label> read_index_labels(const std::string& path);
void write_index_labels(const LabelSet& labels, const std::string& path);

// One row per fitted segment: `chrom segStart segEnd mean state`. With
// coordinates the bounds are the genomic span (half-open); without, chrom
// is "." and the bounds are 1-based inclusive indices.
struct SegmentRow {
  std::string chrom;
  std::int64_t start = 0;
  std::int64_t end = 0;
  double mean = 0.0;
  std::int8_t state = 0;
};

void write_segments(const SegmentationResult& r, const CountSequence& data,
                    const std::string& path);
std::vector<SegmentRow> read_segments(const std::string& path);

// Fit metrics as `metric value` rows: total_loss, penalized_cost, penalty,
// changes.
void write_summary(const SegmentationResult& r, double lambda, const std::string& path);

// Shortest decimal form that parses back to exactly the same double.
std::string fmt_double(double v);

}  // namespace flopart

#endif
