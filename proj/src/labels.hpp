#ifndef FLOPART_LABELS_HPP
#define FLOPART_LABELS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sequence.hpp"

namespace flopart {

// Expert annotation kinds. noPeaks forbids the peak state anywhere in the
// labeled region; peakStart requires exactly one up change inside it;
// peakEnd requires exactly one down change.
enum class LabelKind : std::int8_t { noPeaks = 0, peakStart = +1, peakEnd = -1 };

const char* label_kind_name(LabelKind k);
LabelKind label_kind_from_name(const std::string& name);  // throws errc::validation

// A labeled index region [lo, hi], 1-based inclusive, spanning at least two
// data points. source_region keeps the genomic interval the label came from
// (half-open [start, end)) when there is one.
struct Label {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  LabelKind kind = LabelKind::noPeaks;

  bool has_region = false;
  std::string chrom;
  std::int64_t region_start = 0;
  std::int64_t region_end = 0;
};

// Validated, sorted labels for a sequence of length n. Consecutive labels
// keep a strict gap (hi_j < lo_{j+1}); touching labels are rejected.
struct LabelSet {
  std::vector<Label> labels;
  std::int64_t n = 0;

  bool empty() const { return labels.empty(); }
  std::size_t size() const { return labels.size(); }
};

// Sort, range-check, and gap-check raw labels. Throws errc::validation with
// "label out of range", "label spans fewer than two points", or
// "labels overlap or touch (label j and label j+1)".
LabelSet validate(std::vector<Label> labels, std::int64_t n);

// Where an index sits relative to the labels.
enum class LabelPos : std::int8_t { unlabeled, first, interior, last };

struct LabelQuery {
  LabelPos pos = LabelPos::unlabeled;
  std::size_t label_id = 0;       // index into LabelSet::labels, valid unless unlabeled
  LabelKind kind = LabelKind::noPeaks;
};

// Amortized-constant label lookup for a left-to-right sweep over i = 1..n.
// Queries may also move backwards; that costs a rescan from the front.
class LabelCursor {
 public:
  explicit LabelCursor(const LabelSet& set) : set_(&set) {}
  LabelQuery get_label(std::int64_t i);

 private:
  const LabelSet* set_;
  std::size_t next_ = 0;  // first label with hi >= last queried i
  std::int64_t last_i_ = 0;
};

// Convert genomic label regions (half-open [start, end)) to index labels:
// a label covers the data points whose interval intersects the region.
// Throws errc::validation: "chromosome mismatch", "label covers no data",
// "label covers a single data point".
struct GenomicRegion {
  std::string chrom;
  std::int64_t start = 0;
  std::int64_t end = 0;
  LabelKind kind = LabelKind::noPeaks;
};

std::vector<Label> map_genomic_to_indices(const std::vector<GenomicRegion>& regions,
                                          const CountSequence& data);

}  // namespace flopart

#endif
