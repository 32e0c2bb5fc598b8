#include "labels.hpp"

#include <algorithm>
#include <cstdio>

#include "error.hpp"

namespace flopart {

const char* label_kind_name(LabelKind k) {
  switch (k) {
    case LabelKind::noPeaks: return "noPeaks";
    case LabelKind::peakStart: return "peakStart";
    case LabelKind::peakEnd: return "peakEnd";
  }
  return "?";
}

LabelKind label_kind_from_name(const std::string& name) {
  if (name == "noPeaks") return LabelKind::noPeaks;
  if (name == "peakStart") return LabelKind::peakStart;
  if (name == "peakEnd") return LabelKind::peakEnd;
  throw_error(errc::validation, "unknown label type: " + name);
}

LabelSet validate(std::vector<Label> labels, std::int64_t n) {
  std::sort(labels.begin(), labels.end(),
            [](const Label& a, const Label& b) { return a.lo < b.lo; });
  char buf[128];
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const Label& lab = labels[j];
    if (lab.lo < 1 || lab.hi > n) {
      std::snprintf(buf, sizeof buf, "label out of range: [%lld, %lld] with n=%lld",
                    (long long)lab.lo, (long long)lab.hi, (long long)n);
      throw_error(errc::validation, buf);
    }
    if (lab.lo >= lab.hi) {
      std::snprintf(buf, sizeof buf,
                    "label spans fewer than two points: [%lld, %lld]",
                    (long long)lab.lo, (long long)lab.hi);
      throw_error(errc::validation, buf);
    }
    if (j > 0 && labels[j - 1].hi >= lab.lo) {
      std::snprintf(buf, sizeof buf,
                    "labels overlap or touch (label %zu and label %zu)", j, j + 1);
      throw_error(errc::validation, buf);
    }
  }
  LabelSet set;
  set.labels = std::move(labels);
  set.n = n;
  return set;
}

LabelQuery LabelCursor::get_label(std::int64_t i) {
  if (i < last_i_) next_ = 0;  // backwards query: restart the sweep
  last_i_ = i;
  const std::vector<Label>& labs = set_->labels;
  while (next_ < labs.size() && labs[next_].hi < i) ++next_;
  LabelQuery q;
  if (next_ >= labs.size() || i < labs[next_].lo) return q;
  const Label& lab = labs[next_];
  q.label_id = next_;
  q.kind = lab.kind;
  if (i == lab.lo) q.pos = LabelPos::first;
  else if (i == lab.hi) q.pos = LabelPos::last;
  else q.pos = LabelPos::interior;
  return q;
}

std::vector<Label> map_genomic_to_indices(const std::vector<GenomicRegion>& regions,
                                          const CountSequence& data) {
  if (!data.has_coords()) {
    throw_error(errc::validation, "data has no genomic coordinates");
  }
  std::vector<Label> out;
  out.reserve(regions.size());
  char buf[160];
  for (const GenomicRegion& r : regions) {
    if (r.chrom != data.chrom) {
      std::snprintf(buf, sizeof buf, "chromosome mismatch: label on %s, data on %s",
                    r.chrom.c_str(), data.chrom.c_str());
      throw_error(errc::validation, buf);
    }
    // data point k (0-based) covers [start[k], end[k]); find intersecting block
    std::int64_t lo = 0, hi = -1;
    bool found = false;
    for (std::size_t k = 0; k < data.size(); ++k) {
      bool hit = data.start[k] < r.end && r.start < data.end[k];
      if (hit && !found) { lo = std::int64_t(k) + 1; found = true; }
      if (hit) hi = std::int64_t(k) + 1;
    }
    if (!found) {
      std::snprintf(buf, sizeof buf, "label covers no data: %s:%lld-%lld",
                    r.chrom.c_str(), (long long)r.start, (long long)r.end);
      throw_error(errc::validation, buf);
    }
    if (lo == hi) {
      std::snprintf(buf, sizeof buf, "label covers a single data point: %s:%lld-%lld",
                    r.chrom.c_str(), (long long)r.start, (long long)r.end);
      throw_error(errc::validation, buf);
    }
    Label lab;
    lab.lo = lo;
    lab.hi = hi;
    lab.kind = r.kind;
    lab.has_region = true;
    lab.chrom = r.chrom;
    lab.region_start = r.start;
    lab.region_end = r.end;
    out.push_back(lab);
  }
  return out;
}

}  // namespace flopart
