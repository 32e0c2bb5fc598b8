#include "io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace flopart {

namespace {

std::string malformed(std::size_t line_no) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "malformed line %zu", line_no);
  return buf;
}

std::vector<std::string> tokens_of(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* c = s.c_str();
  char* end = nullptr;
  out = std::strtod(c, &end);
  return end != c && end == c + s.size();
}

bool parse_int(const std::string& s, std::int64_t& out) {
  const char* c = s.c_str();
  char* end = nullptr;
  out = std::strtoll(c, &end, 10);
  return end != c && end == c + s.size();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(errc::io, "cannot open file: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_error(errc::io, "cannot open file: " + path);
  return out;
}

void expect_header(const std::vector<std::string>& got,
                   const std::vector<std::string>& want, const std::string& what) {
  if (got != want) throw_error(errc::validation, "missing " + what + " header");
}

}  // namespace

std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

CoverageFormat coverage_format_from_name(const std::string& name) {
  if (name == "bedgraph") return CoverageFormat::bedgraph;
  if (name == "counts") return CoverageFormat::counts;
  throw_error(errc::validation, "unknown coverage format: " + name);
}

CountSequence read_coverage(const std::string& path, CoverageFormat format) {
  std::ifstream in = open_in(path);
  CountSequence seq;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> tok = tokens_of(std::move(line));
    if (format == CoverageFormat::counts) {
      double v;
      if (tok.size() != 1 || !parse_double(tok[0], v))
        throw_error(errc::validation, malformed(line_no));
      if (!(v >= 0.0)) throw_error(errc::validation, "negative count");
      seq.z.push_back(v);
      seq.w.push_back(1.0);
      continue;
    }
    std::int64_t lo, hi;
    double v;
    if (tok.size() != 4 || !parse_int(tok[1], lo) || !parse_int(tok[2], hi) ||
        !parse_double(tok[3], v) || hi <= lo)
      throw_error(errc::validation, malformed(line_no));
    if (!(v >= 0.0)) throw_error(errc::validation, "negative count");
    if (seq.z.empty()) seq.chrom = tok[0];
    else if (tok[0] != seq.chrom) throw_error(errc::validation, "multiple chromosomes");
    if (!seq.z.empty() && lo < seq.end.back())
      throw_error(errc::validation, "unsorted intervals");
    seq.z.push_back(v);
    seq.w.push_back(double(hi - lo));
    seq.start.push_back(lo);
    seq.end.push_back(hi);
  }
  if (seq.z.empty()) throw_error(errc::validation, "empty coverage file");
  return seq;
}

void write_coverage(const CountSequence& data, const std::string& path,
                    CoverageFormat format) {
  if (format == CoverageFormat::bedgraph && !data.has_coords())
    throw_error(errc::invalid_argument, "sequence has no coordinates");
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (format == CoverageFormat::counts) {
      if (data.w[i] != 1.0)
        throw_error(errc::invalid_argument, "counts format requires unit weights");
      out << fmt_double(data.z[i]) << '\n';
    } else {
      out << data.chrom << '\t' << data.start[i] << '\t' << data.end[i] << '\t'
          << fmt_double(data.z[i]) << '\n';
    }
  }
  if (!out) throw_error(errc::io, "write failed: " + path);
}

std::vector<GenomicRegion> read_genomic_labels(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw_error(errc::validation, "missing labels header");
  expect_header(tokens_of(std::move(line)), {"chrom", "start", "end", "type"}, "labels");
  std::vector<GenomicRegion> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> tok = tokens_of(std::move(line));
    GenomicRegion r;
    if (tok.size() != 4 || !parse_int(tok[1], r.start) || !parse_int(tok[2], r.end) ||
        r.end <= r.start)
      throw_error(errc::validation, malformed(line_no));
    r.chrom = tok[0];
    r.kind = label_kind_from_name(tok[3]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Label> read_index_labels(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw_error(errc::validation, "missing labels header");
  expect_header(tokens_of(std::move(line)), {"lo", "hi", "type"}, "labels");
  std::vector<Label> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> tok = tokens_of(std::move(line));
    Label lab;
    if (tok.size() != 3 || !parse_int(tok[0], lab.lo) || !parse_int(tok[1], lab.hi))
      throw_error(errc::validation, malformed(line_no));
    lab.kind = label_kind_from_name(tok[2]);
    out.push_back(lab);
  }
  return out;
}

void write_index_labels(const LabelSet& labels, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "lo\thi\ttype\n";
  for (const Label& lab : labels.labels)
    out << lab.lo << '\t' << lab.hi << '\t' << label_kind_name(lab.kind) << '\n';
  if (!out) throw_error(errc::io, "write failed: " + path);
}

void write_segments(const SegmentationResult& r, const CountSequence& data,
                    const std::string& path) {
  std::ofstream out = open_out(path);
  out << "chrom\tsegStart\tsegEnd\tmean\tstate\n";
  for (const Segment& s : r.segments) {
    if (data.has_coords()) {
      out << data.chrom << '\t' << data.start[std::size_t(s.start - 1)] << '\t'
          << data.end[std::size_t(s.end - 1)];
    } else {
      out << ".\t" << s.start << '\t' << s.end;
    }
    out << '\t' << fmt_double(s.mean) << '\t' << (s.state == 1 ? "peak" : "background")
        << '\n';
  }
  if (!out) throw_error(errc::io, "write failed: " + path);
}

std::vector<SegmentRow> read_segments(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw_error(errc::validation, "missing segments header");
  expect_header(tokens_of(std::move(line)), {"chrom", "segStart", "segEnd", "mean", "state"},
                "segments");
  std::vector<SegmentRow> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> tok = tokens_of(std::move(line));
    SegmentRow row;
    if (tok.size() != 5 || !parse_int(tok[1], row.start) || !parse_int(tok[2], row.end) ||
        !parse_double(tok[3], row.mean))
      throw_error(errc::validation, malformed(line_no));
    row.chrom = tok[0];
    if (tok[4] == "peak") row.state = 1;
    else if (tok[4] == "background") row.state = 0;
    else throw_error(errc::validation, malformed(line_no));
    out.push_back(std::move(row));
  }
  if (out.empty()) throw_error(errc::validation, "empty segments file");
  return out;
}

void write_summary(const SegmentationResult& r, double lambda, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "metric\tvalue\n";
  out << "total_loss\t" << fmt_double(r.total_loss) << '\n';
  out << "penalized_cost\t" << fmt_double(r.penalized_cost) << '\n';
  out << "penalty\t" << fmt_double(lambda) << '\n';
  out << "changes\t" << r.change_count << '\n';
  if (!out) throw_error(errc::io, "write failed: " + path);
}

}  // namespace flopart
