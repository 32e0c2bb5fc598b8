#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "flopart/flopart.h"

namespace {

std::filesystem::path scratch() {
  static std::filesystem::path dir = [] {
    std::filesystem::path p = std::filesystem::temp_directory_path() / "flopart_capi_test";
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  std::string path = (scratch() / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("data handle round trip and validation") {
  double values[] = {1, 5, 1};
  flopart_data* d = nullptr;
  REQUIRE(flopart_data_create(values, nullptr, 3, &d) == FLOPART_OK);
  CHECK(flopart_data_length(d) == 3);
  CHECK(flopart_data_total_weight(d) == 3.0);
  flopart_data_destroy(d);

  double weights[] = {2, 2, 4};
  REQUIRE(flopart_data_create(values, weights, 3, &d) == FLOPART_OK);
  CHECK(flopart_data_total_weight(d) == 8.0);
  flopart_data_destroy(d);

  double bad[] = {1, -1};
  CHECK(flopart_data_create(bad, nullptr, 2, &d) == FLOPART_ERR_INVALID);
  CHECK(d == nullptr);
  CHECK(std::strcmp(flopart_last_error(), "negative value") == 0);
  CHECK(flopart_data_create(values, nullptr, 0, &d) == FLOPART_ERR_INVALID);
  double badw[] = {1, 0};
  double v2[] = {1, 1};
  CHECK(flopart_data_create(v2, badw, 2, &d) == FLOPART_ERR_INVALID);
}

TEST_CASE("fit through the C surface matches the known model") {
  double values[] = {1, 5, 1};
  flopart_data* d = nullptr;
  REQUIRE(flopart_data_create(values, nullptr, 3, &d) == FLOPART_OK);
  flopart_result* r = nullptr;
  REQUIRE(flopart_fit(d, nullptr, 1.0, &r) == FLOPART_OK);
  REQUIRE(flopart_result_segment_count(r) == 3);
  int64_t s, e;
  double mean;
  int32_t state;
  REQUIRE(flopart_result_segment(r, 1, &s, &e, &mean, &state) == FLOPART_OK);
  CHECK(s == 2);
  CHECK(e == 2);
  CHECK(mean == doctest::Approx(5.0));
  CHECK(state == 1);
  CHECK(flopart_result_penalized_cost(r) == doctest::Approx(0.952810437829498));
  CHECK(flopart_result_total_loss(r) ==
        doctest::Approx(0.952810437829498 - 2.0));
  CHECK(flopart_result_change_count(r) == 2);
  REQUIRE(flopart_result_peak_count(r) == 1);
  REQUIRE(flopart_result_peak(r, 0, &s, &e) == FLOPART_OK);
  CHECK(s == 2);
  CHECK(e == 2);
  int8_t states[3];
  REQUIRE(flopart_result_states(r, states) == FLOPART_OK);
  CHECK(states[0] == 0);
  CHECK(states[1] == 1);
  CHECK(states[2] == 0);
  CHECK(flopart_result_segment(r, 7, &s, &e, &mean, &state) == FLOPART_ERR_INVALID);
  flopart_result_destroy(r);
  flopart_data_destroy(d);
}

TEST_CASE("labels gate the fit and score it") {
  double values[] = {1, 5, 1};
  flopart_data* d = nullptr;
  REQUIRE(flopart_data_create(values, nullptr, 3, &d) == FLOPART_OK);
  int64_t lo[] = {1};
  int64_t hi[] = {3};
  int32_t kind[] = {FLOPART_NO_PEAKS};
  flopart_labels* l = nullptr;
  REQUIRE(flopart_labels_create(lo, hi, kind, 1, 3, &l) == FLOPART_OK);
  CHECK(flopart_labels_count(l) == 1);
  int64_t glo, ghi;
  int32_t gkind;
  REQUIRE(flopart_labels_get(l, 0, &glo, &ghi, &gkind) == FLOPART_OK);
  CHECK(glo == 1);
  CHECK(ghi == 3);
  CHECK(gkind == FLOPART_NO_PEAKS);

  flopart_result* r = nullptr;
  REQUIRE(flopart_fit(d, l, 1.0, &r) == FLOPART_OK);
  CHECK(flopart_result_segment_count(r) == 1);
  CHECK(flopart_result_peak_count(r) == 0);

  int32_t outcomes[1] = {99};
  int64_t fp = -1, fn = -1, pfp = -1, pfn = -1;
  REQUIRE(flopart_label_errors(r, l, outcomes, &fp, &fn, &pfp, &pfn) == FLOPART_OK);
  CHECK(outcomes[0] == FLOPART_CORRECT);
  CHECK(fp == 0);
  CHECK(fn == 0);
  CHECK(pfp == 1);
  CHECK(pfn == 0);
  flopart_result_destroy(r);
  flopart_labels_destroy(l);

  // overlapping labels are rejected with a validation status
  int64_t lo2[] = {1, 2};
  int64_t hi2[] = {2, 3};
  int32_t kind2[] = {FLOPART_NO_PEAKS, FLOPART_NO_PEAKS};
  CHECK(flopart_labels_create(lo2, hi2, kind2, 2, 3, &l) == FLOPART_ERR_VALIDATION);
  CHECK(l == nullptr);
  CHECK(std::string(flopart_last_error()).find("overlap") != std::string::npos);
  flopart_data_destroy(d);
}

TEST_CASE("labels force a peak even against flat data") {
  // noPeaks pins 1..3 down, peakEnd needs the up state at 4 and the one
  // down change inside the label, so a single-point peak is forced
  double values[] = {2, 2, 2, 2, 2, 2};
  flopart_data* d = nullptr;
  REQUIRE(flopart_data_create(values, nullptr, 6, &d) == FLOPART_OK);
  int64_t lo[] = {1, 4};
  int64_t hi[] = {3, 5};
  int32_t kind[] = {FLOPART_NO_PEAKS, FLOPART_PEAK_END};
  flopart_labels* l = nullptr;
  REQUIRE(flopart_labels_create(lo, hi, kind, 2, 6, &l) == FLOPART_OK);
  flopart_result* r = nullptr;
  REQUIRE(flopart_fit(d, l, 1.0, &r) == FLOPART_OK);
  REQUIRE(flopart_result_peak_count(r) == 1);
  int64_t ps, pe;
  REQUIRE(flopart_result_peak(r, 0, &ps, &pe) == FLOPART_OK);
  CHECK(ps == 4);
  CHECK(pe == 4);
  int64_t fp = -1, fn = -1;
  REQUIRE(flopart_label_errors(r, l, nullptr, &fp, &fn, nullptr, nullptr) == FLOPART_OK);
  CHECK(fp == 0);
  CHECK(fn == 0);
  flopart_result_destroy(r);
  flopart_labels_destroy(l);
  flopart_data_destroy(d);
}

TEST_CASE("file reading and result writing work through handles") {
  std::string counts = write_file("data.counts", "1\n5\n1\n");
  flopart_data* d = nullptr;
  REQUIRE(flopart_data_read(counts.c_str(), FLOPART_FORMAT_COUNTS, &d) == FLOPART_OK);
  CHECK(flopart_data_length(d) == 3);

  std::string labels_path = write_file("labels.tsv", "lo\thi\ttype\n1\t3\tnoPeaks\n");
  flopart_labels* l = nullptr;
  REQUIRE(flopart_labels_read(labels_path.c_str(), 1, d, &l) == FLOPART_OK);
  CHECK(flopart_labels_count(l) == 1);

  flopart_result* r = nullptr;
  REQUIRE(flopart_fit(d, l, 1.0, &r) == FLOPART_OK);
  std::string seg = (scratch() / "segments.tsv").string();
  std::string sum = (scratch() / "summary.tsv").string();
  REQUIRE(flopart_result_write(r, d, 1.0, seg.c_str(), sum.c_str()) == FLOPART_OK);
  std::ifstream segf(seg);
  std::string header;
  std::getline(segf, header);
  CHECK(header == "chrom\tsegStart\tsegEnd\tmean\tstate");

  flopart_result_destroy(r);
  flopart_labels_destroy(l);
  flopart_data_destroy(d);

  CHECK(flopart_data_read((scratch() / "nope").string().c_str(), FLOPART_FORMAT_COUNTS,
                          &d) == FLOPART_ERR_IO);
  std::string bad = write_file("bad.counts", "1\nx\n");
  CHECK(flopart_data_read(bad.c_str(), FLOPART_FORMAT_COUNTS, &d) ==
        FLOPART_ERR_VALIDATION);
  CHECK(std::strcmp(flopart_last_error(), "malformed line 2") == 0);
}

TEST_CASE("genomic labels map through the data coordinates") {
  std::string bg = write_file("cov.bedgraph",
                              "chr1\t0\t10\t1\nchr1\t10\t20\t5\nchr1\t20\t30\t1\n");
  flopart_data* d = nullptr;
  REQUIRE(flopart_data_read(bg.c_str(), FLOPART_FORMAT_BEDGRAPH, &d) == FLOPART_OK);
  std::string labels_path =
      write_file("glabels.tsv", "chrom\tstart\tend\ttype\nchr1\t5\t25\tnoPeaks\n");
  flopart_labels* l = nullptr;
  REQUIRE(flopart_labels_read(labels_path.c_str(), 0, d, &l) == FLOPART_OK);
  int64_t lo, hi;
  int32_t kind;
  REQUIRE(flopart_labels_get(l, 0, &lo, &hi, &kind) == FLOPART_OK);
  CHECK(lo == 1);
  CHECK(hi == 3);
  flopart_labels_destroy(l);
  flopart_data_destroy(d);
}

TEST_CASE("bic helper and synthetic generation are exposed") {
  double out = 0.0;
  REQUIRE(flopart_bic_log_penalty(1000.0, &out) == FLOPART_OK);
  CHECK(out == doctest::Approx(1.9326447339160655).epsilon(1e-12));
  CHECK(flopart_bic_log_penalty(1.0, &out) == FLOPART_ERR_INVALID);

  flopart_data* d = nullptr;
  flopart_labels* l = nullptr;
  REQUIRE(flopart_synth_create(200, 2, 1.0, 10.0, 7, &d, &l) == FLOPART_OK);
  REQUIRE(d != nullptr);
  REQUIRE(l != nullptr);
  CHECK(flopart_data_length(d) == 200);
  CHECK(flopart_labels_count(l) >= 4);
  // the generator is deterministic through this surface too
  flopart_data* d2 = nullptr;
  REQUIRE(flopart_synth_create(200, 2, 1.0, 10.0, 7, &d2, nullptr) == FLOPART_OK);
  CHECK(flopart_data_total_weight(d2) == flopart_data_total_weight(d));
  flopart_result* r = nullptr;
  REQUIRE(flopart_fit(d, l, std::log(200.0), &r) == FLOPART_OK);
  int64_t fp = -1, fn = -1;
  REQUIRE(flopart_label_errors(r, l, nullptr, &fp, &fn, nullptr, nullptr) == FLOPART_OK);
  CHECK(fp == 0);
  CHECK(fn == 0);
  flopart_result_destroy(r);
  flopart_data_destroy(d);
  flopart_data_destroy(d2);
  flopart_labels_destroy(l);

  CHECK(flopart_synth_create(10, 5, 1.0, 10.0, 1, &d, &l) == FLOPART_ERR_VALIDATION);
  CHECK(std::strcmp(flopart_last_error(), "peaks do not fit") == 0);
}

TEST_CASE("oracle agreement trials run through the C surface") {
  double penalties[] = {0.0, 0.5, 2.0};
  int64_t agreed = 0;
  double worst = -1.0;
  char msg[256];
  REQUIRE(flopart_oracle_check(12, 8, 997, penalties, 3, &agreed, &worst, msg,
                               sizeof msg) == FLOPART_OK);
  CHECK(agreed == 12);
  CHECK(worst <= 1e-8);
  CHECK(msg[0] == '\0');
  CHECK(flopart_oracle_check(5, 40, 1, penalties, 3, &agreed, &worst, msg, sizeof msg) ==
        FLOPART_ERR_TOO_LARGE);
}

TEST_CASE("null handles are rejected, not dereferenced") {
  CHECK(flopart_data_length(nullptr) == 0);
  CHECK(flopart_result_segment_count(nullptr) == 0);
  CHECK(flopart_result_peak_count(nullptr) == 0);
  flopart_result* r = nullptr;
  CHECK(flopart_fit(nullptr, nullptr, 1.0, &r) == FLOPART_ERR_INVALID);
  int8_t buf[1];
  CHECK(flopart_result_states(nullptr, buf) == FLOPART_ERR_INVALID);
  double values[] = {1.0};
  CHECK(flopart_data_create(values, nullptr, 1, nullptr) == FLOPART_ERR_INVALID);
  flopart_data_destroy(nullptr);
  flopart_labels_destroy(nullptr);
  flopart_result_destroy(nullptr);
}
