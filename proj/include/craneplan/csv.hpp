#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace craneplan {

/// Fixed-schema CSV writer. One header row, then one record per event/step.
/// Numbers are printed with %.12g so independent re-aggregation matches to
/// 1e-9.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns)
      : out_(path), n_cols_(columns.size()) {
    for (size_t i = 0; i < columns.size(); ++i) {
      if (i) out_ << ',';
      out_ << columns[i];
    }
    out_ << '\n';
  }

  bool ok() const { return out_.good(); }

  CsvWriter& field(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return field_raw(buf);
  }

  CsvWriter& field(int v) { return field_raw(std::to_string(v)); }
  CsvWriter& field(long v) { return field_raw(std::to_string(v)); }
  CsvWriter& field(size_t v) { return field_raw(std::to_string(v)); }
  CsvWriter& field(const std::string& v) { return field_raw(v); }
  CsvWriter& field(const char* v) { return field_raw(v); }

  void end_row() {
    out_ << '\n';
    col_ = 0;
  }

 private:
  CsvWriter& field_raw(const std::string& s) {
    if (col_) out_ << ',';
    out_ << s;
    ++col_;
    return *this;
  }

  std::ofstream out_;
  size_t n_cols_;
  size_t col_ = 0;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace craneplan
