#pragma once

#include <string>
#include <vector>

#include "evflow/linalg.hpp"

namespace evflow {

// Shortest exact decimal form of a double (17 significant digits).
std::string format_g17(double v);

// Comma-separated numeric table. An optional single header line is skipped
// when its first field is not a number. Rows must agree in arity.
Mat load_csv(const std::string& path);

// Loads several tables and checks that they describe the same points.
std::vector<Mat> load_aligned_csv(const std::vector<std::string>& paths);

void write_csv(const std::string& path, const Mat& m,
               const std::vector<std::string>& header = {});

// Tiny ordered JSON emitter; enough for the diagram report and fully
// deterministic (doubles via format_g17).
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long long v);
  JsonWriter& value(uint64_t v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(bool v);
  JsonWriter& value(const Vec& v);
  JsonWriter& value_rows(const Mat& m);
  std::string str() const { return out_; }

 private:
  void comma_if_needed();
  std::string out_;
  std::vector<bool> need_comma_;
  bool pending_key_ = false;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace evflow
