#include "evflow/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "evflow/errors.hpp"

namespace evflow {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

bool looks_numeric(const std::string& field) {
  if (field.empty()) return false;
  char* end = nullptr;
  std::strtod(field.c_str(), &end);
  while (end && *end != '\0' && (*end == ' ' || *end == '\t' || *end == '\r'))
    ++end;
  return end && *end == '\0';
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Mat load_csv(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), Err::IoError, "cannot open data file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  size_t arity = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_fields(line);
    if (rows.empty() && line_no == 1 && !looks_numeric(fields[0])) {
      arity = fields.size();
      continue;  // header line
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (size_t j = 0; j < fields.size(); ++j) {
      require(looks_numeric(fields[j]), Err::ParseError,
              path + " line " + std::to_string(line_no) + " field " +
                  std::to_string(j + 1) + ": not a number: '" + fields[j] +
                  "'");
      row.push_back(std::strtod(fields[j].c_str(), nullptr));
    }
    if (arity == 0) arity = row.size();
    require(row.size() == arity, Err::ParseError,
            path + " line " + std::to_string(line_no) + ": expected " +
                std::to_string(arity) + " fields, got " +
                std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), Err::ParseError, path + ": no data rows");
  Mat m(rows.size(), arity);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < arity; ++j) m(i, j) = rows[i][j];
  check_finite(m, path);
  return m;
}

std::vector<Mat> load_aligned_csv(const std::vector<std::string>& paths) {
  require(!paths.empty(), Err::IoError, "no input paths given");
  std::vector<Mat> out;
  out.reserve(paths.size());
  for (const std::string& p : paths) out.push_back(load_csv(p));
  for (size_t i = 1; i < out.size(); ++i)
    require(out[i].rows() == out[0].rows(), Err::RowCountMismatch,
            paths[i] + " has " + std::to_string(out[i].rows()) +
                " rows but " + paths[0] + " has " +
                std::to_string(out[0].rows()) +
                "; views must describe the same points");
  return out;
}

void write_csv(const std::string& path, const Mat& m,
               const std::vector<std::string>& header) {
  std::ofstream f(path);
  require(f.good(), Err::IoError, "cannot write file: " + path);
  if (!header.empty()) {
    require(static_cast<Eigen::Index>(header.size()) == m.cols(),
            Err::DimensionMismatch, "one header field per column required");
    for (size_t j = 0; j < header.size(); ++j)
      f << (j ? "," : "") << header[j];
    f << "\n";
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      f << (j ? "," : "") << format_g17(m(i, j));
    f << "\n";
  }
  require(f.good(), Err::IoError, "failed while writing: " + path);
}

void JsonWriter::comma_if_needed() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!need_comma_.empty()) {
    if (need_comma_.back()) out_ += ",";
    need_comma_.back() = true;
  }
}

JsonWriter& JsonWriter::begin_object() {
  comma_if_needed();
  out_ += "{";
  need_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += "}";
  need_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  comma_if_needed();
  out_ += "[";
  need_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += "]";
  need_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  comma_if_needed();
  out_ += "\"" + k + "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  comma_if_needed();
  out_ += format_g17(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  comma_if_needed();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  comma_if_needed();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(uint64_t v) {
  comma_if_needed();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  comma_if_needed();
  out_ += "\"";
  for (char ch : v) {
    switch (ch) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default: out_ += ch;
    }
  }
  out_ += "\"";
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  comma_if_needed();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const Vec& v) {
  begin_array();
  for (Eigen::Index i = 0; i < v.size(); ++i) value(v(i));
  return end_array();
}

JsonWriter& JsonWriter::value_rows(const Mat& m) {
  begin_array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    value(Vec(m.row(i).transpose()));
  return end_array();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), Err::IoError, "cannot write file: " + path);
  f << content;
  require(f.good(), Err::IoError, "failed while writing: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), Err::IoError, "cannot open file: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

}  // namespace evflow
