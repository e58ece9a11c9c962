#include "hmflow/csvio.hpp"

#include <cstdio>
#include <stdexcept>

namespace hmflow {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    const std::string& f = fields[i];
    const bool quote = f.find_first_of(",\"\r\n") != std::string::npos;
    if (!quote) {
      out_ << f;
    } else {
      out_ << '"';
      for (char c : f) {
        if (c == '"') out_ << '"';
        out_ << c;
      }
      out_ << '"';
    }
  }
  out_ << "\r\n";
}

std::string CsvWriter::num(double v) { return format_double(v); }

std::string CsvWriter::num(long long v) { return std::to_string(v); }

}  // namespace hmflow
