#ifndef HMFLOW_CSVIO_HPP
#define HMFLOW_CSVIO_HPP

#include <fstream>
#include <string>
#include <vector>

namespace hmflow {

// RFC-4180 CSV writer: CRLF records, quoting only when needed, numbers
// rendered with %.17g so artifacts are byte-stable across runs.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void row(const std::vector<std::string>& fields);
  static std::string num(double v);
  static std::string num(long long v);

 private:
  std::ofstream out_;
};

std::string format_double(double v);  // %.17g

}  // namespace hmflow

#endif
