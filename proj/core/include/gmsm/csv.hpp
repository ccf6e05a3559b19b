#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace gmsm {

// %.17g, with nan/inf spelled the way Python's float() reads them.
std::string format_real(double v);
// RFC 4180 quoting: fields with a comma, quote, CR or LF are quoted.
std::string csv_field(std::string_view s);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes to "<path>.partial" and renames on close, so a failed run leaves the
// .partial file behind as the marker.
class CsvWriter {
 public:
  CsvWriter(std::string path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& fields);
  void close();
  std::size_t rows_written() const { return rows_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream out_;
  std::size_t rows_ = 0;
  bool closed_ = false;
};

// Single column of reals under the header `column`.
std::vector<double> read_real_column(const std::string& path, std::string_view column = "x");

}  // namespace gmsm
