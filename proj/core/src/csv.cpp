#include "gmsm/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

namespace gmsm {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(std::string path, const std::vector<std::string>& header)
    : path_(std::move(path)), tmp_(path_ + ".partial") {
  const auto parent = std::filesystem::path(path_).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  out_.open(tmp_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open " + tmp_ + " for writing");
  row(header);
  rows_ = 0;
}

CsvWriter::~CsvWriter() {
  if (!closed_ && out_.is_open()) out_.close();  // leaves the .partial marker
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  line += "\r\n";
  out_ << line;
  out_.flush();
  if (!out_) throw IoError("write failed on " + tmp_ + " after " + std::to_string(rows_) + " rows");
  ++rows_;
}

void CsvWriter::close() {
  if (closed_) return;
  out_.close();
  if (out_.fail()) throw IoError("closing " + tmp_ + " failed");
  std::error_code ec;
  std::filesystem::rename(tmp_, path_, ec);
  if (ec) throw IoError("cannot move " + tmp_ + " to " + path_ + ": " + ec.message());
  closed_ = true;
}

std::vector<double> read_real_column(const std::string& path, std::string_view column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  auto strip = [](std::string& s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && s[b] == ' ') ++b;
    s.erase(0, b);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  };
  if (!std::getline(in, line)) throw std::invalid_argument(path + " is empty");
  strip(line);
  if (line != column)
    throw std::invalid_argument(path + ": expected header '" + std::string(column) + "', got '" + line + "'");
  std::vector<double> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip(line);
    if (line.empty()) continue;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": not a finite real: '" + line + "'");
    out.push_back(v);
  }
  if (in.bad()) throw IoError("read error on " + path);
  return out;
}

}  // namespace gmsm
