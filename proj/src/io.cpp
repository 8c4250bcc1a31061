#include "uiss/io.hpp"

#include "uiss/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace uiss::io {

std::string format_real(double x) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::vector<std::string_view> split_fields(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_real(std::string_view token, const std::string& source, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw ParseError(source, line, "not a finite number: '" + std::string(token) + "'");
  }
  return value;
}

long long parse_integer(std::string_view token, const std::string& source, std::size_t line) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(source, line, "not an integer: '" + std::string(token) + "'");
  }
  return value;
}

std::size_t parse_index(std::string_view token, const std::string& source, std::size_t line) {
  const long long value = parse_integer(token, source, line);
  if (value < 0) throw ParseError(source, line, "negative index: '" + std::string(token) + "'");
  return static_cast<std::size_t>(value);
}

void write_matrix(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_real(a(i, j));
    }
    out << '\n';
  }
}

Matrix parse_matrix(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  Eigen::Index rows = -1;
  Eigen::Index cols = -1;
  Matrix a;
  Eigen::Index filled = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (rows < 0) {
      if (fields.size() != 2) throw ParseError(source, lineno, "expected header 'rows cols'");
      rows = static_cast<Eigen::Index>(parse_index(fields[0], source, lineno));
      cols = static_cast<Eigen::Index>(parse_index(fields[1], source, lineno));
      if (rows == 0 || cols == 0) throw ParseError(source, lineno, "matrix dimensions must be positive");
      a.resize(rows, cols);
      continue;
    }
    if (filled == rows) throw ParseError(source, lineno, "more rows than declared");
    if (static_cast<Eigen::Index>(fields.size()) != cols) {
      throw ParseError(source, lineno,
                       "expected " + std::to_string(cols) + " values, got " + std::to_string(fields.size()));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      a(filled, j) = parse_real(fields[static_cast<std::size_t>(j)], source, lineno);
    }
    ++filled;
  }
  if (rows < 0) throw ParseError(source, lineno, "missing header");
  if (filled != rows) {
    throw ParseError(source, lineno,
                     "expected " + std::to_string(rows) + " rows, got " + std::to_string(filled));
  }
  return a;
}

void write_labels(std::ostream& out, const std::vector<int>& labels) {
  for (int y : labels) out << y << '\n';
}

std::vector<int> parse_labels(std::istream& in, const std::string& source) {
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 1) throw ParseError(source, lineno, "expected one label per line");
    labels.push_back(static_cast<int>(parse_integer(fields[0], source, lineno)));
  }
  return labels;
}

void write_indices(std::ostream& out, const std::vector<std::size_t>& indices) {
  for (std::size_t i : indices) out << i << '\n';
}

std::vector<std::size_t> parse_indices(std::istream& in, const std::string& source) {
  std::vector<std::size_t> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 1) throw ParseError(source, lineno, "expected one index per line");
    out.push_back(parse_index(fields[0], source, lineno));
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_matrix(in, path);
}

std::vector<int> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_labels(in, path);
}

std::vector<std::size_t> read_indices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_indices(in, path);
}

}  // namespace uiss::io
