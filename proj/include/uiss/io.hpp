#pragma once

// Plain-text file formats shared by the CLI and tests.
//
// Matrix:  header "rows cols", then one whitespace-separated row per line.
//          Reals are written with 17 significant digits so a write/read
//          cycle is bit-exact.
// Labels:  one integer per line; -1 marks an outlier / invalid label.
// Lists:   one value per line (indices, scores, flags).
// '#' starts a comment in every format.

#include "uiss/numerics.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace uiss::io {

std::string format_real(double x);

// Whitespace-split fields of a line with any '#' comment removed.
std::vector<std::string_view> split_fields(std::string_view line);

double parse_real(std::string_view token, const std::string& source, std::size_t line);
std::size_t parse_index(std::string_view token, const std::string& source, std::size_t line);
long long parse_integer(std::string_view token, const std::string& source, std::size_t line);

void write_matrix(std::ostream& out, const Matrix& a);
Matrix parse_matrix(std::istream& in, const std::string& source = "<matrix>");

void write_labels(std::ostream& out, const std::vector<int>& labels);
std::vector<int> parse_labels(std::istream& in, const std::string& source = "<labels>");

void write_indices(std::ostream& out, const std::vector<std::size_t>& indices);
std::vector<std::size_t> parse_indices(std::istream& in, const std::string& source = "<indices>");

// Writes `contents` to `path` through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

Matrix read_matrix(const std::string& path);
std::vector<int> read_labels(const std::string& path);
std::vector<std::size_t> read_indices(const std::string& path);

}  // namespace uiss::io
