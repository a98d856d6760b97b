// Copyright 2026 The popcut Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POPCUT_MATRIX_IO_HPP_
#define POPCUT_MATRIX_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "popcut/linalg.hpp"

namespace popcut {

// Binary container: 8-byte magic "POPCMAT1", uint64 rows, uint64 cols, then
// rows * cols little-endian float64 values in row-major order.
inline constexpr char kMatrixMagic[9] = "POPCMAT1";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_matrix_binary(std::ostream& os, const Matrix& m);
Matrix read_matrix_binary(std::istream& is);
void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);

// Comma-separated, one row per line, 17 significant digits, no header.
void write_matrix_csv(std::ostream& os, const Matrix& m);
Matrix read_matrix_csv(std::istream& is);

// One label per line.
void write_labels(std::ostream& os, const Labels& labels);
Labels read_labels(std::istream& is);
void save_labels(const std::filesystem::path& path, const Labels& labels);
Labels load_labels(const std::filesystem::path& path);

// Picks the binary container unless the extension is ".csv".
void save_matrix_auto(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix_auto(const std::filesystem::path& path);

// Shortest round-trip representation with 17 significant digits; non-finite
// values print as "nan", "inf", "-inf".
std::string format_double(double x);

}  // namespace popcut

#endif  // POPCUT_MATRIX_IO_HPP_
