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

#include "popcut/matrix_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace popcut {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary matrix format assumes a little-endian host");

void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw IoError("matrix: truncated header");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path,
                       std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path,
                      std::ios::openmode mode = std::ios::in) {
  std::ifstream is(path, mode);
  if (!is) throw IoError("cannot open for reading: " + path.string());
  return is;
}

bool is_csv(const std::filesystem::path& path) {
  return path.extension() == ".csv";
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_matrix_binary(std::ostream& os, const Matrix& m) {
  os.write(kMatrixMagic, 8);
  write_u64(os, static_cast<std::uint64_t>(m.rows()));
  write_u64(os, static_cast<std::uint64_t>(m.cols()));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rm = m;
  os.write(reinterpret_cast<const char*>(rm.data()),
           static_cast<std::streamsize>(rm.size() * sizeof(double)));
  if (!os) throw IoError("matrix: write failed");
}

Matrix read_matrix_binary(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMatrixMagic, 8) != 0) {
    throw IoError("matrix: bad magic");
  }
  const std::uint64_t rows = read_u64(is);
  const std::uint64_t cols = read_u64(is);
  if (rows > (1ull << 31) || cols > (1ull << 31)) {
    throw IoError("matrix: implausible shape");
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(
      static_cast<Index>(rows), static_cast<Index>(cols));
  is.read(reinterpret_cast<char*>(rm.data()),
          static_cast<std::streamsize>(rm.size() * sizeof(double)));
  if (!is) throw IoError("matrix: truncated payload");
  return rm;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
  auto os = open_out(path, std::ios::out | std::ios::binary);
  write_matrix_binary(os, m);
}

Matrix load_matrix(const std::filesystem::path& path) {
  auto is = open_in(path, std::ios::in | std::ios::binary);
  return read_matrix_binary(is);
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
  if (!os) throw IoError("matrix: write failed");
}

Matrix read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) {
          throw IoError("matrix csv: bad cell '" + cell + "'");
        }
      } catch (const std::logic_error&) {
        throw IoError("matrix csv: bad cell '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError("matrix csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(rows.front().size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
  return m;
}

void write_labels(std::ostream& os, const Labels& labels) {
  for (Index i = 0; i < labels.size(); ++i) os << labels(i) << '\n';
  if (!os) throw IoError("labels: write failed");
}

Labels read_labels(std::istream& is) {
  std::vector<int> values;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int v = 0;
    try {
      v = std::stoi(line);
    } catch (const std::logic_error&) {
      throw IoError("labels: bad line '" + line + "'");
    }
    if (v != 1 && v != -1) throw IoError("labels: values must be +1 or -1");
    values.push_back(v);
  }
  Labels out(static_cast<Index>(values.size()));
  for (Index i = 0; i < out.size(); ++i) out(i) = values[i];
  return out;
}

void save_labels(const std::filesystem::path& path, const Labels& labels) {
  auto os = open_out(path);
  write_labels(os, labels);
}

Labels load_labels(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_labels(is);
}

void save_matrix_auto(const std::filesystem::path& path, const Matrix& m) {
  if (is_csv(path)) {
    auto os = open_out(path);
    write_matrix_csv(os, m);
  } else {
    save_matrix(path, m);
  }
}

Matrix load_matrix_auto(const std::filesystem::path& path) {
  if (is_csv(path)) {
    auto is = open_in(path);
    return read_matrix_csv(is);
  }
  return load_matrix(path);
}

}  // namespace popcut
