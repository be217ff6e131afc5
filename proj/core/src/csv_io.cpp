#include "dbalign/csv_io.hpp"

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "dbalign/error.hpp"

namespace dbalign {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_double(std::string_view cell, std::size_t line_no) {
  const std::string s(cell);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + s + "'", line_no);
  if (!std::isfinite(v))
    throw ParseError("line " + std::to_string(line_no) + ": non-finite value '" + s + "'", line_no);
  return v;
}

std::size_t parse_index(std::string_view cell, std::size_t line_no, std::size_t n) {
  const std::string s(cell);
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    throw ParseError("line " + std::to_string(line_no) + ": not an integer: '" + s + "'", line_no);
  if (v < 1 || static_cast<unsigned long long>(v) > n)
    throw ParseError("line " + std::to_string(line_no) + ": index " + s + " outside 1.." +
                         std::to_string(n), line_no);
  return static_cast<std::size_t>(v - 1);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return in;
}

// Reads "a,b" lines (1-based) into 0-based pairs.
std::vector<std::pair<std::size_t, std::size_t>> read_pairs(std::istream& in, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 2)
      throw ParseError("line " + std::to_string(line_no) + ": expected 'i,j'", line_no);
    pairs.emplace_back(parse_index(cells[0], line_no, n), parse_index(cells[1], line_no, n));
  }
  return pairs;
}

}  // namespace

Matrix read_matrix_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (rows == 0) cols = cells.size();
    if (cells.size() != cols)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                           " columns, found " + std::to_string(cells.size()), line_no);
    for (const auto c : cells) values.push_back(parse_double(c, line_no));
    ++rows;
  }
  if (rows == 0) throw ParseError("empty matrix file", 0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = values[i * cols + j];
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

Permutation read_truth(std::istream& in, std::size_t n) {
  const auto pairs = read_pairs(in, n);
  if (pairs.size() != n)
    throw ParseError("truth file has " + std::to_string(pairs.size()) + " lines, expected " +
                         std::to_string(n), 0);
  std::vector<std::size_t> map(n, n);
  for (const auto& [i, j] : pairs) {
    if (map[i] != n) throw ParseError("truth file repeats row " + std::to_string(i + 1), 0);
    map[i] = j;
  }
  if (!is_bijection(map)) throw ParseError("truth file is not a permutation", 0);
  return Permutation(std::move(map));
}

Permutation read_truth(const std::filesystem::path& path, std::size_t n) {
  auto in = open_in(path);
  return read_truth(in, n);
}

void write_truth(std::ostream& out, const Permutation& sigma) {
  for (std::size_t i = 0; i < sigma.size(); ++i) out << i + 1 << ',' << sigma[i] + 1 << '\n';
}

void write_alignment(std::ostream& out, const PartialAlignment& a) {
  for (const auto& [i, j] : a.pairs()) out << i + 1 << ',' << j + 1 << '\n';
}

PartialAlignment read_alignment(std::istream& in, std::size_t n) {
  auto pairs = read_pairs(in, n);
  if (!in_ln(n, pairs)) throw ParseError("alignment repeats a row or column", 0);
  return PartialAlignment(n, std::move(pairs));
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw InvalidArgument("write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InvalidArgument("cannot replace '" + path.string() + "'");
  }
}

DatabasePair load_pair(const std::filesystem::path& x, const std::filesystem::path& y,
                       const std::filesystem::path& truth) {
  DatabasePair db;
  db.x = read_matrix_csv(x);
  db.y = read_matrix_csv(y);
  if (db.x.rows() != db.y.rows() || db.x.cols() != db.y.cols())
    throw InvalidArgument("x is " + std::to_string(db.x.rows()) + "x" + std::to_string(db.x.cols()) +
                          " but y is " + std::to_string(db.y.rows()) + "x" +
                          std::to_string(db.y.cols()));
  if (!truth.empty()) db.truth = GroundTruth{read_truth(truth, db.x.rows()), Hypothesis::H1};
  return db;
}

}  // namespace dbalign
