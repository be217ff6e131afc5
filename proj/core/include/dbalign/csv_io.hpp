#pragma once

// Plain-text formats: database CSVs (one row per line, d comma-separated
// decimals), truth files ("i,sigma_i" per line, 1-based) and alignments
// ("i,j" per line, 1-based).

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dbalign/model.hpp"
#include "dbalign/recovery.hpp"

namespace dbalign {

/// Throws ParseError (with the 1-based line) on a non-numeric or non-finite
/// cell or a row whose column count differs from the first row.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);
/// %.17g per cell, so values round-trip exactly.
void write_matrix_csv(std::ostream& out, const Matrix& m);

Permutation read_truth(std::istream& in, std::size_t n);
Permutation read_truth(const std::filesystem::path& path, std::size_t n);
void write_truth(std::ostream& out, const Permutation& sigma);

void write_alignment(std::ostream& out, const PartialAlignment& a);
PartialAlignment read_alignment(std::istream& in, std::size_t n);

/// Writes `content` to a sibling temp file, then renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Reads x, y and (if given) the truth file; validates matching shapes.
DatabasePair load_pair(const std::filesystem::path& x, const std::filesystem::path& y,
                       const std::filesystem::path& truth = {});

}  // namespace dbalign
