#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "neuralnmf/matrix.hpp"

namespace nnmf::io {

/// Writes a matrix as headerless comma-separated rows at full precision
/// (17 significant digits), so a reload is bit-faithful.
void write_matrix_csv(const std::string& path, const DenseMatrix& m);

/// Reads a headerless comma-separated matrix. Throws ParseError with the
/// offending line on malformed or ragged input.
DenseMatrix read_matrix_csv(const std::string& path);

/// Term-document matrix plus row/column identifiers when the format carries
/// them (the dense CSV layout does, MatrixMarket does not).
struct TermDocData {
  DenseMatrix X;
  std::vector<std::string> vocabulary;  // row names; may be empty
  std::vector<std::string> doc_ids;     // column names; may be empty
};

/// Loads a term-document matrix. MatrixMarket coordinate files (leading
/// "%%MatrixMarket" banner) sum duplicate entries per the format
/// convention; anything else parses as dense CSV whose first row holds
/// document ids and first column holds terms. Negative values raise
/// NegativeEntry.
TermDocData load_term_doc(const std::string& path);

/// (doc_id, class) pairs, one per line, comma separated.
std::vector<std::pair<std::string, int>> read_labels_csv(
    const std::string& path);

void write_labels_csv(const std::string& path,
                      const std::vector<int>& labels);

/// Reads labels written by write_labels_csv (doc ids are column indices).
std::vector<int> read_indexed_labels_csv(const std::string& path);

/// FNV-1a 64-bit content hash, as a fixed-width hex string. Identifies
/// input files in run summaries.
std::string content_hash(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace nnmf::io
