#include "neuralnmf/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nnmf::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& field, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    while (used < field.size() && std::isspace(static_cast<unsigned char>(
                                      field[used]))) {
      ++used;
    }
    if (used != field.size()) {
      throw ParseError("trailing characters in '" + field + "'", line_no);
    }
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("cannot parse number '" + field + "'", line_no);
  }
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

TermDocData load_matrix_market(std::ifstream& in) {
  std::string line;
  std::size_t line_no = 1;
  std::getline(in, line);  // banner
  strip_cr(line);
  if (line.find("matrix") == std::string::npos ||
      line.find("coordinate") == std::string::npos) {
    throw ParseError("unsupported MatrixMarket header: " + line, line_no);
  }
  if (line.find("complex") != std::string::npos ||
      line.find("hermitian") != std::string::npos) {
    throw ParseError("complex MatrixMarket files are not supported", line_no);
  }
  const bool pattern = line.find("pattern") != std::string::npos;
  const bool symmetric = line.find("symmetric") != std::string::npos;

  // Skip comments, read the size line.
  std::size_t rows = 0, cols = 0, nnz = 0;
  for (;;) {
    if (!std::getline(in, line)) {
      throw ParseError("missing size line", line_no);
    }
    ++line_no;
    strip_cr(line);
    if (line.empty() || line[0] == '%') continue;
    std::stringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) {
      throw ParseError("bad size line: " + line, line_no);
    }
    break;
  }

  TermDocData data;
  data.X = DenseMatrix(rows, cols);
  std::size_t seen = 0;
  while (seen < nnz) {
    if (!std::getline(in, line)) {
      throw ParseError("expected " + std::to_string(nnz) + " entries, got " +
                           std::to_string(seen),
                       line_no);
    }
    ++line_no;
    strip_cr(line);
    if (line.empty() || line[0] == '%') continue;
    std::stringstream ss(line);
    std::size_t i = 0, j = 0;
    double v = 1.0;
    if (!(ss >> i >> j) || (!pattern && !(ss >> v))) {
      throw ParseError("bad entry: " + line, line_no);
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw ParseError("entry index out of range: " + line, line_no);
    }
    if (v < 0.0) {
      throw NegativeEntry("negative entry at line " + std::to_string(line_no));
    }
    // Duplicate coordinates accumulate.
    data.X(i - 1, j - 1) += v;
    if (symmetric && i != j) data.X(j - 1, i - 1) += v;
    ++seen;
  }
  return data;
}

TermDocData load_dense_csv(std::ifstream& in) {
  TermDocData data;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (line_no == 1) {
      // Header: first cell is a corner label, the rest are document ids.
      data.doc_ids.assign(fields.begin() + 1, fields.end());
      continue;
    }
    if (fields.size() != data.doc_ids.size() + 1) {
      throw ParseError("expected " + std::to_string(data.doc_ids.size() + 1) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no);
    }
    data.vocabulary.push_back(fields[0]);
    std::vector<double> row(fields.size() - 1);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      row[j - 1] = parse_double(fields[j], line_no);
      if (row[j - 1] < 0.0) {
        throw NegativeEntry("negative entry at line " +
                            std::to_string(line_no));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows", line_no);
  data.X = DenseMatrix(rows.size(), data.doc_ids.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) data.X(i, j) = rows[i][j];
  }
  return data;
}

}  // namespace

void write_matrix_csv(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_full(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

DenseMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw ParseError("ragged row: expected " + std::to_string(width) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no);
    }
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      row[j] = parse_double(fields[j], line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix file", line_no);
  DenseMatrix m(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

TermDocData load_term_doc(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw IoError("cannot open " + path);
  std::string first;
  std::getline(probe, first);
  probe.close();

  std::ifstream in(path);
  if (first.rfind("%%MatrixMarket", 0) == 0) return load_matrix_market(in);
  return load_dense_csv(in);
}

std::vector<std::pair<std::string, int>> read_labels_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::pair<std::string, int>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) {
      throw ParseError("expected doc_id,class", line_no);
    }
    out.emplace_back(fields[0],
                     static_cast<int>(parse_double(fields[1], line_no)));
  }
  return out;
}

void write_labels_csv(const std::string& path,
                      const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (std::size_t j = 0; j < labels.size(); ++j) {
    out << j << ',' << labels[j] << '\n';
  }
}

std::vector<int> read_indexed_labels_csv(const std::string& path) {
  const auto pairs = read_labels_csv(path);
  std::vector<int> labels(pairs.size(), -1);
  for (const auto& [id, cls] : pairs) {
    const std::size_t idx = static_cast<std::size_t>(std::stoul(id));
    if (idx >= labels.size()) {
      throw ParseError("doc index " + id + " out of range", 0);
    }
    labels[idx] = cls;
  }
  return labels;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string content_hash(const std::string& path) {
  const std::string bytes = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nnmf::io
