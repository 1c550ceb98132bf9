#pragma once

// CSV export/import of ISO-labelled square matrices.
//
//   # unit: km
//   iso,MG,MU,RE
//   MG,0.000,1054.458,856.712
//   ...
//
// Values are written with 3 decimals.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rixp/error.hpp"
#include "rixp/geo.hpp"
#include "rixp/matrix.hpp"

namespace rixp {

enum class MatrixKind { Distance, Delay };

inline constexpr std::string_view unit_of(MatrixKind kind) {
  return kind == MatrixKind::Distance ? "km" : "ms";
}

// Square matrix with row/column labels. Unlike DistanceMatrix it does not
// require symmetry, so published tables with typos can be represented as-is.
struct LabeledMatrix {
  std::vector<std::string> codes;
  SquareMatrix values;
  std::string unit;

  std::size_t index_of(std::string_view code) const {
    for (std::size_t i = 0; i < codes.size(); ++i) {
      if (codes[i] == code) return i;
    }
    throw LookupError("unknown ISO code " + std::string(code));
  }
};

inline LabeledMatrix labeled(const DistanceMatrix& m) {
  return {m.codes(), m.cells(), "km"};
}

inline std::string format_matrix_csv(const std::vector<std::string>& codes,
                                     const SquareMatrix& values, std::string_view unit) {
  if (codes.size() != values.size()) throw ValidationError("label count does not match matrix");
  std::string out = "# unit: " + std::string(unit) + "\niso";
  for (const auto& c : codes) out += "," + c;
  out += "\n";
  char buf[64];
  for (std::size_t i = 0; i < codes.size(); ++i) {
    out += codes[i];
    for (std::size_t j = 0; j < codes.size(); ++j) {
      const double v = values(i, j);
      if (!std::isfinite(v)) throw ValidationError("non-finite matrix cell");
      // avoid "-0.000"
      std::snprintf(buf, sizeof buf, ",%.3f", std::fabs(v) < 0.0005 ? 0.0 : v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

inline std::string format_matrix_csv(const LabeledMatrix& m) {
  return format_matrix_csv(m.codes, m.values, m.unit);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline LabeledMatrix parse_matrix_csv(std::string_view text) {
  LabeledMatrix m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view key = "# unit:";
      if (line.rfind(key, 0) == 0) {
        std::string unit = line.substr(key.size());
        unit.erase(0, unit.find_first_not_of(' '));
        m.unit = unit;
      }
      continue;
    }
    auto fields = detail::split_csv_line(line);
    if (!header_seen) {
      if (fields.size() < 2) throw ParseError("header row needs at least one label", line_no, 1);
      m.codes.assign(fields.begin() + 1, fields.end());
      header_seen = true;
      continue;
    }
    if (fields.size() != m.codes.size() + 1) {
      throw ParseError("expected " + std::to_string(m.codes.size() + 1) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no, 1);
    }
    if (rows.size() >= m.codes.size()) throw ParseError("too many rows", line_no, 1);
    if (fields[0] != m.codes[rows.size()]) {
      throw ParseError("row label '" + fields[0] + "' does not match column '" +
                           m.codes[rows.size()] + "'",
                       line_no, 1);
    }
    std::vector<double> row;
    std::size_t column = fields[0].size() + 2;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const std::string& f = fields[k];
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != f.size() || !std::isfinite(v)) {
        throw ParseError("not a number: '" + f + "'", line_no, column);
      }
      row.push_back(v);
      column += f.size() + 1;
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError("missing header row", line_no, 1);
  if (rows.size() != m.codes.size()) {
    throw ParseError("expected " + std::to_string(m.codes.size()) + " rows, got " +
                         std::to_string(rows.size()),
                     line_no, 1);
  }
  for (std::size_t i = 0; i < m.codes.size(); ++i) {
    if (!is_iso_code(m.codes[i])) throw ValidationError("invalid ISO code '" + m.codes[i] + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (m.codes[i] == m.codes[j]) throw ValidationError("duplicate ISO code " + m.codes[i]);
    }
  }
  m.values = SquareMatrix(m.codes.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) m.values(i, j) = rows[i][j];
  }
  return m;
}

inline void export_matrix(const std::vector<std::string>& codes, const SquareMatrix& values,
                          MatrixKind kind, const std::filesystem::path& path) {
  detail::write_file_atomically(path, format_matrix_csv(codes, values, unit_of(kind)));
}

inline void export_matrix(const DistanceMatrix& m, const std::filesystem::path& path) {
  export_matrix(m.codes(), m.cells(), MatrixKind::Distance, path);
}

inline LabeledMatrix import_matrix(const std::filesystem::path& path) {
  return parse_matrix_csv(detail::read_file(path));
}

// Rebuilds a validated DistanceMatrix from an imported table.
inline DistanceMatrix to_distance_matrix(const LabeledMatrix& m) {
  if (!m.unit.empty() && m.unit != "km") {
    throw ValidationError("expected a km matrix, got unit '" + m.unit + "'");
  }
  return DistanceMatrix(m.codes, m.values);
}

}  // namespace rixp
