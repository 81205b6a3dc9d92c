#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pulearn/dataset.hpp"
#include "pulearn/error.hpp"

namespace pulearn {

struct CsvSchema {
  bool has_header = false;
  int label_column = -1;  // negative means the last column
  char delimiter = ',';
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline bool try_parse_double(std::string_view cell, double& out) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

inline std::vector<std::string_view> split_line(std::string_view line,
                                                char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delim) {
      cells.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return cells;
}

// Read a PN dataset from a delimited text file: all columns numeric, one
// of them the +1/-1 label. Row order is preserved.
inline LabeledDataset load_csv(const std::string& path,
                               const CsvSchema& schema = {}) {
  std::ifstream in(path);
  if (!in) fail(Errc::missing_file, "cannot open " + path);

  std::string line;
  std::size_t lineno = 0;
  if (schema.has_header) {
    if (!std::getline(in, line))
      fail(Errc::empty_input, path + " has no data rows");
    ++lineno;
  }

  LabeledDataset ds;
  {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path
                                                  : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    ds.name = dot == std::string::npos ? base : base.substr(0, dot);
  }

  std::size_t ncols = 0;
  std::size_t label_col = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_line(line, schema.delimiter);
    if (ncols == 0) {
      ncols = cells.size();
      if (ncols < 2)
        fail(Errc::dimension_mismatch,
             path + ": need a label column plus at least one feature");
      label_col = schema.label_column < 0
                      ? ncols - 1
                      : static_cast<std::size_t>(schema.label_column);
      if (label_col >= ncols)
        fail(Errc::invalid_argument, path + ": label column out of range");
      ds.features = Matrix(0, ncols - 1);
    } else if (cells.size() != ncols) {
      fail(Errc::dimension_mismatch,
           path + " line " + std::to_string(lineno) + ": expected " +
               std::to_string(ncols) + " cells, got " +
               std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < ncols; ++c) {
      double v = 0.0;
      if (!try_parse_double(cells[c], v))
        fail(c == label_col ? Errc::invalid_label : Errc::non_numeric_cell,
             path + " line " + std::to_string(lineno) + ": bad cell '" +
                 std::string(trim(cells[c])) + "'");
      if (c == label_col) {
        if (v != 1.0 && v != -1.0)
          fail(Errc::invalid_label,
               path + " line " + std::to_string(lineno) +
                   ": invalid label value (want +1 or -1)");
        ds.labels.push_back(static_cast<int>(v));
      } else {
        ds.features.data.push_back(v);
      }
    }
    ++ds.features.rows;
  }
  if (ds.features.rows == 0) fail(Errc::empty_input, path + " is empty");
  check_dataset(ds);
  return ds;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_dataset_csv(const LabeledDataset& ds,
                              const std::string& path,
                              bool header = false) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  if (header) {
    for (std::size_t c = 0; c < ds.d(); ++c) out << "f" << c << ",";
    out << "label\n";
  }
  for (std::size_t r = 0; r < ds.n(); ++r) {
    for (std::size_t c = 0; c < ds.d(); ++c)
      out << format_double(ds.features(r, c)) << ",";
    out << ds.labels[r] << "\n";
  }
  if (!out) fail(Errc::io_error, "short write to " + path);
}

// PUView dump for the simulate subcommand: features, hidden truth, and a
// status column marking each row P (labeled positive) or U (unlabeled).
inline void write_puview_csv(const PUView& view, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  std::vector<char> status(view.base.n(), 'U');
  for (std::size_t i : view.labeled_pos) status[i] = 'P';
  for (std::size_t c = 0; c < view.base.d(); ++c) out << "f" << c << ",";
  out << "label,status\n";
  for (std::size_t r = 0; r < view.base.n(); ++r) {
    for (std::size_t c = 0; c < view.base.d(); ++c)
      out << format_double(view.base.features(r, c)) << ",";
    out << view.hidden_truth[r] << "," << status[r] << "\n";
  }
  if (!out) fail(Errc::io_error, "short write to " + path);
}

struct CatalogEntry {
  std::string name;
  std::size_t n = 0;
  std::size_t d = 0;
  double positive_pct = 0.0;  // percentage, e.g. 9.60
};

inline std::vector<CatalogEntry> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::missing_file, "cannot open catalog " + path);
  std::vector<CatalogEntry> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty()) continue;
    if (first) {  // header row
      first = false;
      continue;
    }
    auto cells = split_line(t, ',');
    if (cells.size() != 4)
      fail(Errc::dimension_mismatch, "catalog row needs 4 cells: " + line);
    CatalogEntry e;
    e.name = std::string(trim(cells[0]));
    double n = 0, d = 0;
    if (!try_parse_double(cells[1], n) || !try_parse_double(cells[2], d) ||
        !try_parse_double(cells[3], e.positive_pct))
      fail(Errc::non_numeric_cell, "bad catalog row: " + line);
    e.n = static_cast<std::size_t>(n);
    e.d = static_cast<std::size_t>(d);
    rows.push_back(std::move(e));
  }
  if (rows.empty()) fail(Errc::empty_input, "catalog has no rows");
  return rows;
}

// Expected-vs-actual comparison against catalog metadata. Mismatches are
// reported, never thrown; ratio tolerance is 0.5 percentage points.
struct CatalogCheck {
  bool found = false;
  bool n_ok = false, d_ok = false, ratio_ok = false;
  std::size_t expected_n = 0, actual_n = 0;
  std::size_t expected_d = 0, actual_d = 0;
  double expected_pct = 0.0, actual_pct = 0.0;

  bool all_ok() const { return found && n_ok && d_ok && ratio_ok; }
  std::string describe() const {
    if (!found) return "not in catalog";
    std::ostringstream os;
    os << "n " << actual_n << "/" << expected_n << (n_ok ? " ok" : " MISMATCH")
       << "; d " << actual_d << "/" << expected_d
       << (d_ok ? " ok" : " MISMATCH") << "; pos% " << actual_pct << "/"
       << expected_pct << (ratio_ok ? " ok" : " MISMATCH");
    return os.str();
  }
};

inline CatalogCheck validate_against_catalog(
    const LabeledDataset& ds, const std::vector<CatalogEntry>& catalog) {
  CatalogCheck chk;
  chk.actual_n = ds.n();
  chk.actual_d = ds.d();
  chk.actual_pct = 100.0 * ds.positive_ratio();
  for (const auto& e : catalog) {
    if (e.name != ds.name) continue;
    chk.found = true;
    chk.expected_n = e.n;
    chk.expected_d = e.d;
    chk.expected_pct = e.positive_pct;
    chk.n_ok = e.n == ds.n();
    chk.d_ok = e.d == ds.d();
    chk.ratio_ok = std::fabs(chk.actual_pct - e.positive_pct) <= 0.5;
    break;
  }
  return chk;
}

}  // namespace pulearn
