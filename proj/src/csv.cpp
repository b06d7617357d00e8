#include "csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace zic {

namespace {

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  return cells;
}

RawTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::Io, "cannot open '" + path + "'");
  RawTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw_error(ErrorCode::Parse, "'" + path + "' is empty (header row required)");
  }
  table.header = split_line(line);
  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty() && in.eof()) break;
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      throw_error(ErrorCode::Parse,
                  "row " + std::to_string(row_number) + ": expected " +
                      std::to_string(table.header.size()) + " cells, found " +
                      std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.rows.empty()) {
    throw_error(ErrorCode::Parse, "'" + path + "' has no data rows");
  }
  return table;
}

std::size_t column_index(const RawTable& table, const std::string& name) {
  const auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end()) {
    throw_error(ErrorCode::Parse, "column '" + name + "' not found in header");
  }
  return static_cast<std::size_t>(it - table.header.begin());
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA"; }

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  out = std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size();
}

bool parse_count(const std::string& cell, std::int64_t& out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  out = std::strtoll(cell.c_str(), &end, 10);
  return end == cell.c_str() + cell.size() && out >= 0;
}

// Expanded design columns for one requested covariate: either the numeric
// column itself, or reference-coded indicators for a categorical column.
struct ExpandedColumn {
  std::string name;
  Eigen::VectorXd values;
};

std::vector<ExpandedColumn> expand_column(const RawTable& table,
                                          const std::string& name) {
  const std::size_t col = column_index(table, name);
  const auto n = static_cast<Eigen::Index>(table.rows.size());

  bool numeric = true;
  Eigen::VectorXd values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double v;
    if (!parse_double(table.rows[static_cast<std::size_t>(i)][col], v)) {
      numeric = false;
      break;
    }
    values(i) = v;
  }
  if (numeric) return {{name, std::move(values)}};

  // categorical: reference level is the lexicographically first one
  std::map<std::string, Eigen::Index> levels;
  for (const auto& row : table.rows) levels.emplace(row[col], 0);
  if (levels.size() < 2) {
    throw_error(ErrorCode::Parse,
                "categorical column '" + name + "' has a single level");
  }
  std::vector<ExpandedColumn> out;
  bool first = true;
  for (const auto& [level, unused] : levels) {
    (void)unused;
    if (first) {  // reference level carries no indicator
      first = false;
      continue;
    }
    ExpandedColumn indicator;
    indicator.name = name + "=" + level;
    indicator.values.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      indicator.values(i) =
          table.rows[static_cast<std::size_t>(i)][col] == level ? 1.0 : 0.0;
    }
    out.push_back(std::move(indicator));
  }
  return out;
}

Eigen::MatrixXd assemble_design(const RawTable& table,
                                const std::vector<std::string>& columns,
                                bool intercept,
                                std::vector<std::string>& names_out) {
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  std::vector<ExpandedColumn> expanded;
  for (const auto& name : columns) {
    if (name == "1") continue;  // formula marker for "intercept only"
    auto cols = expand_column(table, name);
    for (auto& c : cols) expanded.push_back(std::move(c));
  }
  const Eigen::Index width =
      static_cast<Eigen::Index>(expanded.size()) + (intercept ? 1 : 0);
  Eigen::MatrixXd design(n, width);
  names_out.clear();
  Eigen::Index at = 0;
  if (intercept) {
    design.col(0).setOnes();
    names_out.emplace_back("(Intercept)");
    at = 1;
  }
  for (const auto& c : expanded) {
    design.col(at++) = c.values;
    names_out.push_back(c.name);
  }
  return design;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path, const std::string& response,
                         const std::vector<std::string>& count_columns,
                         const std::vector<std::string>& zero_columns,
                         bool intercept) {
  const RawTable table = read_table(path);

  // columns actually used by this load
  std::vector<std::size_t> used = {column_index(table, response)};
  for (const auto& name : count_columns) {
    if (name != "1") used.push_back(column_index(table, name));
  }
  for (const auto& name : zero_columns) {
    if (name != "1") used.push_back(column_index(table, name));
  }

  // reject rows with missing values outright, listing where
  std::vector<std::size_t> missing_rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (const std::size_t c : used) {
      if (is_missing(table.rows[r][c])) {
        missing_rows.push_back(r + 1);
        break;
      }
    }
  }
  if (!missing_rows.empty()) {
    std::ostringstream oss;
    oss << missing_rows.size() << " row(s) with missing values; rows:";
    const std::size_t shown = std::min<std::size_t>(missing_rows.size(), 25);
    for (std::size_t i = 0; i < shown; ++i) oss << ' ' << missing_rows[i];
    if (shown < missing_rows.size()) {
      oss << " (and " << missing_rows.size() - shown << " more)";
    }
    throw_error(ErrorCode::Parse, oss.str());
  }

  const std::size_t resp_col = column_index(table, response);
  std::vector<std::int64_t> y(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (!parse_count(table.rows[r][resp_col], y[r])) {
      throw_error(ErrorCode::Parse,
                  "row " + std::to_string(r + 1) + ", column '" + response +
                      "': '" + table.rows[r][resp_col] +
                      "' is not a nonnegative integer");
    }
  }

  std::vector<std::string> x_names, z_names;
  Eigen::MatrixXd x = assemble_design(table, count_columns, intercept, x_names);
  Eigen::MatrixXd z(static_cast<Eigen::Index>(table.rows.size()), 0);
  if (!zero_columns.empty()) {
    z = assemble_design(table, zero_columns, intercept, z_names);
  }
  return Dataset(std::move(y), std::move(x), std::move(x_names), std::move(z),
                 std::move(z_names));
}

void write_dataset_csv(const Dataset& data, const std::string& path,
                       const std::string& response_name) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::Io, "cannot write '" + path + "'");

  // distinct non-intercept columns, count part first, then zero-part extras
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> columns;
  std::vector<Eigen::Index> indices;
  auto add_part = [&](const Eigen::MatrixXd& m,
                      const std::vector<std::string>& names) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto& name = names[static_cast<std::size_t>(j)];
      if (name == "(Intercept)") continue;
      bool seen = false;
      for (const auto& existing : columns) {
        if (existing.first == name) {
          seen = true;
          break;
        }
      }
      if (!seen) {
        columns.emplace_back(name, &m);
        indices.push_back(j);
      }
    }
  };
  add_part(data.x(), data.x_names());
  add_part(data.z(), data.z_names());

  out << response_name;
  for (const auto& c : columns) out << ',' << c.first;
  out << '\n';

  char buf[40];
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out << data.y()[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g",
                    (*columns[c].second)(i, indices[c]));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw_error(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace zic
