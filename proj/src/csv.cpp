#include "homspec/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace homspec {

std::string format_value(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.16e", value);
  return buffer;
}

void export_csv(const std::string& path, const std::vector<std::string>& header_lines,
                const std::vector<std::string>& column_names,
                const std::vector<Eigen::VectorXd>& columns) {
  if (columns.empty() || column_names.size() != columns.size()) {
    throw std::invalid_argument("csv export needs one name per column");
  }
  const Eigen::Index rows = columns.front().size();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) {
      throw std::invalid_argument("csv columns must have equal length");
    }
    if (!columns[c].allFinite()) {
      throw std::invalid_argument("refusing to export non-finite data in column '" +
                                  column_names[c] + "' of " + path);
    }
  }

  std::ostringstream body;
  for (const auto& line : header_lines) {
    body << "# " << line << "\n";
  }
  body << "#";
  for (std::size_t c = 0; c < column_names.size(); ++c) {
    body << (c == 0 ? " " : ", ") << column_names[c];
  }
  body << "\n";
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c != 0) body << ",";
      body << format_value(columns[c][r]);
    }
    body << "\n";
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << body.str();
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}
