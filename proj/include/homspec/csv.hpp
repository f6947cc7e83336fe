#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace homspec {

// One numeric value in the fixed export format: scientific, 17 significant digits.
// The format never varies, so identical data produces byte-identical files.
std::string format_value(double value);

// Writes columns of equal length as comma-separated rows. Header lines are emitted
// with a '#' prefix, followed by a '#'-prefixed row of column names (which should
// carry units). Non-finite data is refused.
void export_csv(const std::string& path, const std::vector<std::string>& header_lines,
                const std::vector<std::string>& column_names,
                const std::vector<Eigen::VectorXd>& columns);

}
