#pragma once

#include <string>
#include <vector>

namespace pme::cli {

/// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_double(double value);

/// Comma-joined row terminated by LF.
std::string csv_row(const std::vector<std::string>& cells);

}  // namespace pme::cli
