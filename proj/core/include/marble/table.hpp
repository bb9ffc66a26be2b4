#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace marble {

/// Shortest representation that round-trips exactly; locale independent.
std::string format_number(double value);

std::vector<std::string> split_csv_line(std::string_view line);

std::string_view trim(std::string_view text);

}  // namespace marble
