#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "plap/radial_ops.hpp"

namespace plap {

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Parses a full decimal token; throws InvalidParams on trailing junk.
double parse_double(std::string_view text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

/// Comma-separated, single header row, no quoting.
CsvTable read_csv(std::istream& in);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// GridProfile from the r and value columns of a CSV table.
GridProfile read_grid_csv(std::istream& in, std::string_view value_column = "u");

}  // namespace plap
