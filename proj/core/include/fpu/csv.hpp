#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fpu/integrator.hpp"

namespace fpu {

/// Header row then one row per sample; numbers with 17 significant digits.
/// All columns must have equal length.
void write_csv(std::ostream& out, std::span<const std::string> header,
               std::span<const std::vector<double>> columns);
void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::vector<double>> columns);

/// Columns t, x1, v1, x2, v2, ... (prefix 'q' or 'x' from the trajectory).
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Reads a file written by write_csv. Throws ParseError on malformed rows.
CsvTable read_csv(std::istream& in, const std::string& source_name = "<stream>");

}  // namespace fpu
