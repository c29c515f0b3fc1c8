#include "fpu/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fpu/errors.hpp"
#include "fpu/system_io.hpp"

namespace fpu {

void write_csv(std::ostream& out, std::span<const std::string> header,
               std::span<const std::vector<double>> columns) {
  if (header.size() != columns.size()) throw DimensionMismatch("csv header", columns.size(), header.size());
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw DimensionMismatch("csv column length", rows, c.size());
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    line.clear();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) line += ',';
      line += format_double(columns[c][r]);
    }
    line += '\n';
    out << line;
  }
}

void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::vector<double>> columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_csv(out, header, columns);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  std::vector<std::string> header{"t"};
  std::vector<std::vector<double>> columns{tr.times};
  for (std::size_t i = 0; i < tr.dof; ++i) {
    header.push_back(std::string(1, tr.coordinate) + std::to_string(i + 1));
    header.push_back("v" + std::to_string(i + 1));
    columns.push_back(tr.position_series(i));
    columns.push_back(tr.position_series(tr.dof + i));
  }
  write_csv(out, header, columns);
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_trajectory_csv(out, tr);
}

CsvTable read_csv(std::istream& in, const std::string& source_name) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw ParseError(source_name, 1, "missing header row");
  ++line_no;
  table.header = split(line);
  table.columns.resize(table.header.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size())
      throw ParseError(source_name, line_no,
                       "expected " + std::to_string(table.header.size()) + " cells, got " +
                           std::to_string(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const auto res = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (res.ec != std::errc() || res.ptr != cells[c].data() + cells[c].size())
        throw ParseError(source_name, line_no, "not a number: '" + cells[c] + "'");
      table.columns[c].push_back(v);
    }
  }
  return table;
}

}  // namespace fpu
