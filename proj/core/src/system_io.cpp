#include "fpu/system_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "fpu/errors.hpp"

namespace fpu {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

bool parse_number(const std::string& token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

bool parse_index(const std::string& token, std::size_t& out) {
  const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  for (std::string t; ss >> t;) tokens.push_back(t);
  return tokens;
}

}  // namespace

void write_system(std::ostream& out, const QuasiHarmonicSystem& sys, const std::string& comment) {
  if (!comment.empty()) {
    std::istringstream lines(comment);
    for (std::string l; std::getline(lines, l);) out << "# " << l << '\n';
  }
  out << sys.p() << ' ' << format_double(sys.a()) << ' ' << format_double(sys.alpha()) << '\n';
  for (std::size_t i = 0; i < sys.dof(); ++i) {
    const auto& label = sys.labels()[i];
    out << i + 1 << ' ' << format_double(sys.lambdas()[i]) << ' ' << to_string(label.kind) << ' '
        << label.pair;
    if (sys.weights()[i] != 1.0) out << ' ' << format_double(sys.weights()[i]);
    out << '\n';
  }
  for (const auto& e : sys.entries())
    out << e.i + 1 << ' ' << e.j + 1 << ' ' << e.k + 1 << ' ' << format_double(e.value) << '\n';
}

void write_system(const std::filesystem::path& path, const QuasiHarmonicSystem& sys,
                  const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_system(out, sys, comment);
}

QuasiHarmonicSystem read_system(std::istream& in, const std::string& source_name) {
  std::size_t p = 0;
  double a = 0.0, alpha = 0.0;
  bool have_header = false;
  std::vector<double> lambdas, weights;
  std::vector<ModeLabel> labels;
  std::vector<TensorEntry> entries;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto tok = split(line);
    if (tok.empty()) continue;

    if (!have_header) {
      if (tok.size() != 3 || !parse_index(tok[0], p) || !parse_number(tok[1], a) ||
          !parse_number(tok[2], alpha))
        throw ParseError(source_name, line_no, "expected header '<p> <a> <alpha>'");
      have_header = true;
      continue;
    }

    double probe = 0.0;
    const bool is_mode_line = tok.size() >= 3 && !parse_number(tok[2], probe);
    if (is_mode_line) {
      if (!entries.empty())
        throw ParseError(source_name, line_no, "mode lines must precede tensor entries");
      std::size_t idx = 0, pair = 0;
      double lambda = 0.0, weight = 1.0;
      if ((tok.size() != 4 && tok.size() != 5) || !parse_index(tok[0], idx) ||
          !parse_number(tok[1], lambda) || !parse_index(tok[3], pair) ||
          (tok.size() == 5 && !parse_number(tok[4], weight)))
        throw ParseError(source_name, line_no,
                         "expected mode line '<i> <lambda> <label> <pair> [<weight>]'");
      if (idx != lambdas.size() + 1)
        throw ParseError(source_name, line_no,
                         "mode index " + std::to_string(idx) + " out of sequence");
      ModeLabel label;
      try {
        label = {parse_mode_kind(tok[2]), pair};
      } catch (const InvalidArgument& e) {
        throw ParseError(source_name, line_no, e.what());
      }
      lambdas.push_back(lambda);
      labels.push_back(label);
      weights.push_back(weight);
      continue;
    }

    std::size_t i = 0, j = 0, k = 0;
    double value = 0.0;
    if (tok.size() != 4 || !parse_index(tok[0], i) || !parse_index(tok[1], j) ||
        !parse_index(tok[2], k) || !parse_number(tok[3], value))
      throw ParseError(source_name, line_no, "expected tensor entry '<i> <j> <k> <value>'");
    const std::size_t n = lambdas.size();
    if (i < 1 || j < 1 || k < 1 || i > n || j > n || k > n)
      throw ParseError(source_name, line_no, "tensor index out of range 1.." + std::to_string(n));
    entries.push_back({i - 1, j - 1, k - 1, value});
  }
  if (!have_header) throw ParseError(source_name, line_no, "missing header line");
  if (lambdas.empty()) throw ParseError(source_name, line_no, "no mode lines");
  return QuasiHarmonicSystem(p, a, alpha, std::move(lambdas), std::move(labels), std::move(entries),
                             std::move(weights));
}

QuasiHarmonicSystem read_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read_system(in, path.string());
}

}  // namespace fpu
