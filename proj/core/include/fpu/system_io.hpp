#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fpu/spectral.hpp"

namespace fpu {

// Plain-text system file, all indices 1-based, numbers with 17 significant
// digits:
//
//   # free comment lines
//   <p> <a> <alpha>
//   <i> <lambda_i> <acoustic|optical|mode> <pair> [<weight>]   (one per mode)
//   <i> <j> <k> <C_{i,jk}>                                      (nonzero entries)
//
// Reference coefficient tables use the same format.

void write_system(std::ostream& out, const QuasiHarmonicSystem& sys,
                  const std::string& comment = {});
void write_system(const std::filesystem::path& path, const QuasiHarmonicSystem& sys,
                  const std::string& comment = {});

QuasiHarmonicSystem read_system(std::istream& in, const std::string& source_name = "<stream>");
QuasiHarmonicSystem read_system(const std::filesystem::path& path);

/// "%.17g" formatting with '.' as decimal separator regardless of locale.
std::string format_double(double value);

}  // namespace fpu
