#include "fpu/version.hpp"

#ifndef FPUCHAIN_VERSION
#define FPUCHAIN_VERSION "unknown"
#endif

namespace fpu {

const char* version() { return FPUCHAIN_VERSION; }

}  // namespace fpu
