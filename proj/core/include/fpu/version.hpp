#pragma once

namespace fpu {

const char* version();

}  // namespace fpu
