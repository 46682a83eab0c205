#pragma once

#include <string>

namespace stlrisk {

/// 12 significant digits, shortest form; "inf" / "-inf" for infinities.
std::string format_real(double v);

}  // namespace stlrisk
