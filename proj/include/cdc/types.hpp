#pragma once

#include <complex>
#include <vector>

namespace cdc {

using complexd = std::complex<double>;
using cvector = std::vector<complexd>;

}  // namespace cdc
