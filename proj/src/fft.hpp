#pragma once

#include <vector>

#include "bergman/common.hpp"

namespace bergman::detail {

// In-place DFT: forward computes sum_j x_j e^{-2 pi i jk/n}, backward uses
// the opposite sign. Unnormalized. Plans are cached per (size, direction).
void fft_inplace(std::vector<Complex>& data, bool forward);

}  // namespace bergman::detail
