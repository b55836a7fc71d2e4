#pragma once

#include <complex>
#include <vector>

#include "qg/common.hpp"

namespace qg {

// In-place radix-2 DFT, X_k = sum_j x_j e^{-2 pi i jk/n} (forward).
// Inverse applies the conjugate kernel and divides by n.
void fft(std::vector<cd>& a, bool inverse);
void fft(cd* a, size_t n, bool inverse);

}  // namespace qg
