#include "qg/fft.hpp"

#include <cmath>

namespace qg {

void fft(cd* a, size_t n, bool inverse) {
  if (n == 0 || (n & (n - 1)) != 0) fail(Errc::bad_input, "fft: length must be a power of two");
  // bit-reversal permutation
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  // twiddles computed directly per level; keeps error at the 1e-15 level
  const double sgn = inverse ? 1.0 : -1.0;
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len >> 1;
    std::vector<cd> w(half);
    for (size_t k = 0; k < half; ++k) {
      const double ang = sgn * 2.0 * kPi * static_cast<double>(k) / static_cast<double>(len);
      w[k] = cd(std::cos(ang), std::sin(ang));
    }
    for (size_t i = 0; i < n; i += len) {
      for (size_t k = 0; k < half; ++k) {
        const cd u = a[i + k];
        const cd t = a[i + k + half] * w[k];
        a[i + k] = u + t;
        a[i + k + half] = u - t;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) a[i] *= inv;
  }
}

void fft(std::vector<cd>& a, bool inverse) { fft(a.data(), a.size(), inverse); }

}  // namespace qg
