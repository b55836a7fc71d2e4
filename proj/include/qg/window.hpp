#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qg/common.hpp"

namespace qg {

// Periodic sample grid modeling M^1(R) windows: n samples (power of two),
// period L, t_j = -L/2 + j L/n. Frequencies live on the circle of
// circumference n/L; faithful use keeps |omega| <= n/(2L) - 1/L.
struct GridSpec {
  int n{512};
  double L{16.0};

  double step() const { return L / n; }
  double t(int j) const { return -L / 2.0 + j * step(); }
  double nyquist_margin() const { return n / (2.0 * L) - 1.0 / L; }
  double band() const { return static_cast<double>(n) / L; }
  bool operator==(const GridSpec& o) const { return n == o.n && L == o.L; }

  void validate() const {
    if (n < 64 || (n & (n - 1)) != 0) fail(Errc::bad_input, "GridSpec: n must be a power of two >= 64");
    if (L <= 0.0) fail(Errc::bad_input, "GridSpec: L must be > 0");
  }
};

struct Window {
  GridSpec grid;
  Eigen::VectorXcd values;
  std::string kind;

  double norm2() const { return std::sqrt(grid.step() * values.squaredNorm()); }
};

// <f,g> = step * sum f conj(g); linear in the first slot.
cd inner(const Window& f, const Window& g);

Window gaussian_window(const GridSpec& grid);
Window hermite1_window(const GridSpec& grid);
Window random_window(const GridSpec& grid, std::uint64_t seed);

// pi(z) = M_omega T_x: circular fractional shift via a spectral phase ramp,
// then pointwise modulation. Exactly unitary for any real z.
Window tf_shift(const Window& f, Vec2 z, bool enforce_margin = true);

// V_g f(z) = <f, pi(z) g> per point.
std::vector<cd> stft(const Window& f, const Window& g, const std::vector<Vec2>& points);

}  // namespace qg
