#include "qg/window.hpp"

#include <cmath>

#include "qg/fft.hpp"

namespace qg {

// Eigen's dot conjugates its first argument, so <f,g> = step * g.dot(f).
cd inner(const Window& f, const Window& g) {
  if (!(f.grid == g.grid)) fail(Errc::bad_input, "inner: grid mismatch");
  return f.grid.step() * g.values.dot(f.values);
}

Window gaussian_window(const GridSpec& grid) {
  grid.validate();
  Window w;
  w.grid = grid;
  w.kind = "gaussian";
  w.values.resize(grid.n);
  const double c = std::pow(2.0, 0.25);
  for (int j = 0; j < grid.n; ++j) {
    const double t = grid.t(j);
    w.values[j] = c * std::exp(-kPi * t * t);
  }
  w.values /= w.norm2();
  return w;
}

Window hermite1_window(const GridSpec& grid) {
  grid.validate();
  Window w;
  w.grid = grid;
  w.kind = "hermite1";
  w.values.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double t = grid.t(j);
    w.values[j] = t * std::exp(-kPi * t * t);
  }
  w.values /= w.norm2();
  return w;
}

Window random_window(const GridSpec& grid, std::uint64_t seed) {
  grid.validate();
  Rng rng(seed);
  Window w;
  w.grid = grid;
  w.kind = "random";
  w.values.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) w.values[j] = rng.cnormal();
  w.values /= w.norm2();
  return w;
}

Window tf_shift(const Window& f, Vec2 z, bool enforce_margin) {
  if (enforce_margin && std::abs(z.y) > f.grid.nyquist_margin() + kCoordTol)
    fail(Errc::nyquist_violation, "tf_shift: |omega| exceeds the Nyquist margin");
  const int n = f.grid.n;
  const double L = f.grid.L;
  Window out;
  out.grid = f.grid;
  out.kind = f.kind.empty() ? "shifted" : f.kind + "+shift";
  std::vector<cd> buf(f.values.data(), f.values.data() + n);
  if (z.x != 0.0) {
    fft(buf, false);
    for (int k = 0; k < n; ++k) {
      const double xi = (k < n / 2 ? k : k - n) / L;  // signed bin frequency
      const double ang = -2.0 * kPi * xi * z.x;
      buf[static_cast<size_t>(k)] *= cd(std::cos(ang), std::sin(ang));
    }
    fft(buf, true);
  }
  out.values.resize(n);
  if (z.y != 0.0) {
    for (int j = 0; j < n; ++j) {
      const double ang = 2.0 * kPi * z.y * f.grid.t(j);
      out.values[j] = buf[static_cast<size_t>(j)] * cd(std::cos(ang), std::sin(ang));
    }
  } else {
    for (int j = 0; j < n; ++j) out.values[j] = buf[static_cast<size_t>(j)];
  }
  return out;
}

std::vector<cd> stft(const Window& f, const Window& g, const std::vector<Vec2>& points) {
  if (!(f.grid == g.grid)) fail(Errc::bad_input, "stft: grid mismatch");
  std::vector<cd> out;
  out.reserve(points.size());
  for (const auto& z : points) {
    const Window shifted = tf_shift(g, z);
    out.push_back(f.grid.step() * shifted.values.dot(f.values));
  }
  return out;
}

}  // namespace qg
