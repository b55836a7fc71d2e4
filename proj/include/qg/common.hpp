#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qg {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kCoordTol = 1e-9;

// Point of the time-frequency plane; y is the frequency coordinate.
struct Vec2 {
  double x{0.0};
  double y{0.0};

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
  double norm_inf() const { return std::max(std::abs(x), std::abs(y)); }
};

inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Closed axis-aligned cube C_side(center): side length `side`, not radius.
struct Cube {
  double cx{0.0};
  double cy{0.0};
  double side{0.0};

  double half() const { return side / 2.0; }
  bool contains(const Vec2& p, double tol = kCoordTol) const {
    return std::abs(p.x - cx) <= half() + tol && std::abs(p.y - cy) <= half() + tol;
  }
  // Half-open variant [c-h, c+h), used where exact integer counts matter.
  bool contains_half_open(const Vec2& p, double tol = kCoordTol) const {
    return p.x - cx >= -half() - tol && p.x - cx < half() - tol &&
           p.y - cy >= -half() - tol && p.y - cy < half() - tol;
  }
  Cube shrunk(double margin) const { return {cx, cy, side - 2.0 * margin}; }
};

// Integer vector of dimension <= 4 (lattice preimage coordinates).
struct IntVec {
  int n{0};
  std::array<std::int64_t, 4> v{0, 0, 0, 0};

  IntVec() = default;
  IntVec(std::int64_t a, std::int64_t b) : n(2), v{a, b, 0, 0} {}
  static IntVec of(const std::vector<std::int64_t>& xs) {
    IntVec r;
    r.n = static_cast<int>(xs.size());
    for (int i = 0; i < r.n; ++i) r.v[static_cast<size_t>(i)] = xs[static_cast<size_t>(i)];
    return r;
  }
  std::int64_t operator[](int i) const { return v[static_cast<size_t>(i)]; }
  std::int64_t& operator[](int i) { return v[static_cast<size_t>(i)]; }
  bool operator==(const IntVec& o) const { return n == o.n && v == o.v; }
  bool operator<(const IntVec& o) const {
    if (n != o.n) return n < o.n;
    return v < o.v;
  }
  IntVec operator+(const IntVec& o) const {
    IntVec r = *this;
    for (int i = 0; i < n; ++i) r.v[static_cast<size_t>(i)] += o[i];
    return r;
  }
  IntVec operator-(const IntVec& o) const {
    IntVec r = *this;
    for (int i = 0; i < n; ++i) r.v[static_cast<size_t>(i)] -= o[i];
    return r;
  }
  IntVec operator-() const {
    IntVec r = *this;
    for (int i = 0; i < n; ++i) r.v[static_cast<size_t>(i)] = -r.v[static_cast<size_t>(i)];
    return r;
  }
};

struct IntVecHash {
  size_t operator()(const IntVec& k) const {
    std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(k.n);
    for (int i = 0; i < k.n; ++i) {
      h ^= static_cast<std::uint64_t>(k.v[static_cast<size_t>(i)]);
      h *= 1099511628211ull;
      h ^= h >> 29;
    }
    return static_cast<size_t>(h);
  }
};

// Quantize a real coordinate pair to the 1e-9 grid (fallback key when no
// integer embedding is available).
inline IntVec quantize_key(const Vec2& p) {
  return IntVec(static_cast<std::int64_t>(std::llround(p.x * 1e9)),
                static_cast<std::int64_t>(std::llround(p.y * 1e9)));
}

enum class Errc {
  singular_basis,
  empty_window,
  unknown_rule,
  empty_point_set,
  region_too_small,
  ball_exceeds_region,
  no_convergence,
  perturbation_failed,
  overlapping_translate,
  nyquist_violation,
  degenerate_interior,
  frame_operator_singular,
  incompatible_kernels,
  not_lattice_subset,
  no_marks,
  bad_input,
};

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

// splitmix64-based generator; deterministic across platforms.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  std::int64_t uniform_int(std::int64_t a, std::int64_t b) {
    return a + static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(b - a + 1));
  }
  // Box-Muller.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }
  cd cnormal() { return cd(normal(), normal()); }
};

}  // namespace qg
