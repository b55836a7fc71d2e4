#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qg/common.hpp"

namespace qg {

// Integer preimage of the physical points: basis is a 2 x k real matrix,
// point i = basis * int_coords[i]. Kept so every patch comparison can run
// on exact integers.
struct Embedding {
  int k{2};
  std::vector<double> basis;  // row-major, 2*k entries
  std::vector<IntVec> int_coords;
  std::optional<std::vector<std::vector<double>>> internal_coords;

  Vec2 apply(const IntVec& iv) const {
    Vec2 p;
    for (int j = 0; j < k; ++j) {
      p.x += basis[static_cast<size_t>(j)] * static_cast<double>(iv[j]);
      p.y += basis[static_cast<size_t>(k + j)] * static_cast<double>(iv[j]);
    }
    return p;
  }
};

// Finite window of a Delone set in the time-frequency plane.
struct PointSet {
  int dim{2};
  std::vector<Vec2> points;
  std::optional<Embedding> embedding;
  std::optional<std::vector<int>> marks;
  Cube region;
  std::string provenance;
  bool warning_empty_window{false};

  size_t size() const { return points.size(); }
  bool has_embedding() const { return embedding.has_value(); }
  // Exact key of point i: integer preimage when embedded, 1e-9 quantization
  // otherwise.
  IntVec key(size_t i) const {
    if (embedding) return embedding->int_coords[i];
    return quantize_key(points[i]);
  }
  void validate() const;

  static PointSet from_points(std::vector<Vec2> pts, Cube region, std::string provenance);
};

struct CutProjectScheme {
  int total_dim{2};
  int physical_dim{1};  // physical dimension of this scheme (1 or 2)
  std::vector<double> lattice_basis;  // row-major total_dim x total_dim
  std::vector<std::pair<double, double>> window;  // half-open [a,b) per internal dim
  std::string provenance;
};

// D = image of Z^2 under ((1,phi),(1,1-phi)), W half-open of length phi.
CutProjectScheme fibonacci_scheme();
// Product of two Fibonacci schemes: physical dim 2, total dim 4.
CutProjectScheme fibonacci_product_scheme();

struct HoleCertificate {
  double lower{0.0};
  double upper{0.0};
  double grid_step{0.0};
  Cube region;
};

struct DensityReport {
  std::vector<std::pair<double, double>> table;  // (side, count/area)
  double estimate{0.0};
  double ucf_deviation{0.0};  // max spread across the last three cubes
};

// Generators ---------------------------------------------------------------

PointSet gen_lattice(const std::array<double, 4>& basis, Cube region);
PointSet gen_cut_project(const CutProjectScheme& scheme, Cube region);
// Sturmian subset of Z^2: {(m,n) : frac(m a1 + n a2) < beta}.
PointSet gen_sturmian(double alpha1, double alpha2, double beta, Cube region);

enum class MarkRule { thue_morse_2d, sturmian_mark };
struct MarkParams {
  double alpha1{0.0}, alpha2{0.0}, beta{0.5};
};
PointSet gen_marked_lattice(MarkRule rule, const MarkParams& params, Cube region);
PointSet gen_marked_lattice(const std::string& rule_name, const MarkParams& params, Cube region);

// Seeded uniform points (test fixture; not a quasicrystal).
PointSet gen_poisson(double intensity, Cube region, std::uint64_t seed);

// Transforms ---------------------------------------------------------------

PointSet apply_linear(const PointSet& ps, const std::array<double, 4>& A);
PointSet translate(const PointSet& ps, Vec2 z);

// Measurements -------------------------------------------------------------

HoleCertificate hole_radius(const PointSet& ps, Cube region, double grid_step);
int relative_separation(const PointSet& ps);
double min_separation(const PointSet& ps);
DensityReport density(const PointSet& ps, const std::vector<double>& cube_sides);
double hull_metric(const PointSet& a, const PointSet& b, double r_max);

// Thue-Morse bit: parity of the binary digit sum.
inline int thue_morse_bit(std::uint64_t n) {
  int p = 0;
  while (n) {
    p ^= static_cast<int>(n & 1u);
    n >>= 1;
  }
  return p;
}

// Uniform-grid spatial index for nearest-neighbor and membership queries.
class NeighborGrid {
 public:
  NeighborGrid(const std::vector<Vec2>& pts, double cell);
  // Distance from q to the nearest indexed point (infinity if empty).
  double nearest_dist(const Vec2& q) const;
  // Index of some point within tol of q, or -1.
  std::ptrdiff_t find(const Vec2& q, double tol = kCoordTol) const;

 private:
  const std::vector<Vec2>& pts_;
  double cell_;
  std::unordered_map<IntVec, std::vector<std::uint32_t>, IntVecHash> buckets_;
  IntVec cell_key(const Vec2& p) const;
};

}  // namespace qg
