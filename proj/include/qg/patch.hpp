#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qg/pointset.hpp"

namespace qg {

// An r-patch canonicalized up to translation: offsets relative to the center
// point (always present at 0), sorted lexicographically by exact key.
struct Patch {
  double radius{0.0};
  std::vector<IntVec> offset_keys;   // exact integer offsets, or 1e-9 quantized
  std::vector<Vec2> offsets;         // physical offsets, same order
  std::optional<std::vector<int>> mark_list;

  bool operator==(const Patch& o) const {
    return radius == o.radius && offset_keys == o.offset_keys && mark_list == o.mark_list;
  }
};

struct PatchHash {
  size_t operator()(const Patch& p) const;
};

struct PatchTable {
  double radius{0.0};
  struct Entry {
    Patch patch;
    size_t count{0};
    double frequency{0.0};
  };
  std::vector<Entry> entries;  // first-occurrence order
  Cube region;
  size_t total_centers{0};
};

struct FrequencyReport {
  std::vector<std::pair<double, double>> table;  // (side, count/area)
  double estimate{0.0};
  double spread{0.0};  // across the last three cubes
};

struct FlcReport {
  std::vector<std::pair<double, size_t>> class_counts;  // (region side, classes)
  bool stabilized{false};
};

Patch extract_patch(const PointSet& ps, size_t center_index, double r);
PatchTable enumerate_patches(const PointSet& ps, double r, Cube region);
// Counting window interpretation: centers are taken in the half-open cube of
// the given side, so lattice-aligned windows give exact integer area counts.
FrequencyReport patch_frequency(const PointSet& ps, const Patch& patch,
                                const std::vector<double>& cube_sides);
double cylinder_measure(double patch_freq, double v_volume);
FlcReport flc_report(const PointSet& ps, double r, const std::vector<double>& region_sides);

// Usable diameter bound for cylinder sets (any ball of this radius holds at
// most one point).
double eta_bound(const PointSet& ps);

std::string patch_table_csv(const PatchTable& table);

}  // namespace qg
