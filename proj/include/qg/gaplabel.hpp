#pragma once

#include <string>
#include <vector>

#include "qg/patch.hpp"

namespace qg {

struct GapLabelReport {
  double theta{0.0};
  double density{0.0};
  bool density_exact{false};
  double patch_radius{0.0};
  std::vector<double> frequency_generators;     // distinct, sorted ascending
  std::vector<std::pair<std::uint64_t, std::uint64_t>> frequency_fractions;  // count / centers
  double twisted_generator{0.0};
  std::string provenance;
  std::string disclaimer;
};

// Gap labeling group generators for Z^2-subset quasicrystals at radius r:
// distinct patch frequencies plus theta / Dens(Lambda). Patch counting runs
// on the half-open window obtained by shrinking the generated region by r,
// so lattice-aligned windows give exact rational frequencies.
GapLabelReport gap_label_generators(const PointSet& ps, double theta, double r);

// Fraction of points carrying the given mark (measure of the transversal
// clopen set).
double clopen_measure(const PointSet& ps, int submark);

struct ScalingReport {
  double dens_before{0.0};
  double dens_after{0.0};
  double ratio{0.0};
  double expected{0.0};  // |det A|
  bool within_2pct{false};
};
ScalingReport density_scaling_check(const PointSet& ps, const std::array<double, 4>& A);

std::string gap_label_json(const GapLabelReport& rep);

}  // namespace qg
