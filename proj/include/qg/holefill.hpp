#pragma once

#include <vector>

#include "qg/pointset.hpp"

namespace qg {

struct FillOptions {
  double grid_step{0.0};        // 0 -> eps/16
  double interior_margin{0.0};  // 0 -> initial hole upper bound + eps
  int perturb_radii{8};
  int perturb_angles{8};
};

struct FillReport {
  std::vector<Vec2> translates;            // z_1 = (0,0) first
  std::vector<HoleCertificate> hole_sequence;
  int iterations{0};
  double eps{0.0};
};

// Lemma-style hole filling: returns translate vectors whose union has a
// certified hole upper bound below eps on the interior region.
FillReport fill_holes(const PointSet& ps, double eps, int max_iters, FillOptions opts = {});

// Materializes the union of translates, rejecting overlaps.
PointSet union_translates(const PointSet& ps, const std::vector<Vec2>& translates);

// Finite-region test for v in Lambda - Lambda. Exact integer test when the
// set is a full lattice image; otherwise a bucketed pair search over the
// observed region with tolerance 1e-9.
bool in_difference_set(const PointSet& ps, Vec2 v);

}  // namespace qg
