#include "qg/holefill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace qg {

namespace {

struct HoleScan {
  double lower;
  Vec2 argmax;
};

HoleScan deepest_hole(const std::vector<Vec2>& pts, const Cube& region, double step,
                      double bucket_cell) {
  NeighborGrid grid(pts, bucket_cell);
  const auto steps = static_cast<std::int64_t>(std::floor(region.side / step));
  HoleScan out{0.0, {region.cx - region.half(), region.cy - region.half()}};
  for (std::int64_t i = 0; i <= steps; ++i)
    for (std::int64_t j = 0; j <= steps; ++j) {
      const Vec2 q{region.cx - region.half() + static_cast<double>(i) * step,
                   region.cy - region.half() + static_cast<double>(j) * step};
      const double d = grid.nearest_dist(q);
      if (d > out.lower) {
        out.lower = d;
        out.argmax = q;
      }
    }
  return out;
}

}  // namespace

bool in_difference_set(const PointSet& ps, Vec2 v) {
  if (v.norm() < kCoordTol) return true;  // 0 is always in Lambda - Lambda
  if (ps.has_embedding() && ps.embedding->k == 2 && ps.provenance.rfind("lattice", 0) == 0) {
    const auto& b = ps.embedding->basis;
    const double det = b[0] * b[3] - b[1] * b[2];
    const double m = (b[3] * v.x - b[1] * v.y) / det;
    const double n = (-b[2] * v.x + b[0] * v.y) / det;
    return std::abs(m - std::llround(m)) < kCoordTol && std::abs(n - std::llround(n)) < kCoordTol;
  }
  const double cell =
      std::max(1e-6, ps.region.side / std::sqrt(4.0 + static_cast<double>(ps.size())));
  NeighborGrid grid(ps.points, cell);
  for (const auto& p : ps.points) {
    const Vec2 q = p + v;
    if (!ps.region.contains(q)) continue;
    if (grid.find(q) >= 0) return true;
  }
  return false;
}

PointSet union_translates(const PointSet& ps, const std::vector<Vec2>& translates) {
  for (size_t i = 0; i < translates.size(); ++i)
    for (size_t j = i + 1; j < translates.size(); ++j) {
      const Vec2 d = translates[i] - translates[j];
      if (in_difference_set(ps, d))
        fail(Errc::overlapping_translate, "union_translates: z_i - z_j lies in Lambda - Lambda");
    }
  std::vector<Vec2> merged;
  merged.reserve(ps.size() * translates.size());
  for (const auto& t : translates)
    for (const auto& p : ps.points) merged.push_back(p + t);
  PointSet out = PointSet::from_points(std::move(merged), ps.region, ps.provenance + "+union");
  if (translates.size() > 1 && min_separation(out) < 1e-9)
    fail(Errc::overlapping_translate, "union_translates: duplicate points within 1e-9");
  return out;
}

FillReport fill_holes(const PointSet& ps, double eps, int max_iters, FillOptions opts) {
  if (eps <= 0.0) fail(Errc::bad_input, "fill_holes: eps must be > 0");
  if (ps.points.empty()) fail(Errc::empty_point_set, "fill_holes: empty point set");
  const double step = opts.grid_step > 0.0 ? opts.grid_step : eps / 16.0;
  const double margin = opts.interior_margin > 0.0 ? opts.interior_margin
                                                   : std::max(ps.region.side / 6.0, 2.0 * eps);
  const Cube interior = ps.region.shrunk(margin);
  if (interior.side <= 0.0) fail(Errc::bad_input, "fill_holes: region too small for interior margin");
  const double cell =
      std::max(step, ps.region.side / std::sqrt(4.0 + static_cast<double>(ps.size())));

  FillReport rep;
  rep.eps = eps;
  rep.translates.push_back({0.0, 0.0});

  auto admissible = [&](const Vec2& v) {
    for (const auto& t : rep.translates)
      if (in_difference_set(ps, v - t)) return false;
    return true;
  };
  auto pick_translate = [&](const Vec2& c) {
    // nearest point of the original set, deterministic tie-break by index
    size_t zi = 0;
    double best = std::numeric_limits<double>::max();
    for (size_t i = 0; i < ps.points.size(); ++i) {
      const double d = dist(ps.points[i], c);
      if (d < best - 1e-15) {
        best = d;
        zi = i;
      }
    }
    const Vec2 z = ps.points[zi];
    Vec2 v = c - z;
    if (admissible(v)) return v;
    for (int k = 1; k <= opts.perturb_radii; ++k)
      for (int a = 0; a < opts.perturb_angles; ++a) {
        const double rad = eps / 40.0 * static_cast<double>(k);
        const double ang = 2.0 * kPi * static_cast<double>(a) / opts.perturb_angles;
        const Vec2 cand = Vec2{c.x + rad * std::cos(ang), c.y + rad * std::sin(ang)} - z;
        if (admissible(cand)) return cand;
      }
    fail(Errc::perturbation_failed, "fill_holes: no admissible perturbation found");
  };
  auto certify = [&](const std::vector<Vec2>& pts) {
    const HoleScan scan = deepest_hole(pts, interior, step, cell);
    HoleCertificate cert;
    cert.lower = scan.lower;
    cert.upper = scan.lower + step * std::sqrt(2.0) / 2.0;
    cert.grid_step = step;
    cert.region = interior;
    return std::pair<HoleCertificate, Vec2>{cert, scan.argmax};
  };

  std::vector<Vec2> current = ps.points;
  auto [cert, argmax] = certify(current);
  rep.hole_sequence.push_back(cert);
  for (int iter = 0; iter < max_iters; ++iter) {
    rep.iterations = iter;
    if (rep.hole_sequence.back().upper < eps) return rep;
    // several hole types can share the current depth; fill until the
    // certificate strictly drops, as the patch-by-patch argument would
    const double level = rep.hole_sequence.back().lower;
    const double drop = std::max(2.0 * step, 0.02 * level);
    for (int inner = 0; inner < 8; ++inner) {
      const Vec2 v = pick_translate(argmax);
      rep.translates.push_back(v);
      for (const auto& p : ps.points) current.push_back(p + v);
      std::tie(cert, argmax) = certify(current);
      if (cert.lower < level - drop || cert.upper < eps) break;
    }
    rep.hole_sequence.push_back(cert);
  }
  rep.iterations = max_iters;
  if (rep.hole_sequence.back().upper < eps) return rep;
  fail(Errc::no_convergence, "fill_holes: hole still >= eps after max_iters");
}

}  // namespace qg
