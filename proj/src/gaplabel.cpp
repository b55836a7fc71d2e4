#include "qg/gaplabel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace qg {

namespace {

bool is_integer_embedding(const PointSet& ps) {
  if (!ps.has_embedding() || ps.embedding->k != 2) return false;
  const auto& b = ps.embedding->basis;
  return std::abs(b[0] - 1.0) < 1e-12 && std::abs(b[1]) < 1e-12 && std::abs(b[2]) < 1e-12 &&
         std::abs(b[3] - 1.0) < 1e-12;
}

}  // namespace

GapLabelReport gap_label_generators(const PointSet& ps, double theta, double r) {
  if (!is_integer_embedding(ps))
    fail(Errc::not_lattice_subset, "gap_label_generators: points must lie in Z^2");
  GapLabelReport rep;
  rep.theta = theta;
  rep.patch_radius = r;
  rep.provenance = ps.provenance;
  rep.disclaimer = "generators approximate mu(C(Omega_trans,Z)) by patches of radius <= r";

  // half-open counting window: region shrunk by r, rounded down to an even
  // integer side so the window is lattice-aligned and the area is exact
  const double inner_side_f = ps.region.side - 2.0 * r;
  if (inner_side_f <= 0.0) fail(Errc::region_too_small, "gap_label_generators: region too small");
  const auto half = static_cast<std::int64_t>(std::floor(inner_side_f / 2.0 + kCoordTol));
  const double side = 2.0 * static_cast<double>(half);
  const Cube window{0.0, 0.0, side};
  const auto centers_expected = static_cast<std::uint64_t>(side * side);

  std::unordered_map<Patch, std::uint64_t, PatchHash> counts;
  std::uint64_t centers = 0;
  for (size_t i = 0; i < ps.size(); ++i) {
    if (!window.contains_half_open(ps.points[i])) continue;
    ++centers;
    ++counts[extract_patch(ps, i, r)];
  }
  if (centers == 0) fail(Errc::empty_point_set, "gap_label_generators: no centers in window");

  // density: exact 1 for a full marked lattice, measured otherwise
  if (centers == centers_expected && ps.marks) {
    rep.density = 1.0;
    rep.density_exact = true;
  } else {
    rep.density = static_cast<double>(centers) / (side * side);
    rep.density_exact = centers == centers_expected;
    if (rep.density_exact) rep.density = 1.0;
  }

  std::vector<std::uint64_t> distinct;
  for (const auto& [patch, c] : counts) distinct.push_back(c);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto area_u = static_cast<std::uint64_t>(side * side);
  for (const auto c : distinct) {
    rep.frequency_generators.push_back(static_cast<double>(c) / (side * side));
    rep.frequency_fractions.emplace_back(c, area_u);
  }
  rep.twisted_generator = theta / rep.density;
  return rep;
}

double clopen_measure(const PointSet& ps, int submark) {
  if (!ps.marks) fail(Errc::no_marks, "clopen_measure: point set carries no marks");
  if (ps.points.empty()) fail(Errc::empty_point_set, "clopen_measure: empty point set");
  size_t hit = 0;
  for (const int m : *ps.marks)
    if (m == submark) ++hit;
  return static_cast<double>(hit) / static_cast<double>(ps.size());
}

ScalingReport density_scaling_check(const PointSet& ps, const std::array<double, 4>& A) {
  const double det = A[0] * A[3] - A[1] * A[2];
  if (std::abs(det) < 1e-12) fail(Errc::singular_basis, "density_scaling_check: singular A");
  ScalingReport rep;
  rep.expected = std::abs(det);
  const double side = ps.region.side * 0.9;
  rep.dens_before = density(ps, {side / 2.0, side * 0.75, side}).estimate;
  const PointSet mapped = apply_linear(ps, A);
  const double mside = mapped.region.side * 0.9;
  rep.dens_after = density(mapped, {mside / 2.0, mside * 0.75, mside}).estimate;
  rep.ratio = rep.dens_before / rep.dens_after;
  rep.within_2pct = std::abs(rep.ratio - rep.expected) <= 0.02 * rep.expected;
  return rep;
}

std::string gap_label_json(const GapLabelReport& rep) {
  char buf[96];
  std::string out = "{\"theta\":";
  std::snprintf(buf, sizeof(buf), "%.17g", rep.theta);
  out += buf;
  std::snprintf(buf, sizeof(buf), ",\"density\":%.17g", rep.density);
  out += buf;
  out += rep.density_exact ? ",\"density_exact\":true" : ",\"density_exact\":false";
  std::snprintf(buf, sizeof(buf), ",\"patch_radius\":%.17g", rep.patch_radius);
  out += buf;
  out += ",\"frequency_generators\":[";
  for (size_t i = 0; i < rep.frequency_generators.size(); ++i) {
    if (i) out += ",";
    std::snprintf(buf, sizeof(buf), "%.17g", rep.frequency_generators[i]);
    out += buf;
  }
  out += "],\"frequency_fractions\":[";
  for (size_t i = 0; i < rep.frequency_fractions.size(); ++i) {
    if (i) out += ",";
    std::snprintf(buf, sizeof(buf), "[%llu,%llu]",
                  static_cast<unsigned long long>(rep.frequency_fractions[i].first),
                  static_cast<unsigned long long>(rep.frequency_fractions[i].second));
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "],\"twisted_generator\":%.17g", rep.twisted_generator);
  out += buf;
  out += ",\"provenance\":\"" + rep.provenance + "\",\"disclaimer\":\"" + rep.disclaimer + "\"}";
  return out;
}

}  // namespace qg
