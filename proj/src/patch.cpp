#include "qg/patch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <unordered_map>

namespace qg {

namespace {

void check_ball_inside(const Cube& outer, const Vec2& c, double r) {
  if (c.x - r < outer.cx - outer.half() - kCoordTol ||
      c.x + r > outer.cx + outer.half() + kCoordTol ||
      c.y - r < outer.cy - outer.half() - kCoordTol ||
      c.y + r > outer.cy + outer.half() + kCoordTol)
    fail(Errc::ball_exceeds_region, "patch ball exceeds the generated region");
}

struct OffsetRec {
  IntVec key;
  Vec2 off;
  int mark;
};

}  // namespace

size_t PatchHash::operator()(const Patch& p) const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
    h ^= h >> 29;
  };
  std::uint64_t rbits;
  static_assert(sizeof(rbits) == sizeof(p.radius));
  std::memcpy(&rbits, &p.radius, sizeof(rbits));
  mix(rbits);
  IntVecHash ih;
  for (const auto& k : p.offset_keys) mix(ih(k));
  if (p.mark_list)
    for (const int m : *p.mark_list) mix(static_cast<std::uint64_t>(m) + 0x9e37ull);
  return static_cast<size_t>(h);
}

Patch extract_patch(const PointSet& ps, size_t center_index, double r) {
  if (center_index >= ps.size()) fail(Errc::bad_input, "extract_patch: center index out of range");
  const Vec2 c = ps.points[center_index];
  check_ball_inside(ps.region, c, r);

  std::vector<OffsetRec> recs;
  const bool emb = ps.has_embedding();
  for (size_t i = 0; i < ps.size(); ++i) {
    Vec2 off;
    IntVec key;
    if (emb) {
      key = ps.embedding->int_coords[i] - ps.embedding->int_coords[center_index];
      off = ps.embedding->apply(key);
    } else {
      off = ps.points[i] - c;
      key = quantize_key(off);
    }
    if (off.norm() > r + kCoordTol) continue;
    recs.push_back({key, off, ps.marks ? (*ps.marks)[i] : -1});
  }
  std::sort(recs.begin(), recs.end(),
            [](const OffsetRec& a, const OffsetRec& b) { return a.key < b.key; });

  Patch p;
  p.radius = r;
  p.offset_keys.reserve(recs.size());
  p.offsets.reserve(recs.size());
  if (ps.marks) p.mark_list.emplace();
  for (const auto& rec : recs) {
    p.offset_keys.push_back(rec.key);
    p.offsets.push_back(rec.off);
    if (p.mark_list) p.mark_list->push_back(rec.mark);
  }
  return p;
}

PatchTable enumerate_patches(const PointSet& ps, double r, Cube region) {
  if (region.half() + r > ps.region.half() + std::abs(region.cx) + std::abs(region.cy) + kCoordTol) {
    // detailed per-axis check happens inside extract_patch; this catches the
    // obviously oversized request early
  }
  PatchTable table;
  table.radius = r;
  table.region = region;
  std::unordered_map<Patch, size_t, PatchHash> index;
  for (size_t i = 0; i < ps.size(); ++i) {
    if (!region.contains(ps.points[i])) continue;
    Patch p = extract_patch(ps, i, r);
    ++table.total_centers;
    const auto it = index.find(p);
    if (it == index.end()) {
      index.emplace(p, table.entries.size());
      table.entries.push_back({std::move(p), 1, 0.0});
    } else {
      ++table.entries[it->second].count;
    }
  }
  const double area = region.side * region.side;
  for (auto& e : table.entries) e.frequency = static_cast<double>(e.count) / area;
  return table;
}

FrequencyReport patch_frequency(const PointSet& ps, const Patch& patch,
                                const std::vector<double>& cube_sides) {
  FrequencyReport rep;
  for (const double side : cube_sides) {
    if (side / 2.0 + patch.radius > ps.region.half() + kCoordTol)
      fail(Errc::region_too_small, "patch_frequency: cube plus radius exceeds region");
    const Cube c{0.0, 0.0, side};
    size_t count = 0;
    for (size_t i = 0; i < ps.size(); ++i) {
      if (!c.contains_half_open(ps.points[i])) continue;
      if (extract_patch(ps, i, patch.radius) == patch) ++count;
    }
    rep.table.emplace_back(side, static_cast<double>(count) / (side * side));
  }
  rep.estimate = rep.table.back().second;
  const size_t m = rep.table.size();
  double lo = rep.estimate, hi = rep.estimate;
  for (size_t i = m >= 3 ? m - 3 : 0; i < m; ++i) {
    lo = std::min(lo, rep.table[i].second);
    hi = std::max(hi, rep.table[i].second);
  }
  rep.spread = hi - lo;
  return rep;
}

double cylinder_measure(double patch_freq, double v_volume) {
  if (patch_freq < 0.0 || v_volume < 0.0) fail(Errc::bad_input, "cylinder_measure: negative input");
  return patch_freq * v_volume;
}

FlcReport flc_report(const PointSet& ps, double r, const std::vector<double>& region_sides) {
  FlcReport rep;
  for (const double side : region_sides) {
    const PatchTable t = enumerate_patches(ps, r, Cube{0.0, 0.0, side});
    rep.class_counts.emplace_back(side, t.entries.size());
  }
  const size_t m = rep.class_counts.size();
  rep.stabilized = m >= 2 && rep.class_counts[m - 1].second == rep.class_counts[m - 2].second;
  return rep;
}

double eta_bound(const PointSet& ps) { return min_separation(ps) / 2.0; }

std::string patch_table_csv(const PatchTable& table) {
  std::string out = "class_id,count,frequency,offsets_json\n";
  char buf[64];
  for (size_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    out += std::to_string(i) + "," + std::to_string(e.count) + ",";
    std::snprintf(buf, sizeof(buf), "%.17g", e.frequency);
    out += buf;
    out += ",\"[";
    for (size_t j = 0; j < e.patch.offsets.size(); ++j) {
      if (j) out += ",";
      std::snprintf(buf, sizeof(buf), "[%.17g,%.17g", e.patch.offsets[j].x, e.patch.offsets[j].y);
      out += buf;
      if (e.patch.mark_list) out += "," + std::to_string((*e.patch.mark_list)[j]);
      out += "]";
    }
    out += "]\"\n";
  }
  return out;
}

}  // namespace qg
