#include "qg/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qg {

namespace {

double frac(double x) { return x - std::floor(x); }

// Gauss-Jordan inverse for k <= 4.
std::vector<double> invert(const std::vector<double>& m, int k) {
  std::vector<double> a(m);
  std::vector<double> inv(static_cast<size_t>(k * k), 0.0);
  for (int i = 0; i < k; ++i) inv[static_cast<size_t>(i * k + i)] = 1.0;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a[static_cast<size_t>(r * k + col)]) >
          std::abs(a[static_cast<size_t>(piv * k + col)]))
        piv = r;
    if (std::abs(a[static_cast<size_t>(piv * k + col)]) < 1e-12)
      fail(Errc::singular_basis, "lattice basis is singular");
    if (piv != col)
      for (int j = 0; j < k; ++j) {
        std::swap(a[static_cast<size_t>(piv * k + j)], a[static_cast<size_t>(col * k + j)]);
        std::swap(inv[static_cast<size_t>(piv * k + j)], inv[static_cast<size_t>(col * k + j)]);
      }
    const double d = a[static_cast<size_t>(col * k + col)];
    for (int j = 0; j < k; ++j) {
      a[static_cast<size_t>(col * k + j)] /= d;
      inv[static_cast<size_t>(col * k + j)] /= d;
    }
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = a[static_cast<size_t>(r * k + col)];
      if (f == 0.0) continue;
      for (int j = 0; j < k; ++j) {
        a[static_cast<size_t>(r * k + j)] -= f * a[static_cast<size_t>(col * k + j)];
        inv[static_cast<size_t>(r * k + j)] -= f * inv[static_cast<size_t>(col * k + j)];
      }
    }
  }
  return inv;
}

struct LexByKey {
  bool operator()(const std::pair<IntVec, size_t>& a, const std::pair<IntVec, size_t>& b) const {
    return a.first < b.first;
  }
};

// Sorts points (and parallel arrays) lexicographically by integer key.
void sort_by_int_coords(PointSet& ps) {
  if (!ps.embedding) return;
  const size_t n = ps.points.size();
  std::vector<std::pair<IntVec, size_t>> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = {ps.embedding->int_coords[i], i};
  std::sort(order.begin(), order.end(), LexByKey{});
  std::vector<Vec2> pts(n);
  std::vector<IntVec> ics(n);
  std::optional<std::vector<std::vector<double>>> internals;
  if (ps.embedding->internal_coords) internals.emplace(n);
  std::optional<std::vector<int>> marks;
  if (ps.marks) marks.emplace(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t s = order[i].second;
    pts[i] = ps.points[s];
    ics[i] = ps.embedding->int_coords[s];
    if (internals) (*internals)[i] = (*ps.embedding->internal_coords)[s];
    if (marks) (*marks)[i] = (*ps.marks)[s];
  }
  ps.points = std::move(pts);
  ps.embedding->int_coords = std::move(ics);
  ps.embedding->internal_coords = std::move(internals);
  ps.marks = std::move(marks);
}

}  // namespace

void PointSet::validate() const {
  if (marks && marks->size() != points.size())
    fail(Errc::bad_input, "marks must have one entry per point");
  if (embedding) {
    if (embedding->int_coords.size() != points.size())
      fail(Errc::bad_input, "embedding int_coords size mismatch");
    for (size_t i = 0; i < points.size(); ++i) {
      const Vec2 p = embedding->apply(embedding->int_coords[i]);
      const double scale = std::max(1.0, points[i].norm());
      if (dist(p, points[i]) > 1e-12 * scale)
        fail(Errc::bad_input, "embedding does not reproduce points");
    }
  }
  if (points.size() >= 2 && min_separation(*this) <= 0.0)
    fail(Errc::bad_input, "points are not uniformly discrete");
}

PointSet PointSet::from_points(std::vector<Vec2> pts, Cube region, std::string provenance) {
  PointSet ps;
  ps.points = std::move(pts);
  ps.region = region;
  ps.provenance = std::move(provenance);
  return ps;
}

PointSet gen_lattice(const std::array<double, 4>& basis, Cube region) {
  const double det = basis[0] * basis[3] - basis[1] * basis[2];
  if (std::abs(det) < 1e-12) fail(Errc::singular_basis, "gen_lattice: |det A| < 1e-12");
  if (region.side <= 0.0) fail(Errc::bad_input, "gen_lattice: region side must be > 0");
  const std::vector<double> inv = invert({basis[0], basis[1], basis[2], basis[3]}, 2);
  // integer bounding box from the region corners through A^{-1}
  double mlo = std::numeric_limits<double>::max(), mhi = -mlo;
  double nlo = mlo, nhi = -mlo;
  for (int cx = -1; cx <= 1; cx += 2)
    for (int cy = -1; cy <= 1; cy += 2) {
      const double px = region.cx + cx * region.half();
      const double py = region.cy + cy * region.half();
      const double m = inv[0] * px + inv[1] * py;
      const double n = inv[2] * px + inv[3] * py;
      mlo = std::min(mlo, m); mhi = std::max(mhi, m);
      nlo = std::min(nlo, n); nhi = std::max(nhi, n);
    }
  PointSet ps;
  ps.region = region;
  ps.provenance = "lattice";
  Embedding emb;
  emb.k = 2;
  emb.basis = {basis[0], basis[1], basis[2], basis[3]};
  for (std::int64_t m = static_cast<std::int64_t>(std::floor(mlo)) - 1;
       m <= static_cast<std::int64_t>(std::ceil(mhi)) + 1; ++m)
    for (std::int64_t n = static_cast<std::int64_t>(std::floor(nlo)) - 1;
         n <= static_cast<std::int64_t>(std::ceil(nhi)) + 1; ++n) {
      const Vec2 p{basis[0] * static_cast<double>(m) + basis[1] * static_cast<double>(n),
                   basis[2] * static_cast<double>(m) + basis[3] * static_cast<double>(n)};
      if (!region.contains(p)) continue;
      ps.points.push_back(p);
      emb.int_coords.emplace_back(m, n);
    }
  ps.embedding = std::move(emb);
  sort_by_int_coords(ps);
  return ps;
}

CutProjectScheme fibonacci_scheme() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CutProjectScheme s;
  s.total_dim = 2;
  s.physical_dim = 1;
  s.lattice_basis = {1.0, phi, 1.0, 1.0 - phi};
  s.window = {{0.0, phi}};
  s.provenance = "fibonacci";
  return s;
}

CutProjectScheme fibonacci_product_scheme() {
  const CutProjectScheme f = fibonacci_scheme();
  CutProjectScheme s;
  s.total_dim = 4;
  s.physical_dim = 2;
  // rows: physical x, physical y, internal x*, internal y*
  s.lattice_basis = {
      f.lattice_basis[0], f.lattice_basis[1], 0.0, 0.0,
      0.0, 0.0, f.lattice_basis[0], f.lattice_basis[1],
      f.lattice_basis[2], f.lattice_basis[3], 0.0, 0.0,
      0.0, 0.0, f.lattice_basis[2], f.lattice_basis[3]};
  s.window = {f.window[0], f.window[0]};
  s.provenance = "fibonacci_product";
  return s;
}

PointSet gen_cut_project(const CutProjectScheme& scheme, Cube region) {
  const int k = scheme.total_dim;
  const int pd = scheme.physical_dim;
  const int id = k - pd;
  if (static_cast<int>(scheme.window.size()) != id)
    fail(Errc::bad_input, "gen_cut_project: window dimension mismatch");
  double wvol = 1.0;
  for (const auto& [a, b] : scheme.window) wvol *= (b - a);

  PointSet ps;
  ps.region = region;
  ps.provenance = scheme.provenance.empty() ? "cut_project" : scheme.provenance;
  if (wvol <= 0.0) {
    ps.warning_empty_window = true;
    Embedding emb;
    emb.k = k;
    emb.basis.assign(static_cast<size_t>(2 * k), 0.0);
    for (int j = 0; j < k; ++j) {
      emb.basis[static_cast<size_t>(j)] = scheme.lattice_basis[static_cast<size_t>(j)];
      emb.basis[static_cast<size_t>(k + j)] =
          pd >= 2 ? scheme.lattice_basis[static_cast<size_t>(k + j)] : 0.0;
    }
    emb.internal_coords.emplace();
    ps.embedding = std::move(emb);
    return ps;
  }

  // target box: physical coords in region, internal coords in the window
  std::vector<std::pair<double, double>> box(static_cast<size_t>(k));
  box[0] = {region.cx - region.half(), region.cx + region.half()};
  if (pd >= 2) box[1] = {region.cy - region.half(), region.cy + region.half()};
  for (int j = 0; j < id; ++j) box[static_cast<size_t>(pd + j)] = scheme.window[static_cast<size_t>(j)];

  const std::vector<double> inv = invert(scheme.lattice_basis, k);
  std::vector<double> lo(static_cast<size_t>(k), std::numeric_limits<double>::max());
  std::vector<double> hi(static_cast<size_t>(k), -std::numeric_limits<double>::max());
  for (int corner = 0; corner < (1 << k); ++corner) {
    std::vector<double> y(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j)
      y[static_cast<size_t>(j)] = (corner >> j) & 1 ? box[static_cast<size_t>(j)].second
                                                    : box[static_cast<size_t>(j)].first;
    for (int i = 0; i < k; ++i) {
      double m = 0.0;
      for (int j = 0; j < k; ++j) m += inv[static_cast<size_t>(i * k + j)] * y[static_cast<size_t>(j)];
      lo[static_cast<size_t>(i)] = std::min(lo[static_cast<size_t>(i)], m);
      hi[static_cast<size_t>(i)] = std::max(hi[static_cast<size_t>(i)], m);
    }
  }

  Embedding emb;
  emb.k = k;
  emb.basis.assign(static_cast<size_t>(2 * k), 0.0);
  for (int j = 0; j < k; ++j) {
    emb.basis[static_cast<size_t>(j)] = scheme.lattice_basis[static_cast<size_t>(j)];
    emb.basis[static_cast<size_t>(k + j)] =
        pd >= 2 ? scheme.lattice_basis[static_cast<size_t>(k + j)] : 0.0;
  }
  emb.internal_coords.emplace();

  std::vector<std::int64_t> m(static_cast<size_t>(k));
  std::vector<std::int64_t> mlo(static_cast<size_t>(k)), mhi(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    mlo[static_cast<size_t>(i)] = static_cast<std::int64_t>(std::floor(lo[static_cast<size_t>(i)])) - 1;
    mhi[static_cast<size_t>(i)] = static_cast<std::int64_t>(std::ceil(hi[static_cast<size_t>(i)])) + 1;
  }
  // odometer over the integer box
  std::vector<std::int64_t> cur(mlo);
  while (true) {
    std::vector<double> y(static_cast<size_t>(k), 0.0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        y[static_cast<size_t>(i)] +=
            scheme.lattice_basis[static_cast<size_t>(i * k + j)] * static_cast<double>(cur[static_cast<size_t>(j)]);
    const Vec2 p{y[0], pd >= 2 ? y[1] : 0.0};
    bool ok = region.contains(p);
    for (int j = 0; ok && j < id; ++j) {
      const double v = y[static_cast<size_t>(pd + j)];
      const auto& [a, b] = scheme.window[static_cast<size_t>(j)];
      ok = v >= a - kCoordTol && v < b - kCoordTol;
    }
    if (ok) {
      ps.points.push_back(p);
      emb.int_coords.push_back(IntVec::of(cur));
      std::vector<double> internal(static_cast<size_t>(id));
      for (int j = 0; j < id; ++j) internal[static_cast<size_t>(j)] = y[static_cast<size_t>(pd + j)];
      emb.internal_coords->push_back(std::move(internal));
    }
    int i = 0;
    for (; i < k; ++i) {
      if (++cur[static_cast<size_t>(i)] <= mhi[static_cast<size_t>(i)]) break;
      cur[static_cast<size_t>(i)] = mlo[static_cast<size_t>(i)];
    }
    if (i == k) break;
  }
  ps.embedding = std::move(emb);
  sort_by_int_coords(ps);
  return ps;
}

PointSet gen_sturmian(double alpha1, double alpha2, double beta, Cube region) {
  PointSet ps;
  ps.region = region;
  ps.provenance = "sturmian_subset";
  Embedding emb;
  emb.k = 2;
  emb.basis = {1.0, 0.0, 0.0, 1.0};
  const auto xlo = static_cast<std::int64_t>(std::ceil(region.cx - region.half() - kCoordTol));
  const auto xhi = static_cast<std::int64_t>(std::floor(region.cx + region.half() + kCoordTol));
  const auto ylo = static_cast<std::int64_t>(std::ceil(region.cy - region.half() - kCoordTol));
  const auto yhi = static_cast<std::int64_t>(std::floor(region.cy + region.half() + kCoordTol));
  for (std::int64_t m = xlo; m <= xhi; ++m)
    for (std::int64_t n = ylo; n <= yhi; ++n) {
      if (frac(static_cast<double>(m) * alpha1 + static_cast<double>(n) * alpha2) >= beta) continue;
      ps.points.push_back({static_cast<double>(m), static_cast<double>(n)});
      emb.int_coords.emplace_back(m, n);
    }
  ps.embedding = std::move(emb);
  sort_by_int_coords(ps);
  return ps;
}

PointSet gen_marked_lattice(MarkRule rule, const MarkParams& params, Cube region) {
  PointSet ps;
  ps.region = region;
  ps.provenance = rule == MarkRule::thue_morse_2d ? "thue_morse_2d" : "sturmian_mark";
  Embedding emb;
  emb.k = 2;
  emb.basis = {1.0, 0.0, 0.0, 1.0};
  std::vector<int> marks;
  const auto xlo = static_cast<std::int64_t>(std::ceil(region.cx - region.half() - kCoordTol));
  const auto xhi = static_cast<std::int64_t>(std::floor(region.cx + region.half() + kCoordTol));
  const auto ylo = static_cast<std::int64_t>(std::ceil(region.cy - region.half() - kCoordTol));
  const auto yhi = static_cast<std::int64_t>(std::floor(region.cy + region.half() + kCoordTol));
  for (std::int64_t m = xlo; m <= xhi; ++m)
    for (std::int64_t n = ylo; n <= yhi; ++n) {
      ps.points.push_back({static_cast<double>(m), static_cast<double>(n)});
      emb.int_coords.emplace_back(m, n);
      if (rule == MarkRule::thue_morse_2d) {
        marks.push_back(thue_morse_bit(static_cast<std::uint64_t>(std::abs(m))) ^
                        thue_morse_bit(static_cast<std::uint64_t>(std::abs(n))));
      } else {
        const double f = frac(static_cast<double>(m) * params.alpha1 +
                              static_cast<double>(n) * params.alpha2);
        marks.push_back(f < params.beta ? 1 : 0);
      }
    }
  ps.embedding = std::move(emb);
  ps.marks = std::move(marks);
  sort_by_int_coords(ps);
  return ps;
}

PointSet gen_marked_lattice(const std::string& rule_name, const MarkParams& params, Cube region) {
  if (rule_name == "thue_morse_2d") return gen_marked_lattice(MarkRule::thue_morse_2d, params, region);
  if (rule_name == "sturmian_mark") return gen_marked_lattice(MarkRule::sturmian_mark, params, region);
  fail(Errc::unknown_rule, "unknown marking rule: " + rule_name);
}

PointSet gen_poisson(double intensity, Cube region, std::uint64_t seed) {
  Rng rng(seed);
  const double area = region.side * region.side;
  const auto count = static_cast<size_t>(std::llround(intensity * area));
  PointSet ps;
  ps.region = region;
  ps.provenance = "poisson_fixture";
  ps.points.reserve(count);
  for (size_t i = 0; i < count; ++i)
    ps.points.push_back({rng.uniform(region.cx - region.half(), region.cx + region.half()),
                         rng.uniform(region.cy - region.half(), region.cy + region.half())});
  return ps;
}

PointSet apply_linear(const PointSet& ps, const std::array<double, 4>& A) {
  const double det = A[0] * A[3] - A[1] * A[2];
  if (std::abs(det) < 1e-12) fail(Errc::singular_basis, "apply_linear: |det A| < 1e-12");
  PointSet out = ps;
  for (auto& p : out.points) p = {A[0] * p.x + A[1] * p.y, A[2] * p.x + A[3] * p.y};
  if (out.embedding) {
    const int k = out.embedding->k;
    std::vector<double> nb(static_cast<size_t>(2 * k));
    for (int j = 0; j < k; ++j) {
      const double bx = ps.embedding->basis[static_cast<size_t>(j)];
      const double by = ps.embedding->basis[static_cast<size_t>(k + j)];
      nb[static_cast<size_t>(j)] = A[0] * bx + A[1] * by;
      nb[static_cast<size_t>(k + j)] = A[2] * bx + A[3] * by;
    }
    out.embedding->basis = std::move(nb);
  }
  // largest centered axis-aligned cube guaranteed inside A * (old region)
  const double r0 = std::abs(A[3] / det) + std::abs(A[1] / det);
  const double r1 = std::abs(A[2] / det) + std::abs(A[0] / det);
  out.region.cx = 0.0;
  out.region.cy = 0.0;
  out.region.side = ps.region.side / std::max(r0, r1);
  out.provenance = ps.provenance + "+linear";
  return out;
}

PointSet translate(const PointSet& ps, Vec2 z) {
  PointSet out = ps;
  for (auto& p : out.points) p = p + z;
  out.region.cx += z.x;
  out.region.cy += z.y;
  out.provenance = ps.provenance + "+translate";
  if (out.embedding) {
    // keep the embedding only when z is itself a lattice vector (k == 2)
    bool kept = false;
    if (out.embedding->k == 2) {
      const auto& b = out.embedding->basis;
      const double det = b[0] * b[3] - b[1] * b[2];
      if (std::abs(det) > 1e-12) {
        const double m = (b[3] * z.x - b[1] * z.y) / det;
        const double n = (-b[2] * z.x + b[0] * z.y) / det;
        if (std::abs(m - std::llround(m)) < kCoordTol && std::abs(n - std::llround(n)) < kCoordTol) {
          const IntVec dz(std::llround(m), std::llround(n));
          for (auto& iv : out.embedding->int_coords) iv = iv + dz;
          kept = true;
        }
      }
    }
    if (!kept) out.embedding.reset();
  }
  return out;
}

// NeighborGrid ---------------------------------------------------------------

NeighborGrid::NeighborGrid(const std::vector<Vec2>& pts, double cell) : pts_(pts), cell_(cell) {
  for (std::uint32_t i = 0; i < pts.size(); ++i) buckets_[cell_key(pts[i])].push_back(i);
}

IntVec NeighborGrid::cell_key(const Vec2& p) const {
  return IntVec(static_cast<std::int64_t>(std::floor(p.x / cell_)),
                static_cast<std::int64_t>(std::floor(p.y / cell_)));
}

double NeighborGrid::nearest_dist(const Vec2& q) const {
  if (pts_.empty()) return std::numeric_limits<double>::infinity();
  const IntVec c = cell_key(q);
  double best = std::numeric_limits<double>::infinity();
  for (int ring = 0;; ++ring) {
    bool any = false;
    for (std::int64_t dx = -ring; dx <= ring; ++dx)
      for (std::int64_t dy = -ring; dy <= ring; ++dy) {
        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
        const auto it = buckets_.find(IntVec(c[0] + dx, c[1] + dy));
        if (it == buckets_.end()) continue;
        any = true;
        for (const auto i : it->second) best = std::min(best, dist(q, pts_[i]));
      }
    // once a point is found, one extra ring guarantees correctness
    if (best < std::numeric_limits<double>::infinity() &&
        best <= cell_ * static_cast<double>(ring)) {
      return best;
    }
    if (ring > 2 && !any && best < std::numeric_limits<double>::infinity()) return best;
    if (static_cast<double>(ring) * cell_ > 1e6) return best;  // safety net
  }
}

std::ptrdiff_t NeighborGrid::find(const Vec2& q, double tol) const {
  const IntVec c = cell_key(q);
  for (std::int64_t dx = -1; dx <= 1; ++dx)
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      const auto it = buckets_.find(IntVec(c[0] + dx, c[1] + dy));
      if (it == buckets_.end()) continue;
      for (const auto i : it->second)
        if (dist(q, pts_[i]) <= tol) return static_cast<std::ptrdiff_t>(i);
    }
  return -1;
}

// Measurements ---------------------------------------------------------------

HoleCertificate hole_radius(const PointSet& ps, Cube region, double grid_step) {
  if (ps.points.empty()) fail(Errc::empty_point_set, "hole_radius: empty point set");
  if (grid_step <= 0.0) fail(Errc::bad_input, "hole_radius: grid_step must be > 0");
  const double cell = std::max(grid_step, ps.region.side / std::sqrt(4.0 + static_cast<double>(ps.size())));
  NeighborGrid grid(ps.points, cell);
  const auto steps = static_cast<std::int64_t>(std::floor(region.side / grid_step));
  double lower = 0.0;
  for (std::int64_t i = 0; i <= steps; ++i)
    for (std::int64_t j = 0; j <= steps; ++j) {
      const Vec2 q{region.cx - region.half() + static_cast<double>(i) * grid_step,
                   region.cy - region.half() + static_cast<double>(j) * grid_step};
      const double d = grid.nearest_dist(q);
      if (d > lower) lower = d;
    }
  HoleCertificate cert;
  cert.lower = lower;
  cert.upper = lower + grid_step * std::sqrt(2.0) / 2.0;
  cert.grid_step = grid_step;
  cert.region = region;
  return cert;
}

int relative_separation(const PointSet& ps) {
  if (ps.points.empty()) fail(Errc::empty_point_set, "relative_separation: empty point set");
  std::vector<Vec2> pts = ps.points;
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  const double tol = kCoordTol;
  int best = 1;
  size_t lo = 0;
  std::vector<double> ys;
  for (size_t i = 0; i < pts.size(); ++i) {
    // x-window anchored at pts[i].x: [x_i, x_i + 1]
    while (lo < pts.size() && pts[lo].x < pts[i].x - tol) ++lo;
    ys.clear();
    for (size_t j = i; j < pts.size() && pts[j].x <= pts[i].x + 1.0 + tol; ++j) ys.push_back(pts[j].y);
    std::sort(ys.begin(), ys.end());
    size_t hi = 0;
    for (size_t a = 0; a < ys.size(); ++a) {
      if (hi < a) hi = a;
      while (hi + 1 < ys.size() && ys[hi + 1] <= ys[a] + 1.0 + tol) ++hi;
      best = std::max(best, static_cast<int>(hi - a + 1));
    }
  }
  return best;
}

double min_separation(const PointSet& ps) {
  if (ps.points.size() < 2) fail(Errc::bad_input, "min_separation: need at least 2 points");
  const double cell = std::max(1e-6, ps.region.side / std::sqrt(4.0 + static_cast<double>(ps.size())));
  NeighborGrid grid(ps.points, cell);
  double best = std::numeric_limits<double>::infinity();
  // nearest other point, via expanding rings around each point
  std::unordered_map<IntVec, std::vector<std::uint32_t>, IntVecHash> buckets;
  for (std::uint32_t i = 0; i < ps.points.size(); ++i) {
    const Vec2& p = ps.points[i];
    const IntVec c(static_cast<std::int64_t>(std::floor(p.x / cell)),
                   static_cast<std::int64_t>(std::floor(p.y / cell)));
    buckets[c].push_back(i);
  }
  for (std::uint32_t i = 0; i < ps.points.size(); ++i) {
    const Vec2& p = ps.points[i];
    const IntVec c(static_cast<std::int64_t>(std::floor(p.x / cell)),
                   static_cast<std::int64_t>(std::floor(p.y / cell)));
    double local = std::numeric_limits<double>::infinity();
    for (int ring = 0;; ++ring) {
      for (std::int64_t dx = -ring; dx <= ring; ++dx)
        for (std::int64_t dy = -ring; dy <= ring; ++dy) {
          if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
          const auto it = buckets.find(IntVec(c[0] + dx, c[1] + dy));
          if (it == buckets.end()) continue;
          for (const auto j : it->second)
            if (j != i) local = std::min(local, dist(p, ps.points[j]));
        }
      if (local < std::numeric_limits<double>::infinity() &&
          local <= cell * static_cast<double>(ring))
        break;
      if (static_cast<double>(ring) * cell > 4.0 * ps.region.side) break;
    }
    best = std::min(best, local);
  }
  return best;
}

DensityReport density(const PointSet& ps, const std::vector<double>& cube_sides) {
  if (ps.points.empty()) fail(Errc::empty_point_set, "density: empty point set");
  DensityReport rep;
  double prev = 0.0;
  for (const double side : cube_sides) {
    if (side < prev) fail(Errc::bad_input, "density: cube sides must be increasing");
    if (side > ps.region.side + kCoordTol)
      fail(Errc::region_too_small, "density: cube exceeds the generated region");
    prev = side;
    // half-open cubes: lattice-aligned windows count exactly side^2 points
    const Cube c{0.0, 0.0, side};
    size_t count = 0;
    for (const auto& p : ps.points)
      if (c.contains_half_open(p)) ++count;
    rep.table.emplace_back(side, static_cast<double>(count) / (side * side));
  }
  rep.estimate = rep.table.back().second;
  const size_t m = rep.table.size();
  double lo = rep.estimate, hi = rep.estimate;
  for (size_t i = m >= 3 ? m - 3 : 0; i < m; ++i) {
    lo = std::min(lo, rep.table[i].second);
    hi = std::max(hi, rep.table[i].second);
  }
  rep.ucf_deviation = hi - lo;
  return rep;
}

double hull_metric(const PointSet& a, const PointSet& b, double r_max) {
  const double tol = kCoordTol;
  const double cell = std::max(1e-3, std::min(a.region.side, b.region.side) /
                                         std::sqrt(4.0 + static_cast<double>(a.size())));
  NeighborGrid ga(a.points, cell);
  NeighborGrid gb(b.points, cell);

  const int r_steps = 512;
  for (int s = 0; s <= r_steps; ++s) {
    const double r = r_max * (1.0 - static_cast<double>(s) / (r_steps + 1));
    if (r < 1e-3) break;
    const double zmax = 1.0 / r;
    // points of b inside B_r(0)
    std::vector<Vec2> inb;
    for (const auto& q : b.points)
      if (q.norm() <= r + tol) inb.push_back(q);
    std::vector<Vec2> candidates;
    if (inb.empty()) {
      candidates.push_back({0.0, 0.0});
    } else {
      // anchor: the b-point nearest to the origin must be matched by some
      // a-point under the translation, which pins z up to the candidate list
      Vec2 anchor = inb[0];
      for (const auto& q : inb)
        if (q.norm() < anchor.norm() - tol ||
            (std::abs(q.norm() - anchor.norm()) <= tol &&
             (q.x < anchor.x || (q.x == anchor.x && q.y < anchor.y))))
          anchor = q;
      for (const auto& lam : a.points) {
        const Vec2 z = lam - anchor;
        if (z.norm() < zmax - tol) candidates.push_back(z);
      }
    }
    for (const auto& z : candidates) {
      bool ok = true;
      // every b-point strictly inside must be hit by a - z
      for (const auto& q : inb) {
        if (q.norm() > r - 1e-6) continue;
        if (ga.find(q + z, tol) < 0) { ok = false; break; }
      }
      if (!ok) continue;
      // every (a - z)-point strictly inside must be in b
      for (const auto& lam : a.points) {
        const Vec2 p = lam - z;
        if (p.norm() > r - 1e-6) continue;
        if (gb.find(p, tol) < 0) { ok = false; break; }
      }
      if (ok) return std::min(1.0, 1.0 / r);
    }
  }
  return 1.0;
}

}  // namespace qg
