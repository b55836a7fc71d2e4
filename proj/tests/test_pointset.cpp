#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qg/json_io.hpp"
#include "qg/pointset.hpp"

using namespace qg;

namespace {
const std::array<double, 4> kId{1.0, 0.0, 0.0, 1.0};
const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

PointSet punctured_z2(double side) {
  PointSet z2 = gen_lattice(kId, Cube{0.0, 0.0, side});
  std::vector<Vec2> pts;
  for (const auto& p : z2.points)
    if (p.norm() > 1e-9) pts.push_back(p);
  return PointSet::from_points(std::move(pts), z2.region, "z2_minus_origin");
}
}  // namespace

TEST_CASE("gen_lattice identity block") {
  const PointSet ps = gen_lattice(kId, Cube{0.0, 0.0, 4.0});
  CHECK(ps.size() == 25);
  CHECK(ps.has_embedding());
  ps.validate();
  const DensityReport d = density(ps, {4.0});
  CHECK(d.estimate == doctest::Approx(1.0));
}

TEST_CASE("gen_lattice density scaling") {
  const PointSet ps = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 4.0});
  const DensityReport d = density(ps, {2.0, 4.0});
  CHECK(d.estimate == doctest::Approx(4.0));
}

TEST_CASE("gen_lattice rotation keeps density near 1") {
  const double c = std::cos(kPi / 4.0), s = std::sin(kPi / 4.0);
  const PointSet ps = gen_lattice({c, -s, s, c}, Cube{0.0, 0.0, 20.0});
  const DensityReport d = density(ps, {10.0, 16.0, 20.0});
  CHECK(std::abs(d.estimate - 1.0) < 4.0 / 20.0);  // boundary term is O(1/side)
}

TEST_CASE("gen_lattice rejects singular basis") {
  CHECK_THROWS_AS(gen_lattice({1.0, 1.0, 1.0, 1.0}, Cube{0.0, 0.0, 4.0}), Error);
}

TEST_CASE("fibonacci gaps are 1 and phi") {
  const PointSet ps = gen_cut_project(fibonacci_scheme(), Cube{0.0, 0.0, 40.0});
  REQUIRE(ps.size() > 20);
  std::vector<double> xs;
  for (const auto& p : ps.points) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  for (size_t i = 1; i < xs.size(); ++i) {
    const double gap = xs[i] - xs[i - 1];
    const bool ok = std::abs(gap - 1.0) < 1e-9 || std::abs(gap - kPhi) < 1e-9;
    CHECK(ok);
  }
}

TEST_CASE("empty window yields empty set with warning") {
  CutProjectScheme s = fibonacci_scheme();
  s.window = {{0.0, 0.0}};
  const PointSet ps = gen_cut_project(s, Cube{0.0, 0.0, 10.0});
  CHECK(ps.points.empty());
  CHECK(ps.warning_empty_window);
}

TEST_CASE("sturmian subset density approaches beta") {
  const PointSet ps =
      gen_sturmian(std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0, 0.5, Cube{0.0, 0.0, 100.0});
  const DensityReport d = density(ps, {50.0, 80.0, 100.0});
  CHECK(std::abs(d.estimate - 0.5) < 0.02);
}

TEST_CASE("thue_morse marks") {
  const PointSet ps = gen_marked_lattice(MarkRule::thue_morse_2d, {}, Cube{0.0, 0.0, 8.0});
  REQUIRE(ps.marks.has_value());
  auto mark_at = [&](std::int64_t m, std::int64_t n) {
    for (size_t i = 0; i < ps.size(); ++i)
      if (ps.embedding->int_coords[i] == IntVec(m, n)) return (*ps.marks)[i];
    FAIL("point not found");
    return -1;
  };
  CHECK(mark_at(0, 0) == 0);
  CHECK(mark_at(1, 2) == 0);  // t(1) ^ t(2) = 1 ^ 1
  CHECK(mark_at(1, 0) == 1);
  CHECK(mark_at(3, 0) == 0);  // t(3) = 0
}

TEST_CASE("sturmian_mark fraction near one half") {
  MarkParams mp;
  mp.alpha1 = std::sqrt(2.0) - 1.0;
  mp.alpha2 = std::sqrt(3.0) - 1.0;
  mp.beta = 0.5;
  const PointSet ps = gen_marked_lattice(MarkRule::sturmian_mark, mp, Cube{0.0, 0.0, 100.0});
  size_t ones = 0;
  for (const int m : *ps.marks) ones += static_cast<size_t>(m);
  const double frac = static_cast<double>(ones) / static_cast<double>(ps.size());
  CHECK(std::abs(frac - 0.5) < 0.02);
}

TEST_CASE("unknown rule") {
  CHECK_THROWS_AS(gen_marked_lattice("chair", {}, Cube{0.0, 0.0, 4.0}), Error);
}

TEST_CASE("hole certificates") {
  SUBCASE("z2 deepest point is the cell center") {
    const PointSet ps = gen_lattice(kId, Cube{0.0, 0.0, 10.0});
    const HoleCertificate h = hole_radius(ps, Cube{0.0, 0.0, 6.0}, 1e-2);
    CHECK(h.lower == doctest::Approx(std::sqrt(0.5)).epsilon(0.02));
    CHECK(h.upper - h.lower <= 1e-2 * std::sqrt(2.0) / 2.0 + 1e-12);
    CHECK(h.upper >= std::sqrt(0.5) - 1e-9);
  }
  SUBCASE("punctured lattice has hole 1") {
    const PointSet ps = punctured_z2(10.0);
    const HoleCertificate h = hole_radius(ps, Cube{0.0, 0.0, 6.0}, 1e-2);
    CHECK(h.lower >= 1.0 - 0.008);
    CHECK(h.upper <= 1.0 + 0.008);
  }
  SUBCASE("2Z^2 scales the hole") {
    const PointSet ps = gen_lattice({2.0, 0.0, 0.0, 2.0}, Cube{0.0, 0.0, 24.0});
    const HoleCertificate h = hole_radius(ps, Cube{0.0, 0.0, 12.0}, 1e-2);
    CHECK(h.lower == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
  }
  SUBCASE("empty set") {
    PointSet ps = PointSet::from_points({}, Cube{0.0, 0.0, 4.0}, "empty");
    CHECK_THROWS_AS(hole_radius(ps, Cube{0.0, 0.0, 2.0}, 0.1), Error);
  }
}

TEST_CASE("relative separation") {
  CHECK(relative_separation(gen_lattice(kId, Cube{0.0, 0.0, 10.0})) == 4);
  CHECK(relative_separation(gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 10.0})) == 9);
  const PointSet st =
      gen_sturmian(std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0, 0.5, Cube{0.0, 0.0, 40.0});
  CHECK(relative_separation(st) <= 4);
}

TEST_CASE("min separation") {
  CHECK(min_separation(gen_lattice(kId, Cube{0.0, 0.0, 10.0})) == doctest::Approx(1.0));
  CHECK(min_separation(gen_lattice({2.0, 0.0, 0.0, 2.0}, Cube{0.0, 0.0, 12.0})) ==
        doctest::Approx(2.0));
  const PointSet fib2 = gen_cut_project(fibonacci_product_scheme(), Cube{0.0, 0.0, 40.0});
  CHECK(min_separation(fib2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("density table on z2 is exactly one") {
  const PointSet ps = gen_lattice(kId, Cube{0.0, 0.0, 20.0});
  const DensityReport d = density(ps, {4.0, 8.0, 16.0});
  for (const auto& [side, val] : d.table) CHECK(std::abs(val - 1.0) <= 1.0 / side);
}

TEST_CASE("density rejects oversized cube") {
  const PointSet ps = gen_lattice(kId, Cube{0.0, 0.0, 8.0});
  CHECK_THROWS_AS(density(ps, {16.0}), Error);
}

TEST_CASE("hull metric") {
  const PointSet a = gen_lattice(kId, Cube{0.0, 0.0, 24.0});
  SUBCASE("identical sets") {
    const double d = hull_metric(a, a, 5.0);
    CHECK(d <= 1.0 / 5.0 + 1e-9);
  }
  SUBCASE("small translate") {
    const PointSet b = translate(a, {-0.3, 0.0});
    const double d = hull_metric(a, b, 8.0);
    CHECK(d == doctest::Approx(0.3).epsilon(0.05));
    // symmetric up to the r-grid resolution
    CHECK(std::abs(hull_metric(b, a, 8.0) - d) < 0.02);
  }
  SUBCASE("refined lattice stays far") {
    const PointSet b = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 24.0});
    const double d = hull_metric(a, b, 8.0);
    CHECK(d >= 0.5);
  }
}

TEST_CASE("translation invariance of the measurements") {
  const PointSet ps = gen_lattice(kId, Cube{0.0, 0.0, 12.0});
  Rng rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec2 z{rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)};
    const PointSet moved = translate(ps, z);
    CHECK(relative_separation(moved) == relative_separation(ps));
    CHECK(min_separation(moved) == doctest::Approx(min_separation(ps)));
    const HoleCertificate h0 = hole_radius(ps, Cube{0.0, 0.0, 6.0}, 0.05);
    const HoleCertificate h1 =
        hole_radius(moved, Cube{z.x, z.y, 6.0}, 0.05);
    CHECK(h1.lower == doctest::Approx(h0.lower).epsilon(1e-9));
  }
}

TEST_CASE("lattice translates keep exact embeddings") {
  const PointSet ps = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 12.0});
  const PointSet moved = translate(ps, {-1.5, 2.0});
  REQUIRE(moved.has_embedding());
  moved.validate();
  const PointSet off = translate(ps, {0.3, 0.0});
  CHECK(!off.has_embedding());
}

TEST_CASE("pointset json round trip") {
  MarkParams mp;
  mp.alpha1 = std::sqrt(2.0) - 1.0;
  mp.alpha2 = std::sqrt(3.0) - 1.0;
  const PointSet ps = gen_marked_lattice(MarkRule::sturmian_mark, mp, Cube{0.0, 0.0, 10.0});
  const std::string text = pointset_json(ps);
  const PointSet back = pointset_from_json(text);
  REQUIRE(back.size() == ps.size());
  CHECK(back.marks == ps.marks);
  CHECK(back.region.side == ps.region.side);
  for (size_t i = 0; i < ps.size(); ++i) CHECK(dist(back.points[i], ps.points[i]) < 1e-15);
  CHECK(pointset_json(back) == text);  // serialization is stable
}

TEST_CASE("delone property of generated sets") {
  const PointSet st =
      gen_sturmian(std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0, 0.5, Cube{0.0, 0.0, 60.0});
  CHECK(min_separation(st) > 0.0);
  const HoleCertificate h = hole_radius(st, Cube{0.0, 0.0, 30.0}, 0.05);
  CHECK(h.upper < 4.0);
}
