#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "qg/gaplabel.hpp"

using namespace qg;

namespace {
const std::array<double, 4> kId{1.0, 0.0, 0.0, 1.0};

// Thue-Morse bits through the block-doubling substitution: b_{k+1} = b_k ~b_k.
std::vector<int> tm_substitution_block(int levels) {
  std::vector<int> b{0};
  for (int k = 0; k < levels; ++k) {
    const size_t sz = b.size();
    for (size_t i = 0; i < sz; ++i) b.push_back(1 - b[i]);
  }
  return b;
}

// Exact patch-class counts of the marked lattice on the half-open window
// [-2^{m-1}, 2^{m-1})^2 at radius 1, from substitution-generated marks.
std::map<std::vector<int>, std::uint64_t> tm_patch_counts(int m) {
  const std::int64_t half = 1ll << (m - 1);
  const std::vector<int> bits = tm_substitution_block(m + 1);  // covers |i| <= 2^m
  auto mark = [&](std::int64_t a, std::int64_t b) {
    return bits[static_cast<size_t>(std::llabs(a))] ^ bits[static_cast<size_t>(std::llabs(b))];
  };
  std::map<std::vector<int>, std::uint64_t> counts;
  for (std::int64_t x = -half; x < half; ++x)
    for (std::int64_t y = -half; y < half; ++y) {
      // canonical order matches lexicographic integer offsets:
      // (-1,0), (0,-1), (0,0), (0,1), (1,0)
      const std::vector<int> cls{mark(x - 1, y), mark(x, y - 1), mark(x, y), mark(x, y + 1),
                                 mark(x + 1, y)};
      ++counts[cls];
    }
  return counts;
}
}  // namespace

TEST_CASE("thue-morse bits agree with the substitution route") {
  const std::vector<int> bits = tm_substitution_block(10);
  for (std::uint64_t i = 0; i < bits.size(); ++i)
    CHECK(bits[static_cast<size_t>(i)] == thue_morse_bit(i));
}

TEST_CASE("unmarked lattice: generators reduce to the single frequency 1") {
  const PointSet ps = gen_lattice(kId, Cube{0.0, 0.0, 34.0});
  const GapLabelReport rep = gap_label_generators(ps, 0.0, 1.0);
  REQUIRE(rep.frequency_generators.size() == 1);
  CHECK(rep.frequency_generators[0] == doctest::Approx(1.0));
  CHECK(rep.twisted_generator == 0.0);
}

TEST_CASE("thue-morse frequencies match the substitution oracle exactly") {
  const int m = 5;  // window [-16,16)^2, 1024 centers
  const PointSet ps = gen_marked_lattice(MarkRule::thue_morse_2d, {}, Cube{0.0, 0.0, 34.0});
  const GapLabelReport rep = gap_label_generators(ps, 0.0, 1.0);
  const auto oracle = tm_patch_counts(m);
  // distinct counts from the oracle, as exact fractions over 4^m
  std::vector<std::uint64_t> expect;
  for (const auto& [cls, c] : oracle) expect.push_back(c);
  std::sort(expect.begin(), expect.end());
  expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
  REQUIRE(rep.frequency_fractions.size() == expect.size());
  for (size_t i = 0; i < expect.size(); ++i) {
    CHECK(rep.frequency_fractions[i].first == expect[i]);
    CHECK(rep.frequency_fractions[i].second == 1024);
  }
  // every frequency is a dyadic rational k / 2^10 by construction
  for (const auto& [num, den] : rep.frequency_fractions) CHECK(den == 1024);
}

TEST_CASE("twisted generator") {
  const PointSet ps = gen_marked_lattice(MarkRule::thue_morse_2d, {}, Cube{0.0, 0.0, 34.0});
  SUBCASE("marked full lattice has exact density 1") {
    const GapLabelReport rep = gap_label_generators(ps, 0.7, 1.0);
    CHECK(rep.density_exact);
    CHECK(std::abs(rep.twisted_generator - 0.7) <= 1e-12);
  }
  SUBCASE("linear in theta") {
    const GapLabelReport r1 = gap_label_generators(ps, 0.3, 1.0);
    const GapLabelReport r2 = gap_label_generators(ps, 0.6, 1.0);
    CHECK(r2.twisted_generator == 2.0 * r1.twisted_generator);
  }
  SUBCASE("sturmian subset divides theta by the density") {
    const PointSet st = gen_sturmian(std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0, 0.5,
                                     Cube{0.0, 0.0, 102.0});
    const GapLabelReport rep = gap_label_generators(st, 0.7, 1.0);
    CHECK(rep.twisted_generator == doctest::Approx(1.4).epsilon(0.02));
  }
}

TEST_CASE("generators are stable under enlarging the window") {
  const PointSet small = gen_marked_lattice(MarkRule::thue_morse_2d, {}, Cube{0.0, 0.0, 34.0});
  const PointSet large = gen_marked_lattice(MarkRule::thue_morse_2d, {}, Cube{0.0, 0.0, 66.0});
  const GapLabelReport rs = gap_label_generators(small, 0.0, 1.0);
  const GapLabelReport rl = gap_label_generators(large, 0.0, 1.0);
  for (const double f : rs.frequency_generators) {
    double best = 1.0;
    for (const double g : rl.frequency_generators) best = std::min(best, std::abs(f - g));
    CHECK(best < 0.02);
  }
}

TEST_CASE("non lattice input is rejected") {
  const PointSet fib = gen_cut_project(fibonacci_scheme(), Cube{0.0, 0.0, 40.0});
  CHECK_THROWS_AS(gap_label_generators(fib, 0.0, 1.0), Error);
  const PointSet half = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 20.0});
  CHECK_THROWS_AS(gap_label_generators(half, 0.0, 1.0), Error);
}

TEST_CASE("clopen measures") {
  MarkParams mp;
  mp.alpha1 = std::sqrt(2.0) - 1.0;
  mp.alpha2 = std::sqrt(3.0) - 1.0;
  mp.beta = 0.5;
  const PointSet ps = gen_marked_lattice(MarkRule::sturmian_mark, mp, Cube{0.0, 0.0, 100.0});
  const double m1 = clopen_measure(ps, 1);
  const double m0 = clopen_measure(ps, 0);
  CHECK(m1 == doctest::Approx(0.5).epsilon(0.04));
  CHECK(m0 + m1 == doctest::Approx(1.0));
  SUBCASE("all-one marking") {
    MarkParams full;
    full.beta = 1.5;  // frac < 1.5 always
    const PointSet ones = gen_marked_lattice(MarkRule::sturmian_mark, full, Cube{0.0, 0.0, 20.0});
    CHECK(clopen_measure(ones, 1) == 1.0);
  }
  SUBCASE("no marks") {
    const PointSet ps2 = gen_lattice(kId, Cube{0.0, 0.0, 10.0});
    CHECK_THROWS_AS(clopen_measure(ps2, 0), Error);
  }
}

TEST_CASE("density scaling checks") {
  const PointSet ps = gen_lattice(kId, Cube{0.0, 0.0, 60.0});
  SUBCASE("identity") {
    const ScalingReport rep = density_scaling_check(ps, kId);
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rep.within_2pct);
  }
  SUBCASE("diag(2,1)") {
    const ScalingReport rep = density_scaling_check(ps, {2.0, 0.0, 0.0, 1.0});
    CHECK(rep.ratio == doctest::Approx(2.0).epsilon(0.02));
    CHECK(rep.within_2pct);
  }
  SUBCASE("diag(1/2,1/2)") {
    const ScalingReport rep = density_scaling_check(ps, {0.5, 0.0, 0.0, 0.5});
    CHECK(rep.ratio == doctest::Approx(0.25).epsilon(0.02));
    CHECK(rep.within_2pct);
  }
  SUBCASE("singular map") {
    CHECK_THROWS_AS(density_scaling_check(ps, {1.0, 1.0, 1.0, 1.0}), Error);
  }
}

TEST_CASE("report json carries the disclaimer and sorted generators") {
  const PointSet ps = gen_marked_lattice(MarkRule::thue_morse_2d, {}, Cube{0.0, 0.0, 34.0});
  const GapLabelReport rep = gap_label_generators(ps, 0.25, 1.0);
  for (size_t i = 1; i < rep.frequency_generators.size(); ++i)
    CHECK(rep.frequency_generators[i - 1] <= rep.frequency_generators[i]);
  const std::string j = gap_label_json(rep);
  CHECK(j.find("disclaimer") != std::string::npos);
  CHECK(j.find("\"theta\":0.25") != std::string::npos);
}
