#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "qg/json_io.hpp"
#include "qg/tfa.hpp"

using namespace qg;

namespace {
const GridSpec kGrid{512, 16.0};

// direct Riemann quadrature of the defining STFT integral on a finer grid,
// with analytically sampled Gaussians (independent of the Window pipeline)
cd stft_quadrature_oracle(double x, double om) {
  const int n = 8192;
  const double L = 32.0;
  const double dt = L / n;
  const double c = std::pow(2.0, 0.25);
  cd acc(0.0, 0.0);
  for (int j = 0; j < n; ++j) {
    const double t = -L / 2.0 + j * dt;
    const double f = c * std::exp(-kPi * t * t);
    const double gbar = c * std::exp(-kPi * (t - x) * (t - x));
    const double ang = -2.0 * kPi * t * om;
    acc += f * gbar * cd(std::cos(ang), std::sin(ang));
  }
  return acc * dt;
}
}  // namespace

TEST_CASE("gaussian window basics") {
  const Window g = gaussian_window(kGrid);
  CHECK(g.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  for (int j = 1; j < kGrid.n; ++j)
    CHECK(std::abs(g.values[j] - g.values[kGrid.n - j]) < 1e-12);  // even up to reflection
  const std::vector<cd> v = stft(g, g, {{0.0, 0.0}});
  CHECK(std::abs(v[0] - cd(1.0, 0.0)) < 1e-12);
}

TEST_CASE("tf_shift unitarity and identities") {
  const Window f = random_window(kGrid, 77);
  SUBCASE("zero shift is the identity") {
    const Window s = tf_shift(f, {0.0, 0.0});
    CHECK((s.values - f.values).norm() < 1e-12);
  }
  SUBCASE("unitary for 100 seeded shifts") {
    Rng rng(123);
    for (int t = 0; t < 100; ++t) {
      const Vec2 z{kGrid.step() * static_cast<double>(rng.uniform_int(-256, 256)),
                   (1.0 / kGrid.L) * static_cast<double>(rng.uniform_int(-240, 240))};
      const Window s = tf_shift(f, z);
      CHECK(std::abs(s.norm2() - f.norm2()) < 1e-12);
    }
  }
  SUBCASE("shifts compose additively") {
    const Window a = tf_shift(tf_shift(f, {1.25, 0.0}), {0.5, 0.0});
    const Window b = tf_shift(f, {1.75, 0.0});
    CHECK((a.values - b.values).norm() * std::sqrt(kGrid.step()) < 1e-12);
  }
  SUBCASE("nyquist margin enforced") {
    CHECK_THROWS_AS(tf_shift(f, {0.0, 16.0}), Error);
  }
}

TEST_CASE("commutation phase identity") {
  const Window f = random_window(kGrid, 31);
  SUBCASE("half shift against unit modulation anticommute") {
    const Window lhs = tf_shift(tf_shift(f, {0.5, 0.0}), {0.0, 1.0});
    const Window rhs = tf_shift(tf_shift(f, {0.0, 1.0}), {0.5, 0.0});
    CHECK((lhs.values + rhs.values).norm() * std::sqrt(kGrid.step()) < 1e-12);
  }
  SUBCASE("100 seeded commensurate cases") {
    Rng rng(456);
    for (int t = 0; t < 100; ++t) {
      const double x = kGrid.step() * static_cast<double>(rng.uniform_int(-128, 128));
      const double om = (1.0 / kGrid.L) * static_cast<double>(rng.uniform_int(-200, 200));
      // T_x M_om = e^{-2 pi i om x} M_om T_x
      const Window lhs = tf_shift(tf_shift(f, {0.0, om}), {x, 0.0});
      Window rhs = tf_shift(tf_shift(f, {x, 0.0}), {0.0, om});
      const double ang = -2.0 * kPi * om * x;
      rhs.values *= cd(std::cos(ang), std::sin(ang));
      CHECK((lhs.values - rhs.values).norm() * std::sqrt(kGrid.step()) < 1e-12);
    }
  }
}

TEST_CASE("stft values") {
  const Window f = random_window(kGrid, 99);
  const Window g = gaussian_window(kGrid);
  SUBCASE("cauchy-schwarz") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
      const Vec2 z{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
      const std::vector<cd> v = stft(f, g, {z});
      CHECK(std::abs(v[0]) <= f.norm2() * g.norm2() + 1e-12);
    }
  }
  SUBCASE("gaussian pair modulus matches the closed form and quadrature") {
    const GridSpec fine{1024, 32.0};
    const Window gg = gaussian_window(fine);
    Rng rng(11);
    for (int t = 0; t < 25; ++t) {
      const Vec2 z{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      const std::vector<cd> v = stft(gg, gg, {z});
      const double expect = std::exp(-kPi * z.norm2() / 2.0);
      CHECK(std::abs(std::abs(v[0]) - expect) < 1e-6);
      CHECK(std::abs(std::abs(stft_quadrature_oracle(z.x, z.y)) - std::abs(v[0])) < 1e-6);
    }
  }
}

TEST_CASE("frame operator structure") {
  const Window g = gaussian_window(kGrid);
  SUBCASE("single atom is rank one with top eigenvalue 1") {
    GaborSystem sys;
    sys.grid = kGrid;
    sys.windows = {g};
    sys.points = {{0.0, 0.0}};
    FrameAnalysis fa = frame_operator(sys);
    const Eigen::VectorXd& lam = fa.eigenvalues();
    CHECK(lam(lam.size() - 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(lam(lam.size() - 2)) < 1e-10);
  }
  SUBCASE("random systems are hermitian psd") {
    Rng rng(17);
    GaborSystem sys;
    sys.grid = GridSpec{64, 8.0};
    sys.windows = {random_window(sys.grid, 5)};
    for (int t = 0; t < 12; ++t)
      sys.points.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
    FrameAnalysis fa = frame_operator(sys);
    CHECK((fa.S - fa.S.adjoint()).norm() <= 1e-12 * fa.S.norm());
    const Eigen::VectorXd& lam = fa.eigenvalues();
    CHECK(lam(0) >= -1e-10 * lam(lam.size() - 1));
  }
  SUBCASE("half-integer torus lattice concentrates near 4") {
    GaborSystem sys = make_full_torus_lattice(0.5, 0.5, kGrid, {g});
    FrameAnalysis fa = frame_operator(sys);
    const auto [A, B] = frame_bounds(fa, 0.5);
    CHECK(A > 3.9);
    CHECK(B < 4.1);
  }
}

TEST_CASE("frame inequality witnessed on interior vectors") {
  const Window g = gaussian_window(kGrid);
  GaborSystem sys = make_full_torus_lattice(0.5, 0.5, kGrid, {g});
  FrameAnalysis fa = frame_operator(sys);
  const auto [A, B] = frame_bounds(fa, 0.5);
  Rng rng(2718);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(kGrid.n);
    for (int j = 0; j < kGrid.n; ++j)
      if (std::abs(kGrid.t(j)) <= 0.5 * kGrid.L / 2.0) f(j) = rng.cnormal();
    const double rayleigh = (f.adjoint() * fa.S * f).real()(0) / f.squaredNorm();
    CHECK(rayleigh >= A - 1e-9);
    CHECK(rayleigh <= B + 1e-9);
  }
}

TEST_CASE("tight fixture: complete torus system") {
  const GridSpec small{64, 8.0};
  const Window g = gaussian_window(small);
  GaborSystem sys = make_full_torus_lattice(small.step(), 1.0 / small.L, small, {g});
  FrameAnalysis fa = frame_operator(sys);
  const double c = fa.S.real().trace() / small.n;
  CHECK((fa.S - c * Eigen::MatrixXcd::Identity(small.n, small.n)).norm() < 1e-9 * std::abs(c));
  const Vec2 z{1.0, 2.0};
  const DualResult d = dual_window(sys, fa, z, 0);
  const Window shifted = tf_shift(g, z);
  CHECK((d.window.values - shifted.values / c).norm() < 1e-9);
  const ReconstructResult r = reconstruct(g, sys, fa);
  CHECK(r.residual < 1e-12);
}

TEST_CASE("dual windows on the oversampled lattice") {
  const Window g = gaussian_window(kGrid);
  GaborSystem sys = make_full_torus_lattice(0.5, 0.5, kGrid, {g});
  FrameAnalysis fa = frame_operator(sys);
  frame_bounds(fa, 0.5);
  const DualResult d = dual_window(sys, fa, {0.5, 1.0}, 0);
  CHECK(d.residual <= 1e-10);
  const DualResult d0 = dual_window(sys, fa, {0.0, 0.0}, 0);
  double tail = 0.0;
  for (int j = 0; j < kGrid.n; ++j)
    if (std::abs(kGrid.t(j)) > 6.0) tail = std::max(tail, std::abs(d0.window.values[j]));
  CHECK(tail < 1e-6);
}

TEST_CASE("reconstruction residuals") {
  const Window g = gaussian_window(kGrid);
  const Window probe = tf_shift(g, {0.0, 10.0});  // time-interior, off the box band
  SUBCASE("oversampled cylinder reconstructs") {
    PointSet half = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 34.0});
    GaborSystem sys = make_system_cylinder(half, {g}, 6.0);
    FrameAnalysis fa = frame_operator(sys);
    CHECK(reconstruct(probe, sys, fa).residual < 1e-8);
  }
  SUBCASE("critical box truncation cannot") {
    PointSet z2 = gen_lattice({1.0, 0.0, 0.0, 1.0}, Cube{0.0, 0.0, 14.0});
    GaborSystem sys = make_system(z2, {g}, Cube{0.0, 0.0, 12.0});
    FrameAnalysis fa = frame_operator(sys);
    CHECK(reconstruct(probe, sys, fa).residual > 1e-2);
  }
}

TEST_CASE("m1 norm estimate") {
  const Window g = gaussian_window(kGrid);
  const double m1 = m1_norm_estimate(g);
  SUBCASE("homogeneity") {
    Window h = g;
    h.values *= cd(-2.5, 0.0);
    CHECK(m1_norm_estimate(h) == doctest::Approx(2.5 * m1).epsilon(1e-12));
  }
  SUBCASE("invariant under commensurate tf shifts") {
    const Window s = tf_shift(g, {3.0 / 16.0, 2.0 / 16.0});
    CHECK(m1_norm_estimate(s) == doctest::Approx(m1).epsilon(1e-9));
  }
  SUBCASE("gaussian value reproducible across refinement") {
    const GridSpec fine{1024, 16.0};
    const double m1f = m1_norm_estimate(gaussian_window(fine));
    CHECK(std::abs(m1 - m1f) < 1e-3);
    CHECK(m1 == doctest::Approx(2.0).epsilon(1e-3));  // continuum L1 norm of V_g g
  }
}

TEST_CASE("wiener amalgam inequality") {
  SUBCASE("zero function") {
    Window z;
    z.grid = kGrid;
    z.kind = "zero";
    z.values = Eigen::VectorXcd::Zero(kGrid.n);
    const AmalgamReport rep = wiener_amalgam_check(z, {0.0, 1.0, 2.0});
    CHECK(rep.lhs == 0.0);
    CHECK(rep.holds);
  }
  SUBCASE("gaussian over the integers") {
    const Window g = gaussian_window(kGrid);
    std::vector<double> section;
    for (int t = -7; t <= 7; ++t) section.push_back(t);
    const AmalgamReport rep = wiener_amalgam_check(g, section);
    CHECK(rep.holds);
    CHECK(rep.lhs < rep.rhs);
  }
  SUBCASE("random trig polynomial") {
    Window f;
    f.grid = kGrid;
    f.kind = "trig";
    f.values = Eigen::VectorXcd::Zero(kGrid.n);
    Rng rng(5);
    for (int m = -5; m <= 5; ++m) {
      const cd c = rng.cnormal();
      for (int j = 0; j < kGrid.n; ++j) {
        const double ang = 2.0 * kPi * m * kGrid.t(j) / kGrid.L;
        f.values[j] += c * cd(std::cos(ang), std::sin(ang));
      }
    }
    std::vector<double> section;
    for (int t = -6; t <= 6; ++t) section.push_back(t + 0.5);
    CHECK(wiener_amalgam_check(f, section).holds);
  }
}

TEST_CASE("modulus of continuity") {
  const Window g = gaussian_window(kGrid);
  CHECK(modulus_of_continuity(g, 0.0).lower == 0.0);
  const ModulusEstimate m1e = modulus_of_continuity(g, 0.05);
  const ModulusEstimate m2e = modulus_of_continuity(g, 0.1);
  const ModulusEstimate m3e = modulus_of_continuity(g, 0.15);
  CHECK(m1e.lower <= m2e.lower);
  CHECK(m2e.lower <= m3e.lower);
  CHECK(m1e.lower <= m1e.upper);
  CHECK(m2e.lower > 0.0);
  const ModulusEstimate dbl = modulus_of_continuity(g, 0.1, 16);
  CHECK(std::abs(dbl.lower - m2e.lower) <= 0.01 * m2e.lower + 1e-12);
}

TEST_CASE("gocr sufficient condition") {
  const Window g = gaussian_window(kGrid);
  SUBCASE("dense lattice is sufficient") {
    PointSet ps = gen_lattice({0.125, 0.0, 0.0, 0.125}, Cube{0.0, 0.0, 16.0});
    const GocrReport rep = gocr_check(g, ps, Cube{0.0, 0.0, 8.0}, 0.01);
    CHECK(rep.verdict == GocrReport::Verdict::sufficient);
  }
  SUBCASE("critical lattice is inconclusive") {
    PointSet ps = gen_lattice({1.0, 0.0, 0.0, 1.0}, Cube{0.0, 0.0, 16.0});
    const GocrReport rep = gocr_check(g, ps, Cube{0.0, 0.0, 8.0}, 0.01);
    CHECK(rep.verdict == GocrReport::Verdict::inconclusive);
  }
  SUBCASE("empty set is inconclusive with a note") {
    PointSet ps = PointSet::from_points({}, Cube{0.0, 0.0, 8.0}, "empty");
    const GocrReport rep = gocr_check(g, ps, Cube{0.0, 0.0, 4.0});
    CHECK(rep.verdict == GocrReport::Verdict::inconclusive);
    CHECK(!rep.note.empty());
  }
}

TEST_CASE("multiwindow translates match the union system") {
  const GridSpec grid{256, 16.0};
  const Window g = gaussian_window(grid);
  const std::vector<Vec2> translates{{0.0, 0.0}, {1.0, 1.0}};
  const std::vector<Window> windows = multiwindow_from_translates(g, translates);
  CHECK(windows.size() == 2);
  CHECK((windows[0].values - g.values).norm() < 1e-12);

  PointSet lat = gen_lattice({2.0, 0.0, 0.0, 2.0}, Cube{0.0, 0.0, 12.0});
  GaborSystem multi = make_system(lat, windows, Cube{0.0, 0.0, 10.0});
  GaborSystem uni;
  uni.grid = grid;
  uni.windows = {g};
  for (const auto& z : translates)
    for (const auto& p : multi.points) uni.points.push_back(p + z);
  FrameAnalysis fm = frame_operator(multi);
  FrameAnalysis fu = frame_operator(uni);
  CHECK((fm.S - fu.S).norm() <= 1e-12 * fu.S.norm());
  const auto [am, bm] = frame_bounds(fm, 0.5);
  const auto [au, bu] = frame_bounds(fu, 0.5);
  CHECK(std::abs(am - au) <= 1e-8 * std::max(1.0, au));
  CHECK(std::abs(bm - bu) <= 1e-8 * bu);
}

TEST_CASE("covariance identity at finite truncation") {
  const Window g = gaussian_window(kGrid);
  SUBCASE("zero shift") {
    PointSet lat = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 14.0});
    GaborSystem sys = make_system(lat, {g}, Cube{0.0, 0.0, 12.0});
    CHECK(covariance_residual(sys, {0.0, 0.0}) < 1e-12);
  }
  SUBCASE("lattice and sturmian shifts stay below 1e-9") {
    PointSet lat = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 14.0});
    GaborSystem sys = make_system(lat, {g}, Cube{0.0, 0.0, 12.0});
    CHECK(covariance_residual(sys, {0.5, 0.0}) <= 1e-9);
    CHECK(covariance_residual(sys, {-1.5, 2.5}) <= 1e-9);
    PointSet st = gen_sturmian(std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0, 0.5,
                               Cube{0.0, 0.0, 30.0});
    GaborSystem ssys = make_system(st, {g}, Cube{0.0, 0.0, 12.0});
    size_t used = 0;
    for (size_t i = 0; i < st.size() && used < 3; ++i) {
      if (st.points[i].norm_inf() > 2.5 || st.points[i].norm() < 0.5) continue;
      ++used;
      CHECK(covariance_residual(ssys, st.points[i]) <= 1e-9);
    }
    CHECK(used == 3);
  }
}

TEST_CASE("bound spread along the orbit") {
  const Window g = gaussian_window(kGrid);
  SUBCASE("lattice shifts are exact") {
    PointSet lat = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 40.0});
    const SpreadReport rep =
        transversal_bound_spread(lat, {g}, {{0.5, 0.0}, {1.0, -1.5}}, 6.0, 0.5);
    CHECK(rep.spread_A <= 1e-8);
    CHECK(rep.spread_B <= 1e-8);
  }
  SUBCASE("zero shift spread is zero") {
    PointSet lat = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 40.0});
    const SpreadReport rep = transversal_bound_spread(lat, {g}, {{0.0, 0.0}}, 6.0, 0.5);
    CHECK(rep.spread_A == 0.0);
    CHECK(rep.spread_B == 0.0);
  }
}

TEST_CASE("strong continuity along hull-convergent shifts") {
  const double a1 = std::sqrt(2.0) - 1.0, a2 = std::sqrt(3.0) - 1.0;
  const Window g = gaussian_window(kGrid);
  SUBCASE("lattice periods give zero") {
    PointSet lat = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 40.0});
    const auto seq =
        strong_continuity_probe(lat, {g}, g, {{0.0, 0.0}, {0.5, 0.5}, {2.0, -1.5}},
                                Cube{0.0, 0.0, 12.0});
    for (const double v : seq) CHECK(v < 1e-12);
  }
  SUBCASE("sturmian returns decrease with the window offset") {
    PointSet st = gen_sturmian(a1, a2, 0.5, Cube{0.0, 0.0, 60.0});
    // frac(v . alpha) = +eps with eps = 0.074, 0.049, 0.025, 0.003
    const std::vector<Vec2> shifts{{6.0, 9.0}, {4.0, 6.0}, {2.0, 3.0}, {1.0, 9.0}};
    const auto seq = strong_continuity_probe(st, {g}, g, shifts, Cube{0.0, 0.0, 20.0});
    for (size_t i = 1; i < seq.size(); ++i) CHECK(seq[i] < seq[i - 1]);
    CHECK(seq.back() < 1e-10);
  }
}

TEST_CASE("frame operator dump round trip") {
  const GridSpec grid{64, 8.0};
  const Window g = gaussian_window(grid);
  GaborSystem sys;
  sys.grid = grid;
  sys.windows = {g};
  sys.points = {{0.0, 0.0}, {1.0, 0.5}};
  FrameAnalysis fa = frame_operator(sys);
  const std::string path = "frame_dump_test.bin";
  dump_frame_operator(fa, path);
  const Eigen::MatrixXcd back = load_frame_operator(path, grid.n);
  CHECK((back - fa.S).norm() == 0.0);
  std::remove(path.c_str());
  frame_bounds(fa, 0.5);
  const std::string rep = frame_report_json(fa);
  CHECK(rep.find("\"A\":") != std::string::npos);
  CHECK(rep.find("\"eigen_extremes\"") != std::string::npos);
}
