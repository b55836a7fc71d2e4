#include "qg/acceptance.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <map>

#include "qg/algebra.hpp"
#include "qg/gaplabel.hpp"
#include "qg/holefill.hpp"
#include "qg/tfa.hpp"

namespace qg::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

const double kA1 = std::sqrt(2.0) - 1.0;
const double kA2 = std::sqrt(3.0) - 1.0;

PointSet scaled_sturmian(double side_unscaled) {
  const PointSet st = gen_sturmian(kA1, kA2, 0.5, Cube{0.0, 0.0, side_unscaled});
  return apply_linear(st, {0.5, 0.0, 0.0, 0.5});
}

Criterion criterion_trace_lattice() {
  const auto t0 = Clock::now();
  const GridSpec grid{512, 16.0};
  const Window g = gaussian_window(grid);
  const GaborSystem sys = make_full_torus_lattice(0.5, 0.5, grid, {g});
  const FrameAnalysis fa = frame_operator(sys);
  const TransversalSample tr = TransversalSample::torus_lattice(0.5, 0.5, grid, 12.0);
  const IdempotentResult idem = gabor_idempotent(sys, fa, tr, 6.0);
  const double trace = idempotent_trace(idem.P, TraceMode::unnormalized);
  const Eigen::VectorXcd dual = fa.solve(g.values);
  const double oracle = (grid.step() * dual.dot(g.values)).real();
  const double secs = seconds_since(t0);
  Criterion c{1, "trace theorem, lattice oracle", false, ""};
  const bool in_range = trace >= 0.245 && trace <= 0.255;
  const bool matches = std::abs(trace - oracle) <= 1e-6;
  c.pass = in_range && matches && secs < 60.0;
  c.details = fmt("trace=%.9f oracle=%.9f |diff|=%.2e runtime=%.1fs", trace, oracle,
                  std::abs(trace - oracle), secs);
  return c;
}

Criterion criterion_trace_quasicrystal() {
  const GridSpec grid{512, 16.0};
  const Window g = gaussian_window(grid);
  const PointSet ps = scaled_sturmian(100.0);
  const DensityReport dens = density(ps, {30.0, 40.0, 50.0});
  const GaborSystem sys = make_system_cylinder(ps, {g}, 8.0);
  const FrameAnalysis fa = frame_operator(sys);
  const auto rows = frame_measure(sys, fa, ps, {8.0, 12.0});
  const double target = 1.0 / dens.estimate;
  const double dev8 = std::abs(rows[0].without_1_over_N - target) / target;
  const double dev12 = std::abs(rows[1].without_1_over_N - target) / target;
  Criterion c{2, "trace theorem, quasicrystal frame measure", false, ""};
  c.pass = dev12 <= 0.05 && dev12 < dev8;
  c.details = fmt("dens=%.4f fm(8)=%.5f fm(12)=%.5f dev8=%.3f%% dev12=%.3f%%", dens.estimate,
                  rows[0].without_1_over_N, rows[1].without_1_over_N, 100.0 * dev8,
                  100.0 * dev12);
  return c;
}

Criterion criterion_idempotency() {
  const GridSpec grid{512, 16.0};
  const Window g = gaussian_window(grid);
  const GaborSystem sys = make_full_torus_lattice(0.5, 0.5, grid, {g});
  const FrameAnalysis fa = frame_operator(sys);
  const TransversalSample t8 = TransversalSample::torus_lattice(0.5, 0.5, grid, 8.0);
  const TransversalSample t12 = TransversalSample::torus_lattice(0.5, 0.5, grid, 12.0);
  const double r8 = gabor_idempotent(sys, fa, t8, 4.0).idempotency_residual;
  const double r12 = gabor_idempotent(sys, fa, t12, 6.0).idempotency_residual;
  Criterion c{3, "idempotency residual ladder", false, ""};
  c.pass = r12 <= 1e-2 && r12 < r8;
  c.details = fmt("residual C_8/r4=%.3e C_12/r6=%.3e", r8, r12);
  return c;
}

Criterion criterion_covariance() {
  const GridSpec grid{512, 16.0};
  const Window g = gaussian_window(grid);
  double worst = 0.0;
  int used = 0;
  {
    const PointSet lat = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 14.0});
    const GaborSystem sys = make_system(lat, {g}, Cube{0.0, 0.0, 12.0});
    Rng rng(31);
    for (int t = 0; t < 10; ++t) {
      const Vec2 w{0.5 * static_cast<double>(rng.uniform_int(-6, 6)),
                   0.5 * static_cast<double>(rng.uniform_int(-6, 6))};
      worst = std::max(worst, covariance_residual(sys, w));
      ++used;
    }
  }
  {
    const PointSet st = gen_sturmian(kA1, kA2, 0.5, Cube{0.0, 0.0, 30.0});
    const GaborSystem sys = make_system(st, {g}, Cube{0.0, 0.0, 12.0});
    int taken = 0;
    for (size_t i = 0; i < st.size() && taken < 10; ++i) {
      if (st.points[i].norm_inf() > 3.0) continue;
      worst = std::max(worst, covariance_residual(sys, st.points[i]));
      ++taken;
      ++used;
    }
  }
  Criterion c{4, "covariance identity (consistent truncation)", false, ""};
  c.pass = worst <= 1e-9 && used == 20;
  c.details = fmt("worst operator-norm residual over %d shifts: %.3e", used, worst);
  return c;
}

Criterion criterion_holefill() {
  Criterion c{5, "hole filling", false, ""};
  std::string detail;
  // stated instance: 2Z^2 at eps = 0.8 with at most 2 translates.
  // Unattainable: two disjoint translates have density 1/2, and any covering
  // by radius-0.8 balls needs density >= 1.2092/(pi 0.64) = 0.601
  // (Kershner), so the union hole of any two translates exceeds 0.877. The
  // procedure honestly needs 4 translates to reach 0.8.
  bool part1 = false;
  {
    const PointSet ps = gen_lattice({2.0, 0.0, 0.0, 2.0}, Cube{0.0, 0.0, 16.0});
    const FillReport rep = fill_holes(ps, 0.8, 8);
    part1 = rep.translates.size() <= 2 && rep.hole_sequence.back().upper < 0.8;
    detail += fmt("2Z^2: %zu translates, final hole upper %.4f (<=2 translates unattainable; "
                  "two-translate covering bound is 0.877); ",
                  rep.translates.size(), rep.hole_sequence.back().upper);
  }
  bool part2 = false;
  {
    const PointSet fib2 = gen_cut_project(fibonacci_product_scheme(), Cube{0.0, 0.0, 40.0});
    const PointSet scaled = apply_linear(fib2, {2.0, 0.0, 0.0, 2.0});
    const FillReport rep = fill_holes(scaled, 0.7, 16);
    bool decreasing = true;
    for (size_t i = 1; i < rep.hole_sequence.size(); ++i)
      decreasing = decreasing && rep.hole_sequence[i].upper < rep.hole_sequence[i - 1].upper;
    bool disjoint = true;
    try {
      union_translates(scaled, rep.translates);
    } catch (const Error&) {
      disjoint = false;
    }
    part2 = rep.hole_sequence.back().upper < 0.7 && decreasing && disjoint;
    detail += fmt("fibonacci: %zu translates, hole %.4f, decreasing=%d, disjoint=%d",
                  rep.translates.size(), rep.hole_sequence.back().upper, decreasing ? 1 : 0,
                  disjoint ? 1 : 0);
  }
  c.pass = part1 && part2;
  // the first clause is provably out of reach, so this exact failure shape
  // is the expected outcome; anything else would be a regression
  c.expected_fail = !part1 && part2;
  c.details = detail;
  return c;
}

Criterion criterion_balian_low() {
  std::map<int, double> crit_A;
  std::map<int, double> half_A;
  for (const int n : {256, 512, 1024}) {
    const GridSpec grid{n, n / 32.0};  // fixed sample step, window grows with n
    const Window g = gaussian_window(grid);
    {
      GaborSystem sys = make_full_torus_lattice(0.5, 0.5, grid, {g});
      FrameAnalysis fa = frame_operator(sys);
      half_A[n] = frame_bounds(fa, 0.5).first;
    }
    if (n <= 512) {
      GaborSystem sys = make_full_torus_lattice(1.0, 1.0, grid, {g});
      FrameAnalysis fa = frame_operator(sys);
      crit_A[n] = frame_bounds(fa, 0.5).first;
    }
  }
  const double spread =
      (std::max({half_A[256], half_A[512], half_A[1024]}) -
       std::min({half_A[256], half_A[512], half_A[1024]})) /
      half_A[512];
  Criterion c{6, "Balian-Low regime", false, ""};
  c.pass = crit_A[512] < 0.05 && crit_A[512] < crit_A[256] && half_A[256] > 0.5 &&
           half_A[512] > 0.5 && half_A[1024] > 0.5 && spread <= 0.05;
  c.details = fmt("critical A: %.4f -> %.4f; oversampled A: %.4f/%.4f/%.4f spread=%.2f%%",
                  crit_A[256], crit_A[512], half_A[256], half_A[512], half_A[1024],
                  100.0 * spread);
  return c;
}

Criterion criterion_bound_spread() {
  const GridSpec grid{512, 16.0};
  const Window g = gaussian_window(grid);
  const PointSet lat = gen_lattice({0.5, 0.0, 0.0, 0.5}, Cube{0.0, 0.0, 40.0});
  const SpreadReport rl = transversal_bound_spread(
      lat, {g}, {{0.5, 0.0}, {0.0, 0.5}, {1.0, 1.0}, {-1.5, 0.5}, {2.0, -1.0}}, 6.0, 0.5);
  // sturmian shifts: near-returns of the pattern (frac(v . alpha) close to 0
  // from above), so the finite window genuinely probes the hull orbit
  const PointSet st = scaled_sturmian(100.0);
  const std::vector<Vec2> returns{{2.5, 2.0}, {-2.5, -2.0}, {5.0, 4.0}, {-5.0, -4.0}, {-0.5, -4.5}};
  const SpreadReport rs = transversal_bound_spread(st, {g}, returns, 6.0, 0.5);
  Criterion c{7, "frame-bound constancy along the orbit", false, ""};
  c.pass = rl.spread_A <= 1e-8 && rl.spread_B <= 1e-8 && rs.spread_A <= 0.01 &&
           rs.spread_B <= 0.01;
  c.details = fmt("lattice spread A=%.2e B=%.2e; sturmian spread A=%.4f%% B=%.4f%%", rl.spread_A,
                  rl.spread_B, 100.0 * rs.spread_A, 100.0 * rs.spread_B);
  return c;
}

Criterion criterion_patch_stats() {
  Criterion c{8, "patch statistics", false, ""};
  const PointSet st = gen_sturmian(kA1, kA2, 0.5, Cube{0.0, 0.0, 104.0});
  const PatchTable t = enumerate_patches(st, 1.0, Cube{0.0, 0.0, 100.0});
  double freq_sum = 0.0;
  for (const auto& e : t.entries) {
    const FrequencyReport f = patch_frequency(st, e.patch, {100.0});
    freq_sum += f.estimate;
  }
  const DensityReport dens = density(st, {100.0});
  const bool sum_ok = std::abs(freq_sum - dens.estimate) <= 0.01 * dens.estimate;

  const PointSet z2 = gen_lattice({1.0, 0.0, 0.0, 1.0}, Cube{0.0, 0.0, 40.0});
  const PatchTable tz = enumerate_patches(z2, 1.0, Cube{0.0, 0.0, 30.0});
  const Patch p = tz.entries[0].patch;
  const FrequencyReport fz = patch_frequency(z2, p, {16.0, 24.0, 30.0});
  const bool z_ok = tz.entries.size() == 1 && std::abs(fz.estimate - 1.0) <= 1e-3;
  c.pass = sum_ok && z_ok;
  c.details = fmt("sturmian sum=%.5f dens=%.5f; z2 classes=%zu freq=%.5f", freq_sum,
                  dens.estimate, tz.entries.size(), fz.estimate);
  return c;
}

// Thue-Morse block substitution, independent of the bit-parity route.
std::vector<int> tm_block(int levels) {
  std::vector<int> b{0};
  for (int k = 0; k < levels; ++k) {
    const size_t sz = b.size();
    for (size_t i = 0; i < sz; ++i) b.push_back(1 - b[i]);
  }
  return b;
}

Criterion criterion_gap_labels() {
  Criterion c{9, "gap labels", false, ""};
  const PointSet tm = gen_marked_lattice(MarkRule::thue_morse_2d, {}, Cube{0.0, 0.0, 34.0});
  const GapLabelReport rep = gap_label_generators(tm, 0.0, 1.0);
  // oracle: substitution-generated marks counted over the same window
  const std::vector<int> bits = tm_block(6);
  auto mark = [&](std::int64_t a, std::int64_t b) {
    return bits[static_cast<size_t>(std::llabs(a))] ^ bits[static_cast<size_t>(std::llabs(b))];
  };
  std::map<std::vector<int>, std::uint64_t> counts;
  for (std::int64_t x = -16; x < 16; ++x)
    for (std::int64_t y = -16; y < 16; ++y)
      ++counts[{mark(x - 1, y), mark(x, y - 1), mark(x, y), mark(x, y + 1), mark(x + 1, y)}];
  std::vector<std::uint64_t> expect;
  for (const auto& [cls, cnt] : counts) expect.push_back(cnt);
  std::sort(expect.begin(), expect.end());
  expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
  bool exact = rep.frequency_fractions.size() == expect.size();
  for (size_t i = 0; exact && i < expect.size(); ++i)
    exact = rep.frequency_fractions[i].first == expect[i] &&
            rep.frequency_fractions[i].second == 1024;

  const GapLabelReport rep_t = gap_label_generators(tm, 0.7, 1.0);
  const bool twisted_ok = std::abs(rep_t.twisted_generator - 0.7) <= 1e-12;

  const PointSet st = gen_sturmian(kA1, kA2, 0.5, Cube{0.0, 0.0, 102.0});
  const GapLabelReport rep_s = gap_label_generators(st, 0.7, 1.0);
  const bool sturmian_ok = std::abs(rep_s.twisted_generator - 1.4) <= 0.02 * 1.4;
  c.pass = exact && twisted_ok && sturmian_ok;
  c.details = fmt("tm generators=%zu (oracle %zu, exact=%d); theta twisted=%.12f; "
                  "sturmian twisted=%.4f",
                  rep.frequency_fractions.size(), expect.size(), exact ? 1 : 0,
                  rep_t.twisted_generator, rep_s.twisted_generator);
  return c;
}

Criterion criterion_algebra_axioms() {
  Criterion c{10, "twisted algebra axioms", false, ""};
  // brute-force oracle on the 5-base cross with the 9-displacement cube
  const PointSet ps = gen_lattice({1.0, 0.0, 0.0, 1.0}, Cube{0.0, 0.0, 12.0});
  const std::vector<IntVec> cross{IntVec(-1, 0), IntVec(0, -1), IntVec(0, 0), IntVec(0, 1),
                                  IntVec(1, 0)};
  auto base5 = std::make_shared<TransversalSample>(TransversalSample::manual(ps, cross));
  double worst_oracle = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const TwistedKernel f = random_kernel(base5, 1, 2.0, seed);
    const TwistedKernel g = random_kernel(base5, 1, 2.0, seed + 1000);
    const ConvolveResult conv = twisted_convolve(f, g);
    // direct triple loop over raw integer keys
    std::map<std::pair<std::pair<std::int64_t, std::int64_t>, std::pair<std::int64_t, std::int64_t>>, cd>
        oracle;
    auto raw_of = [](const TwistedKernel& k) {
      std::map<std::pair<std::pair<std::int64_t, std::int64_t>,
                         std::pair<std::int64_t, std::int64_t>>,
               cd>
          m;
      for (size_t b = 0; b < k.entries.size(); ++b)
        for (const auto& [z, blk] : k.entries[b])
          m[{{k.trans->base_keys[b][0], k.trans->base_keys[b][1]}, {z[0], z[1]}}] = blk(0, 0);
      return m;
    };
    const auto rf = raw_of(f);
    const auto rg = raw_of(g);
    for (const auto& [kg, gv] : rg) {
      const auto w = kg.first;
      const auto wp = kg.second;
      for (const auto& [kf, fv] : rf) {
        if (kf.first != std::pair<std::int64_t, std::int64_t>{w.first + wp.first,
                                                              w.second + wp.second})
          continue;
        const auto zf = kf.second;
        const std::pair<std::int64_t, std::int64_t> z{zf.first + wp.first, zf.second + wp.second};
        if (std::llabs(z.first) > 1 || std::llabs(z.second) > 1) continue;
        const double ang = -2.0 * kPi * static_cast<double>(wp.second) *
                           static_cast<double>(z.first - wp.first);
        oracle[{w, z}] += cd(std::cos(ang), std::sin(ang)) * fv * gv;
      }
    }
    const auto rc = raw_of(conv.kernel);
    for (const auto& [key, val] : oracle)
      worst_oracle = std::max(worst_oracle,
                              std::abs(val - (rc.count(key) ? rc.at(key) : cd(0.0, 0.0))));
    for (const auto& [key, val] : rc)
      if (!oracle.count(key)) worst_oracle = std::max(worst_oracle, std::abs(val));
  }

  // anti-homomorphism and tracial property within the reported loss bounds
  const PointSet amb = gen_lattice({1.0, 0.0, 0.0, 1.0}, Cube{0.0, 0.0, 12.0});
  auto tr = std::make_shared<TransversalSample>(TransversalSample::from_pointset(amb, 10.0));
  double worst_anti = 0.0, worst_trace = 0.0, bound = 0.0;
  for (std::uint64_t seed = 50; seed < 55; ++seed) {
    const TwistedKernel f = random_kernel(tr, 2, 8.0, seed, 2.0);
    const TwistedKernel g = random_kernel(tr, 2, 8.0, seed + 7, 2.0);
    const ConvolveResult fg = twisted_convolve(f, g);
    const ConvolveResult gf = twisted_convolve(g, f);
    const TwistedKernel lhs = involution(fg.kernel).kernel;
    const ConvolveResult rhs = twisted_convolve(involution(g).kernel, involution(f).kernel);
    const Cube inner{0.0, 0.0, 4.0};
    for (size_t b = 0; b < lhs.entries.size(); ++b) {
      if (!inner.contains(tr->base_points[b])) continue;
      for (const auto& [z, blk] : lhs.entries[b]) {
        const Eigen::MatrixXcd* other = rhs.kernel.find(static_cast<int>(b), z);
        if (other) worst_anti = std::max(worst_anti, (blk - *other).cwiseAbs().maxCoeff());
      }
    }
    worst_trace = std::max(worst_trace,
                           std::abs(trace_kernel(fg.kernel) - trace_kernel(gf.kernel)));
    bound = std::max(bound, fg.loss_bound + gf.loss_bound);
  }
  c.pass = worst_oracle <= 1e-12 && worst_anti <= 1e-12 && worst_trace <= bound + 1e-12;
  c.details = fmt("oracle diff=%.2e; anti-hom=%.2e; |Tr(fg)-Tr(gf)|=%.2e (bound %.2e)",
                  worst_oracle, worst_anti, worst_trace, bound);
  return c;
}

Criterion criterion_tf_exactness() {
  Criterion c{11, "time-frequency kernel exactness", false, ""};
  const GridSpec grid{512, 16.0};
  const Window f = random_window(grid, 2027);
  Rng rng(9001);
  double worst_unitary = 0.0, worst_comm = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vec2 z{grid.step() * static_cast<double>(rng.uniform_int(-256, 256)),
                 (1.0 / grid.L) * static_cast<double>(rng.uniform_int(-240, 240))};
    const Window s = tf_shift(f, z);
    worst_unitary = std::max(worst_unitary, std::abs(s.norm2() - f.norm2()));
    const Window lhs = tf_shift(tf_shift(f, {0.0, z.y}), {z.x, 0.0});
    Window rhs = tf_shift(tf_shift(f, {z.x, 0.0}), {0.0, z.y});
    const double ang = -2.0 * kPi * z.y * z.x;
    rhs.values *= cd(std::cos(ang), std::sin(ang));
    worst_comm = std::max(worst_comm,
                          (lhs.values - rhs.values).norm() * std::sqrt(grid.step()));
  }
  // gaussian pair modulus against quadrature on the stated grid
  const GridSpec fine{1024, 32.0};
  const Window gg = gaussian_window(fine);
  double worst_stft = 0.0;
  Rng rng2(77);
  for (int t = 0; t < 25; ++t) {
    const Vec2 z{rng2.uniform(-2.0, 2.0), rng2.uniform(-2.0, 2.0)};
    const std::vector<cd> v = stft(gg, gg, {z});
    const double expect = std::exp(-kPi * z.norm2() / 2.0);
    worst_stft = std::max(worst_stft, std::abs(std::abs(v[0]) - expect));
  }
  c.pass = worst_unitary <= 1e-12 && worst_comm <= 1e-12 && worst_stft <= 1e-6;
  c.details = fmt("unitarity=%.2e commutation=%.2e stft modulus=%.2e", worst_unitary, worst_comm,
                  worst_stft);
  return c;
}

}  // namespace

std::vector<Criterion> run_all(const Options& opts) {
  (void)opts;
  std::vector<Criterion> out;
  out.push_back(criterion_trace_lattice());
  out.push_back(criterion_trace_quasicrystal());
  out.push_back(criterion_idempotency());
  out.push_back(criterion_covariance());
  out.push_back(criterion_holefill());
  out.push_back(criterion_balian_low());
  out.push_back(criterion_bound_spread());
  out.push_back(criterion_patch_stats());
  out.push_back(criterion_gap_labels());
  out.push_back(criterion_algebra_axioms());
  out.push_back(criterion_tf_exactness());
  return out;
}

int print_results(const std::vector<Criterion>& results) {
  int unexpected = 0;
  int expected = 0;
  for (const auto& c : results) {
    const char* tag = c.pass ? "PASS" : (c.expected_fail ? "FAIL (expected)" : "FAIL");
    std::printf("[%s] criterion %2d: %s -- %s\n", tag, c.id, c.name.c_str(), c.details.c_str());
    if (!c.pass) {
      if (c.expected_fail)
        ++expected;
      else
        ++unexpected;
    }
  }
  std::printf("%zu criteria, %d failed, %d expected failures (documented target defects)\n",
              results.size(), unexpected, expected);
  return unexpected;
}

}  // namespace qg::acceptance
