#include "qg/tfa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "qg/fft.hpp"

namespace qg {

namespace {

Window modulate(const Window& f, double om) {
  Window out = f;
  for (int j = 0; j < f.grid.n; ++j) {
    const double ang = 2.0 * kPi * om * f.grid.t(j);
    out.values[j] *= cd(std::cos(ang), std::sin(ang));
  }
  return out;
}

// pi(w)^H = T_{-x} M_{-omega}, exact adjoint on the grid for any real w.
Window pi_adjoint(const Window& f, Vec2 w) {
  Window tmp = modulate(f, -w.y);
  return tf_shift(tmp, {-w.x, 0.0}, false);
}

struct AtomOperator {
  Eigen::MatrixXcd G;
  double delta;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& f) const { return delta * (G * (G.adjoint() * f)); }
};

}  // namespace

GaborSystem make_system(const PointSet& ps, std::vector<Window> windows, Cube region) {
  if (windows.empty()) fail(Errc::bad_input, "make_system: need at least one window");
  GaborSystem sys;
  sys.grid = windows[0].grid;
  for (const auto& w : windows)
    if (!(w.grid == sys.grid)) fail(Errc::bad_input, "make_system: windows share one grid");
  for (const auto& p : ps.points) {
    if (!region.contains(p)) continue;
    if (std::abs(p.y) > sys.grid.nyquist_margin() + kCoordTol)
      fail(Errc::nyquist_violation, "make_system: point frequency exceeds the Nyquist margin");
    sys.points.push_back(p);
  }
  sys.windows = std::move(windows);
  sys.provenance = ps.provenance + "|box";
  return sys;
}

GaborSystem make_system_cylinder(const PointSet& ps, std::vector<Window> windows, double x_half) {
  if (windows.empty()) fail(Errc::bad_input, "make_system_cylinder: need at least one window");
  GaborSystem sys;
  sys.grid = windows[0].grid;
  const double half_band = sys.grid.band() / 2.0;
  for (const auto& p : ps.points) {
    if (std::abs(p.x) > x_half + kCoordTol) continue;
    if (p.y < -half_band - kCoordTol || p.y >= half_band - kCoordTol) continue;
    sys.points.push_back(p);
  }
  sys.windows = std::move(windows);
  sys.provenance = ps.provenance + "|cylinder";
  return sys;
}

GaborSystem make_full_torus_lattice(double a, double b, const GridSpec& grid,
                                    std::vector<Window> windows) {
  grid.validate();
  const double nx_f = grid.L / a;
  const double nw_f = grid.band() / b;
  if (std::abs(nx_f - std::llround(nx_f)) > 1e-9 || std::abs(nw_f - std::llround(nw_f)) > 1e-9)
    fail(Errc::bad_input, "make_full_torus_lattice: lattice not commensurate with the torus");
  const auto nx = static_cast<int>(std::llround(nx_f));
  const auto nw = static_cast<int>(std::llround(nw_f));
  GaborSystem sys;
  sys.grid = grid;
  sys.windows = std::move(windows);
  sys.provenance = "torus_lattice";
  sys.points.reserve(static_cast<size_t>(nx) * static_cast<size_t>(nw));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nw; ++j)
      sys.points.push_back({-grid.L / 2.0 + i * a, -grid.band() / 2.0 + j * b});
  return sys;
}

Eigen::MatrixXcd system_atoms(const GaborSystem& sys) {
  const int n = sys.grid.n;
  Eigen::MatrixXcd G(n, static_cast<Eigen::Index>(sys.atom_count()));
  Eigen::Index col = 0;
  for (const auto& w : sys.windows)
    for (const auto& z : sys.points) G.col(col++) = tf_shift(w, z, false).values;
  return G;
}

void FrameAnalysis::ensure_decomposition() const {
  if (evecs_) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
  if (es.info() != Eigen::Success) fail(Errc::frame_operator_singular, "eigendecomposition failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

const Eigen::VectorXd& FrameAnalysis::eigenvalues() const {
  if (!evals_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail(Errc::frame_operator_singular, "eigendecomposition failed");
    evals_ = es.eigenvalues();
  }
  return *evals_;
}

Eigen::VectorXcd FrameAnalysis::solve(const Eigen::VectorXcd& rhs, double* residual) const {
  ensure_decomposition();
  const Eigen::VectorXd& lam = *evals_;
  const Eigen::MatrixXcd& V = *evecs_;
  const double cutoff = solve_cutoff_rel * std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1)));
  Eigen::VectorXcd y = V.adjoint() * rhs;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = lam(i) > cutoff ? y(i) / lam(i) : cd(0.0, 0.0);
  Eigen::VectorXcd x = V * y;
  if (residual) {
    const double denom = rhs.norm();
    *residual = denom > 0.0 ? (S * x - rhs).norm() / denom : 0.0;
  }
  return x;
}

FrameAnalysis frame_operator(const GaborSystem& sys) {
  FrameAnalysis fa;
  fa.grid = sys.grid;
  fa.atom_count = sys.atom_count();
  const int n = sys.grid.n;
  const Eigen::MatrixXcd G = system_atoms(sys);
  fa.S = Eigen::MatrixXcd::Zero(n, n);
  fa.S.selfadjointView<Eigen::Lower>().rankUpdate(G, sys.grid.step());
  fa.S = fa.S.selfadjointView<Eigen::Lower>();
  return fa;
}

std::pair<double, double> frame_bounds(FrameAnalysis& fa, double interior_fraction) {
  if (interior_fraction <= 0.0 || interior_fraction > 1.0)
    fail(Errc::bad_input, "frame_bounds: interior_fraction must be in (0, 1]");
  const int n = fa.grid.n;
  std::vector<int> idx;
  for (int j = 0; j < n; ++j)
    if (std::abs(fa.grid.t(j)) <= interior_fraction * fa.grid.L / 2.0 + kCoordTol) idx.push_back(j);
  if (idx.size() < 2) fail(Errc::degenerate_interior, "frame_bounds: interior mask too small");
  Eigen::MatrixXcd Sub(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (size_t r = 0; r < idx.size(); ++r)
    for (size_t c = 0; c < idx.size(); ++c)
      Sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          fa.S(idx[r], idx[c]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(Errc::frame_operator_singular, "compression eigensolve failed");
  fa.A = es.eigenvalues()(0);
  const Eigen::VectorXd& lam = fa.eigenvalues();
  fa.B = lam(lam.size() - 1);
  fa.interior_fraction = interior_fraction;
  return {fa.A, fa.B};
}

DualResult dual_window(const GaborSystem& sys, const FrameAnalysis& fa, Vec2 z,
                       size_t window_index, double tol_solve) {
  if (window_index >= sys.windows.size()) fail(Errc::bad_input, "dual_window: bad window index");
  if (!std::isnan(fa.A) && fa.A <= tol_solve)
    fail(Errc::frame_operator_singular, "dual_window: lower frame bound below tolerance");
  const Window shifted = tf_shift(sys.windows[window_index], z);
  DualResult out;
  out.window.grid = sys.grid;
  out.window.kind = "dual";
  out.window.values = fa.solve(shifted.values, &out.residual);
  if (out.residual > 1e-6)
    fail(Errc::frame_operator_singular, "dual_window: solve residual too large");
  return out;
}

ReconstructResult reconstruct(const Window& f, const GaborSystem& sys, const FrameAnalysis& fa) {
  (void)sys;
  ReconstructResult out;
  const Eigen::VectorXcd x = fa.solve(f.values);
  out.reconstructed.grid = f.grid;
  out.reconstructed.kind = "reconstructed";
  out.reconstructed.values = fa.S * x;
  const double denom = f.values.norm();
  out.residual = denom > 0.0 ? (out.reconstructed.values - f.values).norm() / denom : 0.0;
  return out;
}

double m1_norm_estimate(const Window& f) {
  const int n = f.grid.n;
  const double delta = f.grid.step();
  const Window phi = gaussian_window(f.grid);
  const int stride = std::max(1, static_cast<int>(std::llround(static_cast<double>(n) / (16.0 * f.grid.L))));
  double total = 0.0;
  std::vector<cd> row(static_cast<size_t>(n));
  for (int j = 0; j < n; j += stride) {
    for (int k = 0; k < n; ++k) {
      const int m = ((k - j + n / 2) % n + n) % n;
      row[static_cast<size_t>(k)] = delta * f.values[k] * std::conj(phi.values[m]);
    }
    fft(row, false);
    for (int l = 0; l < n; ++l) total += std::abs(row[static_cast<size_t>(l)]);
  }
  return total * (stride * delta) * (1.0 / f.grid.L);
}

namespace {
int rel_1d(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  int best = xs.empty() ? 0 : 1;
  size_t hi = 0;
  for (size_t a = 0; a < xs.size(); ++a) {
    if (hi < a) hi = a;
    while (hi + 1 < xs.size() && xs[hi + 1] <= xs[a] + 1.0 + kCoordTol) ++hi;
    best = std::max(best, static_cast<int>(hi - a + 1));
  }
  return best;
}
}  // namespace

AmalgamReport wiener_amalgam_check(const Window& f, const std::vector<double>& section) {
  AmalgamReport rep;
  const int n = f.grid.n;
  const double delta = f.grid.step();
  for (const double t : section) {
    const double jf = (t + f.grid.L / 2.0) / delta;
    const auto j = static_cast<std::int64_t>(std::llround(jf));
    if (j < 0 || j >= n || std::abs(jf - static_cast<double>(j)) > 1e-6)
      fail(Errc::bad_input, "wiener_amalgam_check: section point off the sample grid");
    rep.lhs += std::abs(f.values[static_cast<Eigen::Index>(j)]);
  }
  rep.rel = rel_1d(section);
  const auto mlo = static_cast<std::int64_t>(std::floor(-f.grid.L / 2.0));
  const auto mhi = static_cast<std::int64_t>(std::ceil(f.grid.L / 2.0));
  for (std::int64_t m = mlo; m < mhi; ++m) {
    double sup = 0.0;
    for (int j = 0; j < n; ++j) {
      const double t = f.grid.t(j);
      if (t >= static_cast<double>(m) && t < static_cast<double>(m) + 1.0)
        sup = std::max(sup, std::abs(f.values[j]));
    }
    rep.amalgam_norm += sup;
  }
  rep.rhs = rep.rel * rep.amalgam_norm;
  rep.holds = rep.lhs <= rep.rhs + 1e-12;
  return rep;
}

ModulusEstimate modulus_of_continuity(const Window& g, double delta, int samples) {
  ModulusEstimate est;
  if (delta <= 0.0) return est;
  // w stays in a bounded cell near the origin: the literal sup over all w
  // degenerates through the far-field phase (see the report notes)
  static const std::vector<Vec2> kBases = {
      {0.0, 0.0}, {0.35, 0.27}, {-0.52, 0.61}, {0.7, -0.45}};
  const double rstep = 0.025;
  double max_adjacent = 0.0;
  for (const auto& w : kBases) {
    const Window pw = tf_shift(g, w);
    for (double r = rstep; r <= delta + 1e-12; r += rstep) {
      double prev = -1.0;
      for (int a = 0; a < samples; ++a) {
        const double ang = 2.0 * kPi * a / samples;
        const Vec2 z{w.x + r * std::cos(ang), w.y + r * std::sin(ang)};
        Window diff = tf_shift(g, z);
        diff.values -= pw.values;
        const double v = m1_norm_estimate(diff);
        est.lower = std::max(est.lower, v);
        if (prev >= 0.0) max_adjacent = std::max(max_adjacent, std::abs(v - prev));
        prev = v;
      }
    }
  }
  est.upper = est.lower + max_adjacent + rstep * (est.lower / std::max(delta, rstep));
  return est;
}

GocrReport gocr_check(const Window& g, const PointSet& ps, Cube interior, double grid_step) {
  GocrReport rep;
  if (ps.points.empty()) {
    rep.note = "empty point set: hole unbounded";
    return rep;
  }
  const HoleCertificate hole = hole_radius(ps, interior, grid_step);
  rep.hole_upper = hole.upper;
  double delta_star = 0.0;
  for (double d = 0.05; d <= 0.501; d += 0.05) {
    const ModulusEstimate m = modulus_of_continuity(g, d);
    if (m.lower < 1.0)
      delta_star = d;
    else
      break;
  }
  rep.delta_star = delta_star;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "hole.upper=%.6g delta*=%.6g", hole.upper, delta_star);
  rep.note = buf;
  rep.verdict = hole.upper < delta_star ? GocrReport::Verdict::sufficient
                                        : GocrReport::Verdict::inconclusive;
  return rep;
}

std::vector<Window> multiwindow_from_translates(const Window& g, const std::vector<Vec2>& translates) {
  std::vector<Window> out;
  out.reserve(translates.size());
  for (const auto& z : translates) out.push_back(tf_shift(g, z));
  return out;
}

double covariance_residual(const GaborSystem& sys, Vec2 w) {
  if (std::abs(w.y) > sys.grid.nyquist_margin() + kCoordTol)
    fail(Errc::nyquist_violation, "covariance_residual: shift frequency exceeds the margin");
  const double delta = sys.grid.step();
  const AtomOperator S1{system_atoms(sys), delta};
  GaborSystem displaced = sys;
  for (auto& p : displaced.points) p = p - w;
  const AtomOperator S2{system_atoms(displaced), delta};

  auto apply_pi = [&](const Eigen::VectorXcd& v) {
    Window f{sys.grid, v, ""};
    return tf_shift(f, w, false).values;
  };
  auto apply_pi_h = [&](const Eigen::VectorXcd& v) {
    Window f{sys.grid, v, ""};
    return pi_adjoint(f, w).values;
  };
  auto apply_R = [&](const Eigen::VectorXcd& v) {
    return (S1.apply(apply_pi(v)) - apply_pi(S2.apply(v))).eval();
  };
  auto apply_Rh = [&](const Eigen::VectorXcd& v) {
    return (apply_pi_h(S1.apply(v)) - S2.apply(apply_pi_h(v))).eval();
  };

  Rng rng(0x9d2c5680u);
  Eigen::VectorXcd v(sys.grid.n);
  for (int i = 0; i < sys.grid.n; ++i) v(i) = rng.cnormal();
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 40; ++it) {
    Eigen::VectorXcd u = apply_R(v);
    const double nu = u.norm();
    if (nu < 1e-300) return 0.0;
    Eigen::VectorXcd vn = apply_Rh(u / nu);
    sigma = vn.norm();
    if (sigma < 1e-300) return nu;
    v = vn / sigma;
  }
  return sigma;
}

SpreadReport transversal_bound_spread(const PointSet& ps, const std::vector<Window>& windows,
                                      const std::vector<Vec2>& shifts, double x_half,
                                      double interior_fraction) {
  SpreadReport rep;
  auto bounds_for = [&](Vec2 shift) {
    const PointSet moved = translate(ps, {-shift.x, -shift.y});
    GaborSystem sys = make_system_cylinder(moved, windows, x_half);
    FrameAnalysis fa = frame_operator(sys);
    return frame_bounds(fa, interior_fraction);
  };
  const auto [A0, B0] = bounds_for({0.0, 0.0});
  rep.As.push_back(A0);
  rep.Bs.push_back(B0);
  for (const auto& w : shifts) {
    const auto [A, B] = bounds_for(w);
    rep.As.push_back(A);
    rep.Bs.push_back(B);
    rep.spread_A = std::max(rep.spread_A, std::abs(A - A0) / A0);
    rep.spread_B = std::max(rep.spread_B, std::abs(B - B0) / B0);
  }
  return rep;
}

std::vector<double> strong_continuity_probe(const PointSet& ps, const std::vector<Window>& windows,
                                            const Window& f, const std::vector<Vec2>& shifts,
                                            Cube region) {
  const GaborSystem base = make_system(ps, windows, region);
  const double delta = base.grid.step();
  const AtomOperator S0{system_atoms(base), delta};
  const Eigen::VectorXcd sf = S0.apply(f.values);
  std::vector<double> out;
  for (const auto& z : shifts) {
    const PointSet moved = translate(ps, {-z.x, -z.y});
    const GaborSystem sys = make_system(moved, windows, region);
    const AtomOperator Sk{system_atoms(sys), delta};
    out.push_back(std::sqrt(delta) * (Sk.apply(f.values) - sf).norm());
  }
  return out;
}

void dump_frame_operator(const FrameAnalysis& fa, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::bad_input, "dump_frame_operator: cannot open " + path);
  out.write("QGSOP001", 8);
  const int n = fa.grid.n;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const cd v = fa.S(r, c);
      const double re = v.real(), im = v.imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof(double));
      out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
}

Eigen::MatrixXcd load_frame_operator(const std::string& path, int n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::bad_input, "load_frame_operator: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, "QGSOP001", 8) != 0)
    fail(Errc::bad_input, "load_frame_operator: bad header");
  Eigen::MatrixXcd S(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double re = 0.0, im = 0.0;
      in.read(reinterpret_cast<char*>(&re), sizeof(double));
      in.read(reinterpret_cast<char*>(&im), sizeof(double));
      S(r, c) = cd(re, im);
    }
  return S;
}

}  // namespace qg
