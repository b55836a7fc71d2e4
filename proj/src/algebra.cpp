#include "qg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qg {

namespace {

cd unit_phase(double ang) { return cd(std::cos(ang), std::sin(ang)); }

// sigma(z, w') phase of the groupoid product, z = (x, omega), w' = (x', omega').
cd sigma_phase(const Vec2& z, const Vec2& wp) {
  return unit_phase(-2.0 * kPi * wp.y * (z.x - wp.x));
}

}  // namespace

// TransversalSample ----------------------------------------------------------

void TransversalSample::finalize() {
  base_index_.clear();
  for (size_t i = 0; i < base_keys.size(); ++i)
    base_index_.emplace(base_keys[i], static_cast<int>(i));
  ambient_.clear();
  for (const auto& k : ambient_keys_) ambient_.emplace(k, 1);
}

TransversalSample TransversalSample::from_pointset(const PointSet& ps, double cube_side) {
  if (!ps.has_embedding() || ps.embedding->k != 2)
    fail(Errc::incompatible_kernels, "transversal needs a 2-d integer embedding");
  TransversalSample t;
  const auto& b = ps.embedding->basis;
  t.basis = {b[0], b[1], b[2], b[3]};
  t.cube_side = cube_side;
  const Cube c{0.0, 0.0, cube_side};
  for (size_t i = 0; i < ps.size(); ++i) {
    t.ambient_keys_.push_back(ps.embedding->int_coords[i]);
    if (c.contains(ps.points[i])) {
      t.base_keys.push_back(ps.embedding->int_coords[i]);
      t.base_points.push_back(ps.points[i]);
    }
  }
  if (t.base_keys.empty()) fail(Errc::empty_point_set, "transversal cube holds no points");
  t.finalize();
  return t;
}

TransversalSample TransversalSample::torus_lattice(double a, double b, const GridSpec& grid,
                                                   double cube_side) {
  const double px_f = grid.L / a;
  const double pw_f = grid.band() / b;
  if (std::abs(px_f - std::llround(px_f)) > 1e-9 || std::abs(pw_f - std::llround(pw_f)) > 1e-9)
    fail(Errc::bad_input, "torus transversal: lattice not commensurate with the torus");
  TransversalSample t;
  t.basis = {a, 0.0, 0.0, b};
  t.cube_side = cube_side;
  t.periods = {std::llround(px_f), std::llround(pw_f)};
  const Cube c{0.0, 0.0, cube_side};
  for (std::int64_t i = -t.periods[0] / 2; i < t.periods[0] - t.periods[0] / 2; ++i)
    for (std::int64_t j = -t.periods[1] / 2; j < t.periods[1] - t.periods[1] / 2; ++j) {
      const IntVec k(i, j);
      t.ambient_keys_.push_back(k);
      const Vec2 p{a * static_cast<double>(i), b * static_cast<double>(j)};
      if (c.contains(p)) {
        t.base_keys.push_back(k);
        t.base_points.push_back(p);
      }
    }
  if (t.base_keys.empty()) fail(Errc::empty_point_set, "transversal cube holds no points");
  t.finalize();
  return t;
}

IntVec TransversalSample::canonical(IntVec k) const {
  for (int i = 0; i < 2; ++i) {
    const std::int64_t p = periods[static_cast<size_t>(i)];
    if (p <= 0) continue;
    std::int64_t m = ((k[i] % p) + p) % p;      // [0, p)
    if (m >= p - p / 2) m -= p;                 // [-p/2, p - p/2)
    k[i] = m;
  }
  return k;
}

Vec2 TransversalSample::coords(const IntVec& k) const {
  const IntVec c = canonical(k);
  return {basis[0] * static_cast<double>(c[0]) + basis[1] * static_cast<double>(c[1]),
          basis[2] * static_cast<double>(c[0]) + basis[3] * static_cast<double>(c[1])};
}

int TransversalSample::find_base(const IntVec& k) const {
  const auto it = base_index_.find(canonical(k));
  return it == base_index_.end() ? -1 : it->second;
}

bool TransversalSample::ambient_contains(const IntVec& k) const {
  return ambient_.count(canonical(k)) > 0;
}

TransversalSample TransversalSample::manual(const PointSet& ps, const std::vector<IntVec>& bases) {
  if (!ps.has_embedding() || ps.embedding->k != 2)
    fail(Errc::incompatible_kernels, "transversal needs a 2-d integer embedding");
  TransversalSample t;
  const auto& b = ps.embedding->basis;
  t.basis = {b[0], b[1], b[2], b[3]};
  for (size_t i = 0; i < ps.size(); ++i) t.ambient_keys_.push_back(ps.embedding->int_coords[i]);
  for (const auto& k : bases) {
    t.base_keys.push_back(k);
    t.base_points.push_back(t.coords(k));
    t.cube_side = std::max(t.cube_side, 2.0 * t.base_points.back().norm_inf());
  }
  if (t.base_keys.empty()) fail(Errc::empty_point_set, "manual transversal needs bases");
  t.finalize();
  return t;
}

TransversalSample TransversalSample::with_cube(double new_side) const {
  TransversalSample t = *this;
  t.cube_side = new_side;
  t.base_keys.clear();
  t.base_points.clear();
  const Cube c{0.0, 0.0, new_side};
  for (const auto& k : ambient_keys_) {
    const Vec2 p = coords(k);
    if (c.contains(p)) {
      t.base_keys.push_back(canonical(k));
      t.base_points.push_back(p);
    }
  }
  if (t.base_keys.empty()) fail(Errc::empty_point_set, "transversal cube holds no points");
  t.finalize();
  return t;
}

// TwistedKernel ---------------------------------------------------------------

const Eigen::MatrixXcd* TwistedKernel::find(int base, const IntVec& disp) const {
  if (base < 0 || static_cast<size_t>(base) >= entries.size()) return nullptr;
  const auto& lk = lookup_[static_cast<size_t>(base)];
  const auto it = lk.find(trans->canonical(disp));
  if (it == lk.end()) return nullptr;
  return &entries[static_cast<size_t>(base)][static_cast<size_t>(it->second)].second;
}

void TwistedKernel::insert(int base, const IntVec& disp, Eigen::MatrixXcd block) {
  if (entries.size() != trans->size()) {
    entries.resize(trans->size());
    lookup_.resize(trans->size());
  }
  const IntVec d = trans->canonical(disp);
  auto& lk = lookup_[static_cast<size_t>(base)];
  const auto it = lk.find(d);
  if (it == lk.end()) {
    lk.emplace(d, static_cast<int>(entries[static_cast<size_t>(base)].size()));
    entries[static_cast<size_t>(base)].emplace_back(d, std::move(block));
  } else {
    entries[static_cast<size_t>(base)][static_cast<size_t>(it->second)].second += block;
  }
}

void TwistedKernel::finalize() {
  if (entries.size() != trans->size()) {
    entries.resize(trans->size());
    lookup_.resize(trans->size());
  }
  for (size_t b = 0; b < entries.size(); ++b) {
    auto& vec = entries[b];
    std::sort(vec.begin(), vec.end(),
              [](const auto& a, const auto& c) { return a.first < c.first; });
    auto& lk = lookup_[b];
    lk.clear();
    for (size_t i = 0; i < vec.size(); ++i) lk.emplace(vec[i].first, static_cast<int>(i));
  }
}

double TwistedKernel::sup_norm() const {
  double s = 0.0;
  for (const auto& per_base : entries)
    for (const auto& [k, block] : per_base) s = std::max(s, block.cwiseAbs().maxCoeff());
  return s;
}

size_t TwistedKernel::entry_count() const {
  size_t c = 0;
  for (const auto& per_base : entries) c += per_base.size();
  return c;
}

TwistedKernel identity_kernel(std::shared_ptr<const TransversalSample> trans, int N,
                              double r_supp) {
  TwistedKernel k;
  k.trans = std::move(trans);
  k.rows = k.cols = N;
  k.r_supp = r_supp;
  for (size_t b = 0; b < k.trans->size(); ++b)
    k.insert(static_cast<int>(b), IntVec(0, 0), Eigen::MatrixXcd::Identity(N, N));
  k.finalize();
  return k;
}

TwistedKernel random_kernel(std::shared_ptr<const TransversalSample> trans, int N,
                            double r_supp, std::uint64_t seed, double fill_side) {
  if (fill_side <= 0.0) fill_side = r_supp;
  Rng rng(seed);
  TwistedKernel k;
  k.trans = std::move(trans);
  k.rows = k.cols = N;
  k.r_supp = r_supp;
  for (size_t b = 0; b < k.trans->size(); ++b) {
    const IntVec w = k.trans->base_keys[b];
    for (const auto& v : k.trans->ambient_keys()) {
      const IntVec d = k.trans->canonical(v - w);
      if (k.trans->coords(d).norm_inf() > fill_side / 2.0 + kCoordTol) continue;
      Eigen::MatrixXcd block(N, N);
      for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) block(r, c) = 0.5 * rng.cnormal();
      k.insert(static_cast<int>(b), d, std::move(block));
    }
  }
  k.finalize();
  return k;
}

ConvolveResult twisted_convolve(const TwistedKernel& f, const TwistedKernel& g) {
  if (f.trans.get() != g.trans.get() || f.cols != g.rows ||
      f.trans->size() != g.trans->size())
    fail(Errc::incompatible_kernels, "twisted_convolve: incompatible kernels");
  const TransversalSample& tr = *f.trans;
  ConvolveResult out;
  out.kernel.trans = f.trans;
  out.kernel.rows = f.rows;
  out.kernel.cols = g.cols;
  out.kernel.r_supp = std::max(f.r_supp, g.r_supp);
  const double fsup = f.sup_norm();
  const double half = out.kernel.r_supp / 2.0;

  for (size_t bw = 0; bw < tr.size(); ++bw) {
    const IntVec wkey = tr.base_keys[bw];
    double base_loss = 0.0;
    for (const auto& [wp, gblock] : g.entries[bw]) {
      const Vec2 wp_coords = tr.coords(wp);
      const int bv = tr.find_base(wkey + wp);
      if (bv < 0) {
        ++out.dropped;
        base_loss += static_cast<double>(f.cols) * fsup * gblock.cwiseAbs().maxCoeff();
        continue;
      }
      ++out.resolved;
      for (const auto& [zf, fblock] : f.entries[static_cast<size_t>(bv)]) {
        const IntVec z = tr.canonical(zf + wp);
        const Vec2 zc = tr.coords(z);
        if (zc.norm_inf() > half + kCoordTol) continue;
        out.kernel.insert(static_cast<int>(bw), z,
                          (sigma_phase(zc, wp_coords) * (fblock * gblock)).eval());
      }
    }
    out.loss_bound = std::max(out.loss_bound, base_loss);
  }
  out.kernel.finalize();
  return out;
}

InvolutionResult involution(const TwistedKernel& f) {
  const TransversalSample& tr = *f.trans;
  InvolutionResult out;
  out.kernel.trans = f.trans;
  out.kernel.rows = f.cols;
  out.kernel.cols = f.rows;
  out.kernel.r_supp = f.r_supp;
  for (size_t bv = 0; bv < tr.size(); ++bv) {
    const IntVec vkey = tr.base_keys[bv];
    for (const auto& [zv, block] : f.entries[bv]) {
      const int bw = tr.find_base(vkey + zv);
      if (bw < 0) {
        ++out.dropped;
        continue;
      }
      const IntVec z = tr.canonical(-zv);
      const Vec2 zc = tr.coords(z);
      out.kernel.insert(bw, z,
                        (unit_phase(-2.0 * kPi * zc.x * zc.y) * block.adjoint()).eval());
    }
  }
  out.kernel.finalize();
  return out;
}

cd trace_kernel(const TwistedKernel& f) {
  if (f.rows != f.cols) fail(Errc::incompatible_kernels, "trace_kernel: blocks must be square");
  cd acc(0.0, 0.0);
  const IntVec zero(0, 0);
  for (size_t b = 0; b < f.trans->size(); ++b) {
    const Eigen::MatrixXcd* blk = f.find(static_cast<int>(b), zero);
    if (blk) acc += blk->trace();
  }
  return acc * f.trans->weight();
}

FunctionField constant_field(std::shared_ptr<const TransversalSample> trans, const Window& g) {
  FunctionField field;
  field.trans = std::move(trans);
  field.values.assign(field.trans->size(), g);
  return field;
}

FunctionField nc_synthesis(const TwistedKernel& coeffs, const std::vector<Window>& windows) {
  if (coeffs.cols != 1 || coeffs.rows != static_cast<int>(windows.size()))
    fail(Errc::incompatible_kernels, "nc_synthesis: expected an N x 1 coefficient column");
  const TransversalSample& tr = *coeffs.trans;
  const GridSpec grid = windows[0].grid;
  FunctionField field;
  field.trans = coeffs.trans;
  Window zero;
  zero.grid = grid;
  zero.kind = "synthesized";
  zero.values = Eigen::VectorXcd::Zero(grid.n);
  field.values.assign(tr.size(), zero);
  for (size_t bv = 0; bv < tr.size(); ++bv) {
    const IntVec vkey = tr.base_keys[bv];
    for (const auto& [zv, block] : coeffs.entries[bv]) {
      const int bw = tr.find_base(vkey + zv);
      if (bw < 0) continue;
      const Vec2 shift = tr.coords(tr.canonical(-zv));
      for (size_t i = 0; i < windows.size(); ++i) {
        if (std::abs(block(static_cast<Eigen::Index>(i), 0)) < 1e-300) continue;
        const Window moved = tf_shift(windows[i], shift, false);
        field.values[static_cast<size_t>(bw)].values +=
            block(static_cast<Eigen::Index>(i), 0) * moved.values;
      }
    }
  }
  return field;
}

TwistedKernel nc_analysis(const FunctionField& field, const GaborSystem& sys,
                          const FrameAnalysis& fa, double r_supp) {
  const TransversalSample& tr = *field.trans;
  const size_t M = tr.size();
  const size_t N = sys.windows.size();
  const double delta = sys.grid.step();
  // duals (S^Lambda)^{-1} pi(w) g_i for every base, via the covariance shortcut
  std::vector<Eigen::VectorXcd> duals(M * N);
  for (size_t b = 0; b < M; ++b)
    for (size_t i = 0; i < N; ++i) {
      const Window shifted = tf_shift(sys.windows[i], tr.coords(tr.base_keys[b]), false);
      duals[b * N + i] = fa.solve(shifted.values);
    }
  std::vector<Eigen::VectorXcd> moved(M);
  for (size_t b = 0; b < M; ++b) {
    Window m = tf_shift(field.values[b], tr.coords(tr.base_keys[b]), false);
    moved[b] = m.values;
  }
  TwistedKernel out;
  out.trans = field.trans;
  out.rows = static_cast<int>(N);
  out.cols = 1;
  out.r_supp = r_supp;
  for (size_t bw = 0; bw < M; ++bw) {
    const IntVec wkey = tr.base_keys[bw];
    for (size_t bv = 0; bv < M; ++bv) {
      const IntVec zeta = tr.canonical(tr.base_keys[bv] - wkey);
      const Vec2 zc = tr.coords(zeta);
      if (zc.norm_inf() > r_supp / 2.0 + kCoordTol) continue;
      const Vec2 vc = tr.coords(tr.base_keys[bv]);
      const cd phase = unit_phase(-2.0 * kPi * vc.x * zc.y);
      Eigen::MatrixXcd block(static_cast<Eigen::Index>(N), 1);
      for (size_t i = 0; i < N; ++i)
        block(static_cast<Eigen::Index>(i), 0) =
            phase * delta * duals[bw * N + i].dot(moved[bv]);
      out.insert(static_cast<int>(bw), zeta, std::move(block));
    }
  }
  out.finalize();
  return out;
}

namespace {

// P entries on an arbitrary base list: entry_ij(w, z) =
// e^{-2 pi i x_v omega_z} <pi(v) g_i, S^{-1} pi(w) g_j>, v = w + z.
TwistedKernel idempotent_on(const std::shared_ptr<const TransversalSample>& trans,
                            const GaborSystem& sys, const FrameAnalysis& fa, double r_supp) {
  const TransversalSample& tr = *trans;
  const size_t M = tr.size();
  const size_t N = sys.windows.size();
  const double delta = sys.grid.step();
  std::vector<Eigen::VectorXcd> duals(M * N);
  for (size_t b = 0; b < M; ++b)
    for (size_t j = 0; j < N; ++j) {
      const Window shifted = tf_shift(sys.windows[j], tr.coords(tr.base_keys[b]), false);
      double res = 0.0;
      duals[b * N + j] = fa.solve(shifted.values, (b % std::max<size_t>(M / 2, 1)) == 0 ? &res : nullptr);
      if ((b % std::max<size_t>(M / 2, 1)) == 0 && res > 1e-6)
        fail(Errc::frame_operator_singular, "gabor_idempotent: frame condition check failed");
    }
  // pi(v) g_i for ambient points reachable as w + z
  std::unordered_map<IntVec, std::vector<Eigen::VectorXcd>, IntVecHash> shifted_cache;
  auto shifted_for = [&](const IntVec& v) -> const std::vector<Eigen::VectorXcd>& {
    const IntVec cv = tr.canonical(v);
    auto it = shifted_cache.find(cv);
    if (it == shifted_cache.end()) {
      std::vector<Eigen::VectorXcd> vs(N);
      for (size_t i = 0; i < N; ++i)
        vs[i] = tf_shift(sys.windows[i], tr.coords(cv), false).values;
      it = shifted_cache.emplace(cv, std::move(vs)).first;
    }
    return it->second;
  };

  TwistedKernel P;
  P.trans = trans;
  P.rows = P.cols = static_cast<int>(N);
  P.r_supp = r_supp;
  for (size_t bw = 0; bw < M; ++bw) {
    const IntVec wkey = tr.base_keys[bw];
    for (const auto& vkey : tr.ambient_keys()) {
      const IntVec z = tr.canonical(vkey - wkey);
      const Vec2 zc = tr.coords(z);
      if (zc.norm_inf() > r_supp / 2.0 + kCoordTol) continue;
      const Vec2 vc = tr.coords(vkey);
      const cd phase = unit_phase(-2.0 * kPi * vc.x * zc.y);
      const auto& shifted = shifted_for(vkey);
      Eigen::MatrixXcd block(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
      for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < N; ++j)
          block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              phase * delta * duals[bw * N + j].dot(shifted[i]);
      P.insert(static_cast<int>(bw), z, std::move(block));
    }
  }
  P.finalize();
  return P;
}

}  // namespace

IdempotentResult gabor_idempotent(const GaborSystem& sys, const FrameAnalysis& fa,
                                  const TransversalSample& trans, double r_supp) {
  // collar transversal: same ambient set, bases enlarged by r_supp so the
  // residual convolution resolves every lookup at the C_k entries
  auto collar =
      std::make_shared<TransversalSample>(trans.with_cube(trans.cube_side + 2.0 * r_supp));

  IdempotentResult out;
  out.collar_bases = collar->base_keys.size();
  TwistedKernel Pc = idempotent_on(collar, sys, fa, r_supp);

  const ConvolveResult pp = twisted_convolve(Pc, Pc);
  const InvolutionResult inv = involution(Pc);
  const Cube inner{0.0, 0.0, trans.cube_side};
  double idem = 0.0, selfadj = 0.0;
  for (size_t b = 0; b < collar->size(); ++b) {
    if (!inner.contains(collar->base_points[b])) continue;
    for (const auto& [z, blk] : Pc.entries[b]) {
      const Eigen::MatrixXcd* q = pp.kernel.find(static_cast<int>(b), z);
      const Eigen::MatrixXcd* s = inv.kernel.find(static_cast<int>(b), z);
      idem = std::max(idem, q ? (*q - blk).cwiseAbs().maxCoeff() : blk.cwiseAbs().maxCoeff());
      selfadj =
          std::max(selfadj, s ? (*s - blk).cwiseAbs().maxCoeff() : blk.cwiseAbs().maxCoeff());
    }
    // entries of P*P absent from P also count toward the residual
    for (const auto& [z, blk] : pp.kernel.entries[b]) {
      if (!Pc.find(static_cast<int>(b), z)) idem = std::max(idem, blk.cwiseAbs().maxCoeff());
    }
  }
  out.idempotency_residual = idem;
  out.selfadjoint_residual = selfadj;

  // returned kernel: restriction to the requested C_k transversal
  auto final_trans = std::make_shared<TransversalSample>(trans);
  TwistedKernel P;
  P.trans = final_trans;
  P.rows = P.cols = static_cast<int>(sys.windows.size());
  P.r_supp = r_supp;
  for (size_t b = 0; b < final_trans->size(); ++b) {
    const int cb = collar->find_base(final_trans->base_keys[b]);
    if (cb < 0) continue;
    for (const auto& [z, blk] : Pc.entries[static_cast<size_t>(cb)])
      P.insert(static_cast<int>(b), z, blk);
  }
  P.finalize();
  out.P = std::move(P);
  return out;
}

double idempotent_trace(const TwistedKernel& P, TraceMode mode) {
  const cd t = trace_kernel(P);
  const double val = t.real();
  return mode == TraceMode::normalized ? val / static_cast<double>(P.rows) : val;
}

std::vector<FrameMeasureRow> frame_measure(const GaborSystem& sys, const FrameAnalysis& fa,
                                           const PointSet& ps, const std::vector<double>& ks) {
  std::vector<FrameMeasureRow> rows;
  const double delta = sys.grid.step();
  const size_t N = sys.windows.size();
  for (const double k : ks) {
    const Cube c{0.0, 0.0, k};
    FrameMeasureRow row;
    row.k = k;
    double acc = 0.0;
    for (const auto& z : ps.points) {
      if (!c.contains(z)) continue;
      ++row.count;
      for (size_t i = 0; i < N; ++i) {
        const Window shifted = tf_shift(sys.windows[i], z, false);
        const Eigen::VectorXcd dual = fa.solve(shifted.values);
        acc += (delta * dual.dot(shifted.values)).real();
      }
    }
    if (row.count == 0) fail(Errc::empty_point_set, "frame_measure: empty cube");
    row.without_1_over_N = acc / static_cast<double>(row.count);
    row.with_1_over_N = row.without_1_over_N / static_cast<double>(N);
    rows.push_back(row);
  }
  return rows;
}

std::string kernel_json(const TwistedKernel& k) {
  char buf[96];
  std::string out = "{\"N\":" + std::to_string(k.rows) + ",\"r_supp\":";
  std::snprintf(buf, sizeof(buf), "%.17g", k.r_supp);
  out += buf;
  out += ",\"bases\":[";
  for (size_t b = 0; b < k.trans->size(); ++b) {
    if (b) out += ",";
    const Vec2 p = k.trans->base_points[b];
    std::snprintf(buf, sizeof(buf), "[%.17g,%.17g]", p.x, p.y);
    out += buf;
  }
  out += "],\"entries\":[";
  bool first = true;
  for (size_t b = 0; b < k.entries.size(); ++b)
    for (const auto& [z, blk] : k.entries[b]) {
      if (!first) out += ",";
      first = false;
      const Vec2 zc = k.trans->coords(z);
      std::snprintf(buf, sizeof(buf), "{\"w_idx\":%zu,\"z\":[%.17g,%.17g],\"block\":[", b, zc.x,
                    zc.y);
      out += buf;
      for (Eigen::Index r = 0; r < blk.rows(); ++r)
        for (Eigen::Index c = 0; c < blk.cols(); ++c) {
          if (r != 0 || c != 0) out += ",";
          std::snprintf(buf, sizeof(buf), "[%.17g,%.17g]", blk(r, c).real(), blk(r, c).imag());
          out += buf;
        }
      out += "]}";
    }
  out += "]}";
  return out;
}

}  // namespace qg
