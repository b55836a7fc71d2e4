#pragma once

#include <Eigen/Dense>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qg/tfa.hpp"

namespace qg {

// Orbit sample of the canonical transversal: representatives T_w = Lambda - w
// for w in Lambda cap C_k, uniform Birkhoff weights. `ambient` keeps every
// observed point of Lambda so displacement sums can reach past the base cube.
// In torus mode integer keys wrap modulo `periods` (full-torus lattices only).
class TransversalSample {
 public:
  std::array<double, 4> basis{1.0, 0.0, 0.0, 1.0};  // 2x2, int key -> coords
  std::vector<IntVec> base_keys;
  std::vector<Vec2> base_points;
  double cube_side{0.0};
  std::array<std::int64_t, 2> periods{0, 0};  // 0 = plane mode

  static TransversalSample from_pointset(const PointSet& ps, double cube_side);
  static TransversalSample torus_lattice(double a, double b, const GridSpec& grid,
                                         double cube_side);
  // Explicit base list (plane mode); ambient from the point set.
  static TransversalSample manual(const PointSet& ps, const std::vector<IntVec>& bases);

  size_t size() const { return base_keys.size(); }
  double weight() const { return 1.0 / static_cast<double>(size()); }
  IntVec canonical(IntVec k) const;
  Vec2 coords(const IntVec& k) const;  // basis * canonical(k)
  int find_base(const IntVec& k) const;           // -1 when out of sample
  bool ambient_contains(const IntVec& k) const;   // point of the observed Lambda
  const std::vector<IntVec>& ambient_keys() const { return ambient_keys_; }
  // Same ambient set, base cube replaced.
  TransversalSample with_cube(double new_side) const;

 private:
  std::unordered_map<IntVec, int, IntVecHash> base_index_;
  std::unordered_map<IntVec, char, IntVecHash> ambient_;
  std::vector<IntVec> ambient_keys_;
  void finalize();
};

// Finitely supported element of the truncated twisted groupoid algebra.
// Entry (w, z) holds f(T_w - z, T_w) as a rows x cols block; z is an exact
// integer displacement with |coords(z)|_inf <= r_supp / 2.
struct TwistedKernel {
  std::shared_ptr<const TransversalSample> trans;
  int rows{1};
  int cols{1};
  double r_supp{0.0};
  std::vector<std::vector<std::pair<IntVec, Eigen::MatrixXcd>>> entries;  // per base, key-sorted

  const Eigen::MatrixXcd* find(int base, const IntVec& disp) const;
  void insert(int base, const IntVec& disp, Eigen::MatrixXcd block);
  void finalize();  // sort entries, rebuild lookups
  double sup_norm() const;
  size_t entry_count() const;

 private:
  std::vector<std::unordered_map<IntVec, int, IntVecHash>> lookup_;
};

TwistedKernel identity_kernel(std::shared_ptr<const TransversalSample> trans, int N,
                              double r_supp);
// Seeded random blocks on displacements |z|_inf <= fill_side / 2 (declared
// support r_supp may be larger so products stay untruncated).
TwistedKernel random_kernel(std::shared_ptr<const TransversalSample> trans, int N,
                            double r_supp, std::uint64_t seed, double fill_side = 0.0);

struct ConvolveResult {
  TwistedKernel kernel;
  double loss_bound{0.0};   // rigorous bound on any entry's truncation error
  size_t dropped{0};        // out-of-sample base lookups
  size_t resolved{0};
};
ConvolveResult twisted_convolve(const TwistedKernel& f, const TwistedKernel& g);

struct InvolutionResult {
  TwistedKernel kernel;
  size_t dropped{0};  // entries lost to base truncation
};
InvolutionResult involution(const TwistedKernel& f);

cd trace_kernel(const TwistedKernel& f);

struct FunctionField {
  std::shared_ptr<const TransversalSample> trans;
  std::vector<Window> values;  // one per base point
};

FunctionField constant_field(std::shared_ptr<const TransversalSample> trans, const Window& g);
FunctionField nc_synthesis(const TwistedKernel& coeffs, const std::vector<Window>& windows);
TwistedKernel nc_analysis(const FunctionField& field, const GaborSystem& sys,
                          const FrameAnalysis& fa, double r_supp);

struct IdempotentResult {
  TwistedKernel P;
  double idempotency_residual{0.0};
  double selfadjoint_residual{0.0};
  size_t collar_bases{0};
};
// P_ij over the transversal via the covariance shortcut: one operator inverse
// serves every base. Residuals are measured on the C_k entries with the
// convolution sums completed on a collar transversal, so they report the
// truncation of the infinite identity rather than missing-base artifacts.
IdempotentResult gabor_idempotent(const GaborSystem& sys, const FrameAnalysis& fa,
                                  const TransversalSample& trans, double r_supp);

enum class TraceMode { unnormalized, normalized };
double idempotent_trace(const TwistedKernel& P, TraceMode mode);

struct FrameMeasureRow {
  double k{0.0};
  size_t count{0};
  double with_1_over_N{0.0};
  double without_1_over_N{0.0};
};
std::vector<FrameMeasureRow> frame_measure(const GaborSystem& sys, const FrameAnalysis& fa,
                                           const PointSet& ps, const std::vector<double>& ks);

std::string kernel_json(const TwistedKernel& k);

}  // namespace qg
