#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qg/pointset.hpp"
#include "qg/window.hpp"

namespace qg {

// Gabor system G(g_1..g_N, Lambda) with the time-frequency truncation already
// applied to the point list. On the periodic grid the frequency axis is a
// circle of circumference n/L; construction helpers below pick the points.
struct GaborSystem {
  GridSpec grid;
  std::vector<Window> windows;
  std::vector<Vec2> points;
  std::string provenance;

  size_t atom_count() const { return windows.size() * points.size(); }
};

// Box truncation: |x| <= side/2 and |omega| <= side/2.
GaborSystem make_system(const PointSet& ps, std::vector<Window> windows, Cube region);
// Cylinder truncation: |x| <= x_half, omega covering one full alias band
// [-n/2L, n/2L). Needed whenever S must be invertible on time-interior data.
GaborSystem make_system_cylinder(const PointSet& ps, std::vector<Window> windows, double x_half);
// Full discrete torus for a diagonal lattice diag(a,b): every x in a*Z mod L,
// every omega in b*Z mod n/L. Requires L/a and n/(L b) integral.
GaborSystem make_full_torus_lattice(double a, double b, const GridSpec& grid,
                                    std::vector<Window> windows);

// Columns are the atoms pi(z) g_i, window-major.
Eigen::MatrixXcd system_atoms(const GaborSystem& sys);

class FrameAnalysis {
 public:
  GridSpec grid;
  Eigen::MatrixXcd S;
  double A{std::numeric_limits<double>::quiet_NaN()};
  double B{std::numeric_limits<double>::quiet_NaN()};
  double interior_fraction{std::numeric_limits<double>::quiet_NaN()};
  double solve_cutoff_rel{1e-12};
  size_t atom_count{0};

  const Eigen::VectorXd& eigenvalues() const;  // of S, ascending
  // Spectral pseudo-solve with relative cutoff; optional residual
  // ||S x - rhs|| / ||rhs||.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs, double* residual = nullptr) const;

 private:
  mutable std::optional<Eigen::VectorXd> evals_;
  mutable std::optional<Eigen::MatrixXcd> evecs_;
  void ensure_decomposition() const;
};

FrameAnalysis frame_operator(const GaborSystem& sys);

// B = lambda_max(S); A = smallest eigenvalue of the compression of S to the
// central interior_fraction of the time grid. Results stored back into fa.
std::pair<double, double> frame_bounds(FrameAnalysis& fa, double interior_fraction);

struct DualResult {
  Window window;
  double residual{0.0};
};
DualResult dual_window(const GaborSystem& sys, const FrameAnalysis& fa, Vec2 z,
                       size_t window_index, double tol_solve = 1e-6);

struct ReconstructResult {
  Window reconstructed;
  double residual{0.0};
};
ReconstructResult reconstruct(const Window& f, const GaborSystem& sys, const FrameAnalysis& fa);

// Riemann sum of |V_phi f| over the TF grid (x on a fixed 1/16 stride of the
// sample grid, omega on the 1/L bin grid), phi the reference Gaussian.
double m1_norm_estimate(const Window& f);

struct AmalgamReport {
  double lhs{0.0};
  double rhs{0.0};
  int rel{0};
  double amalgam_norm{0.0};
  bool holds{false};
};
AmalgamReport wiener_amalgam_check(const Window& f, const std::vector<double>& section);

struct ModulusEstimate {
  double lower{0.0};
  double upper{0.0};
};
// omega_delta(g): pair sample (z, w) with |z - w| <= delta, w kept near the
// origin; displacement radii on a fixed absolute grid so estimates are
// monotone in delta. `samples` sets the angular resolution.
ModulusEstimate modulus_of_continuity(const Window& g, double delta, int samples = 8);

struct GocrReport {
  enum class Verdict { sufficient, inconclusive };
  Verdict verdict{Verdict::inconclusive};
  double delta_star{0.0};
  double hole_upper{std::numeric_limits<double>::infinity()};
  std::string note;
};
GocrReport gocr_check(const Window& g, const PointSet& ps, Cube interior, double grid_step = 0.02);

std::vector<Window> multiwindow_from_translates(const Window& g, const std::vector<Vec2>& translates);

// Operator-norm residual of S^T pi(w) - pi(w) S^{T-w} under the consistent
// displacement-set convention (S^{T-w} built on (T cap region) - w).
double covariance_residual(const GaborSystem& sys, Vec2 w);

struct SpreadReport {
  std::vector<double> As;
  std::vector<double> Bs;
  double spread_A{0.0};
  double spread_B{0.0};
};
SpreadReport transversal_bound_spread(const PointSet& ps, const std::vector<Window>& windows,
                                      const std::vector<Vec2>& shifts, double x_half,
                                      double interior_fraction);

std::vector<double> strong_continuity_probe(const PointSet& ps, const std::vector<Window>& windows,
                                            const Window& f, const std::vector<Vec2>& shifts,
                                            Cube region);

void dump_frame_operator(const FrameAnalysis& fa, const std::string& path);
Eigen::MatrixXcd load_frame_operator(const std::string& path, int n);

}  // namespace qg
