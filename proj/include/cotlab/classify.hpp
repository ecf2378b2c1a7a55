#pragma once

#include <optional>
#include <utility>

#include "cotlab/geometry.hpp"

namespace cotlab {

/// Relative singular-value cutoff for numerical ranks: sigma < tol *
/// sigma_max counts as zero so verdicts are scale invariant.
inline constexpr double kRankTol = 1e-9;

int numerical_rank(const MatrixXd& m, double tol = kRankTol);

struct PoissonVerdict {
  bool ok;
  double residual;  // max |[pi,pi]^{ijk}(p)|
};

/// Pointwise Poisson test via the Schouten self-bracket.
PoissonVerdict is_poisson_at(const BivectorField& pi, const VectorXd& p,
                             double tol);
PoissonVerdict is_poisson_at(const TrivectorField& schouten, const VectorXd& p,
                             double tol);

struct WeakVerdict {
  bool ok;
  // coordinate pairs (i,j) whose bracket [pi#(dx_i), pi#(dx_j)] escapes
  // Im(pi#) at the point; empty iff ok
  std::vector<std::pair<int, int>> witnesses;
  double max_escape;  // largest out-of-image component norm
};

/// Pointwise weak-foliation test. Testing coordinate 1-forms suffices:
/// for function coefficients f, g,
///   [pi#(f dx_i), pi#(g dx_j)] = f g [pi#dx_i, pi#dx_j]
///     + (pi#dx_i)(g) f pi#dx_j - (pi#dx_j)(f) g pi#dx_i
/// and the last two terms lie in Im(pi#) pointwise already.
WeakVerdict weakly_foliated_at(const BivectorField& pi, const VectorXd& p,
                               double tol);

/// Precomputed symbolic brackets for repeated pointwise weak tests.
class WeakFoliationTester {
 public:
  explicit WeakFoliationTester(const BivectorField& pi);
  WeakVerdict at(const VectorXd& p, double tol) const;

 private:
  const BivectorField& pi_;
  std::vector<VectorField> brackets_;  // pair_index order
};

struct JacImageVerdict {
  bool ok;
  double residual;  // l2 norm of wedge^3 pi#(omega) - [pi,pi] at the solution
  VectorXd omega;   // least-norm solving 3-form, triple_index coordinates
};

/// Solves wedge^3 pi#_p(omega) = [pi,pi]_p by least squares.
JacImageVerdict jacobiator_in_image_at(const BivectorField& pi,
                                       const VectorXd& p, double tol);

struct TwistedReport {
  bool ok;
  double max_identity_residual;   // max |1/2 [pi,pi] - wedge^3 pi#(phi)|
  double max_closedness_residual; // max |(d phi)_{ijkl}|
  int points_checked;
};

/// Verifies the twisted-structure identity 1/2 [pi,pi] = wedge^3 pi#(phi)
/// and the closedness d phi = 0 at each sample point.
TwistedReport twisted_check(const BivectorField& pi, const ThreeForm& phi,
                            const std::vector<VectorXd>& sample, double tol);

struct CHSolve {
  bool ok;
  MatrixXd c;       // least-squares solution of C pi# = (L_{X_H} pi)#
  double residual;  // Frobenius norm of the mismatch
};

/// Pointwise factorization (L_{X_H} pi)# = C pi#; a small residual
/// certifies Im (L_{X_H} pi)#_p inside Im pi#_p.
CHSolve solve_c_h_at(const BivectorField& pi, const Expr& h, const VectorXd& p,
                     double tol);

struct RankProfile {
  std::vector<VectorXd> points;
  std::vector<int> ranks;
  bool constant_rank;  // all sampled ranks equal
};

/// Rank of pi# on the regular grid with `per_axis` points per axis over
/// the chart bounds (or [-1,1]^n without bounds).
RankProfile rank_profile(const BivectorField& pi, int per_axis,
                         double tol = kRankTol);

struct PointClassification {
  VectorXd point;
  int rank;
  double poisson_residual;
  bool poisson;
  bool weakly_foliated;
  std::vector<std::pair<int, int>> witnesses;
};

struct ClassificationResult {
  std::vector<PointClassification> points;
  double tol;
  bool all_poisson;
  bool all_weakly_foliated;
  bool any_poisson;
};

/// Classifies pi at each point; point sweeps may run on worker threads,
/// results are merged in input order.
ClassificationResult classify_points(const BivectorField& pi,
                                     const std::vector<VectorXd>& points,
                                     double tol);

/// Grid of sample points: per-axis uniform nodes over `box`, the chart
/// bounds, or [-1,1]^n, in row-major order.
std::vector<VectorXd> grid_points(const Chart& chart, int per_axis,
                                  const std::optional<Bounds>& box = std::nullopt);

}  // namespace cotlab
