#pragma once

#include <optional>

#include "cotlab/geometry.hpp"

namespace cotlab {

/// Thrown when an integral curve leaves the chart bounds; carries the
/// index of the first offending step.
class FlowEscape : public std::runtime_error {
 public:
  FlowEscape(int exit_index, std::string msg)
      : std::runtime_error(std::move(msg)), exit_index_(exit_index) {}
  int exit_index() const { return exit_index_; }

 private:
  int exit_index_;
};

/// Path in the cotangent chart, sampled on the uniform grid t_i = i/N.
/// Rows of x and a are the base point and covector at t_i.
struct CotangentPath {
  MatrixXd x;  // (N+1) x n
  MatrixXd a;  // (N+1) x n

  CotangentPath(MatrixXd x_, MatrixXd a_);
  int segments() const { return static_cast<int>(x.rows()) - 1; }
  int dim() const { return static_cast<int>(x.cols()); }
  double dt() const { return 1.0 / segments(); }
  double t(int i) const { return static_cast<double>(i) / segments(); }
};

/// Path in the tangent chart (same grid; vector samples b_i).
struct TangentPath {
  MatrixXd x;  // (N+1) x n
  MatrixXd b;  // (N+1) x n

  TangentPath(MatrixXd x_, MatrixXd b_);
  int segments() const { return static_cast<int>(x.rows()) - 1; }
  int dim() const { return static_cast<int>(x.cols()); }
  double dt() const { return 1.0 / segments(); }
};

enum class VariationClass { Free, FixedEndpoints, InitiallyCotangent };

/// Chart-coordinate variation (gamma0, delta0) of a cotangent path.
/// FixedEndpoints pins gamma0 at both ends; InitiallyCotangent further
/// requires delta0(0) = 0 and a vanishing derivative of gamma0 at t = 0.
struct PathVariation {
  MatrixXd gamma;  // (N+1) x n
  MatrixXd delta;  // (N+1) x n
  VariationClass cls = VariationClass::Free;

  PathVariation(MatrixXd g, MatrixXd d, VariationClass c);
  int segments() const { return static_cast<int>(gamma.rows()) - 1; }
  double norm() const;  // sup over samples and components
};

// --- discrete derivative operators on uniform grids -----------------------

/// Row-wise first derivative, centered second order inside, one-sided
/// second order at the endpoints. This is the operator behind every path
/// defect and predicate.
MatrixXd derivative_2nd(const MatrixXd& f, double h);

/// Fourth-order flavor (five-point stencils); used inside quadratures so
/// Simpson keeps its full order.
MatrixXd derivative_4th(const MatrixXd& f, double h);

// --- flows -----------------------------------------------------------------

/// Classical RK4 integration of xdot = X(x) over [0, T]; returns the
/// (steps+1) x n sample matrix. Throws FlowEscape if a sample leaves the
/// chart bounds.
MatrixXd flow(const VectorField& x, const VectorXd& p, double T, int steps);

struct LinearizedFlow {
  MatrixXd points;                 // (steps+1) x n
  std::vector<MatrixXd> transport; // D phi_t at p, per sample
};

/// Integrates the flow together with its variational equation
/// Bdot = J_X(x) B, B(0) = I (no flow differencing).
LinearizedFlow flow_with_linearization(const VectorField& x, const VectorXd& p,
                                       double T, int steps);

/// Tangent path b(t) = T phi_t(b0) along the flow from p.
TangentPath tangent_transport(const VectorField& x, const VectorXd& p,
                              const VectorXd& b0, double T, int steps);

// --- path predicates ---------------------------------------------------------

/// c_i = pi#_{x_i}(a_i) - (dx/dt)_i, the cotangent defect.
TangentPath cotangent_defect(const CotangentPath& alpha,
                             const BivectorField& pi);

struct CotangentVerdict {
  bool ok;
  double sup_defect;
};
CotangentVerdict is_cotangent(const CotangentPath& alpha,
                              const BivectorField& pi, double tol);

struct TangentCurveVerdict {
  bool ok;
  double base_residual;       // sup |dx/dt - X(x)|
  double transport_residual;  // sup |nabla_X b - nabla_b X - Tor(X,b)|
};
TangentCurveVerdict is_tangent_integral_curve(const TangentPath& b,
                                              const VectorField& x,
                                              const ConnectionSpec& conn,
                                              double tol);

struct QuasiCotangentVerdict {
  bool ok;
  double base_residual;  // sup |dx/dt - X_H(x)|
  double ode_residual;   // sup |nabla_{dx/dt} c - K^H(c)|
};
QuasiCotangentVerdict is_quasi_cotangent(const CotangentPath& alpha,
                                         const BivectorField& pi, const Expr& h,
                                         const ConnectionSpec& conn, double tol);

// --- variations ---------------------------------------------------------------

/// Smooth random variation obeying the class constraints: trigonometric
/// profiles times polynomial windows vanishing to the required order.
PathVariation random_variation(Rng& rng, int segments, int dim,
                               VariationClass cls);

// --- serialization -------------------------------------------------------------

/// CSV with header t,x_1..x_n,a_1..a_n, full decimal precision.
std::string path_to_csv(const CotangentPath& path);
CotangentPath path_from_csv(const std::string& csv);

/// JSON with hex-float sample encoding; bit-exact round trip.
std::string path_to_json(const CotangentPath& path);
CotangentPath path_from_json(const std::string& json_text);

}  // namespace cotlab
