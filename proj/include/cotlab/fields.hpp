#pragma once

#include <array>
#include <vector>

#include "cotlab/chart.hpp"

namespace cotlab {

// Flat index of the pair (i,j), i<j, in lexicographic order.
inline int pair_index(int i, int j, int n) {
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}
inline int pair_count(int n) { return n * (n - 1) / 2; }

// Flat index of the triple (i,j,k), i<j<k, in lexicographic order.
int triple_index(int i, int j, int k, int n);
inline int triple_count(int n) { return n * (n - 1) * (n - 2) / 6; }
std::vector<std::array<int, 3>> triples(int n);
std::vector<std::array<int, 4>> quadruples(int n);

/// Vector field with symbolic components. The Jacobian d_j X^i is
/// differentiated once at construction so pointwise evaluation inside ODE
/// loops stays cheap and the object stays immutable.
class VectorField {
 public:
  VectorField(Chart chart, std::vector<Expr> components);
  static VectorField zero(const Chart& chart);

  const Chart& chart() const { return chart_; }
  const Expr& component(int i) const { return comps_.at(i); }
  const std::vector<Expr>& components() const { return comps_; }

  VectorXd at(const VectorXd& p) const;
  /// J(i,j) = d_j X^i.
  MatrixXd jacobian_at(const VectorXd& p) const;
  const Expr& jacobian_entry(int i, int j) const;

  /// Lie bracket [this, other], symbolic.
  VectorField bracket(const VectorField& other) const;

 private:
  Chart chart_;
  std::vector<Expr> comps_;
  std::vector<Expr> jac_;  // row-major n*n
};

/// Antisymmetric bivector field; only components pi^{ij} with i<j are
/// stored, the rest follow by sign.
class BivectorField {
 public:
  BivectorField(Chart chart, std::vector<Expr> upper);
  static BivectorField zero(const Chart& chart);

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  Expr component(int i, int j) const;
  const std::vector<Expr>& upper() const { return upper_; }

  /// Matrix Pi(p) with entries pi^{ij}(p).
  MatrixXd matrix_at(const VectorXd& p) const;

  /// pi^#(xi) at p under the fixed convention v^i = sum_j pi^{ij} xi_j.
  /// With this orientation pi^#(dH) reproduces the usual Hamiltonian
  /// vector field of the examples in this package.
  VectorXd sharp(const VectorXd& p, const VectorXd& xi) const;

  /// The vector field pi^#(dx_j), component k = pi^{kj}.
  VectorField sharp_coordinate_field(int j) const;

  /// f * pi for a scalar expression f.
  BivectorField scaled(const Expr& f) const;

 private:
  Chart chart_;
  std::vector<Expr> upper_;  // pair_index order
};

/// Fully antisymmetric 3-vector field; components stored for i<j<k.
class TrivectorField {
 public:
  TrivectorField(Chart chart, std::vector<Expr> comps);
  const Chart& chart() const { return chart_; }
  Expr component(int i, int j, int k) const;  // any index order, signed
  const std::vector<Expr>& comps() const { return comps_; }
  /// Components at p in triple_index order.
  VectorXd at(const VectorXd& p) const;
  double max_abs_at(const VectorXd& p) const;

 private:
  Chart chart_;
  std::vector<Expr> comps_;
};

/// Differential 3-form, same storage scheme as TrivectorField.
class ThreeForm {
 public:
  ThreeForm(Chart chart, std::vector<Expr> comps);
  const Chart& chart() const { return chart_; }
  Expr component(int i, int j, int k) const;
  const std::vector<Expr>& comps() const { return comps_; }
  VectorXd at(const VectorXd& p) const;

  /// Max |(d phi)_{ijkl}| over i<j<k<l at p, the closedness residual.
  double exterior_derivative_max_at(const VectorXd& p) const;

 private:
  Chart chart_;
  std::vector<Expr> comps_;
  std::vector<Expr> dcomps_;  // exterior derivative, quadruple order
};

/// Connection given by Christoffel symbols in the convention
/// nabla_{d_i} d_j = Gamma^k_{ij} d_k; the torsion T^k_{ij} =
/// Gamma^k_{ij} - Gamma^k_{ji} is always computed, never assumed zero.
class ConnectionSpec {
 public:
  ConnectionSpec(Chart chart, std::vector<Expr> christoffels,
                 bool torsion_free_claimed = false);
  static ConnectionSpec flat(const Chart& chart);

  const Chart& chart() const { return chart_; }
  bool is_flat() const { return flat_; }
  bool torsion_free_claimed() const { return torsion_free_claimed_; }

  const Expr& christoffel(int k, int i, int j) const {
    return gamma_[(static_cast<std::size_t>(k) * n_ + i) * n_ + j];
  }
  Expr torsion(int k, int i, int j) const {
    return christoffel(k, i, j) - christoffel(k, j, i);
  }

  /// G[k](i,j) = Gamma^k_{ij}(p).
  std::vector<MatrixXd> christoffels_at(const VectorXd& p) const;

 private:
  Chart chart_;
  std::size_t n_;
  std::vector<Expr> gamma_;  // [k][i][j]
  bool torsion_free_claimed_;
  bool flat_;
};

/// Pointwise 1-1 tensors are plain matrices; the adjoint acting on
/// covector components is the transpose.
using OneOneTensor = MatrixXd;

}  // namespace cotlab
