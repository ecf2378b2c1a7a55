#pragma once

#include "cotlab/fields.hpp"

namespace cotlab {

/// X_H = pi^#(dH), components X^i = sum_j pi^{ij} d_j H.
VectorField hamiltonian_vf(const BivectorField& pi, const Expr& h);

/// Schouten self-bracket, coordinate formula
///   [pi,pi]^{ijk} = 2 sum_l (pi^{il} d_l pi^{jk} + pi^{jl} d_l pi^{ki}
///                            + pi^{kl} d_l pi^{ij}),
/// normalized so that <[pi,pi], dx_i^dx_j^dx_k> = 2 Jac(x_i,x_j,x_k) with
/// Jac the cyclic sum of {x_i,{x_j,x_k}}.
TrivectorField schouten_self(const BivectorField& pi);

/// Lie derivative, (L_X pi)^{ij} = X^l d_l pi^{ij} - pi^{lj} d_l X^i
///                                 - pi^{il} d_l X^j.
BivectorField lie_derivative(const BivectorField& pi, const VectorField& x);

/// The 1-1 tensor N(u) = nabla_u X + Tor(X, u) at p; for X = X_H this is
/// the K^H governing the stationary covector equation. With a flat
/// connection it reduces to the Jacobian of X.
MatrixXd k_tensor_at(const VectorField& x, const ConnectionSpec& conn,
                     const VectorXd& p);
MatrixXd k_tensor_at(const BivectorField& pi, const Expr& h,
                     const ConnectionSpec& conn, const VectorXd& p);

/// (wedge^3 pi^#)(phi) at p: component (i,j,k) = sum over a<b<c of
/// det(Pi[{i,j,k},{a,b,c}]) phi_{abc}, in triple_index order.
VectorXd wedge3_sharp_at(const BivectorField& pi, const ThreeForm& phi,
                         const VectorXd& p);

/// Matrix of the linear map omega -> wedge^3 pi^#(omega) at p, acting on
/// triple_index coordinates. Column (a,b,c), row (i,j,k).
MatrixXd wedge3_sharp_matrix_at(const BivectorField& pi, const VectorXd& p);

/// Covariant derivatives at a point:
///   (nabla_u Y)^i  = u^l d_l Y^i  + Gamma^i_{lk} u^l Y^k
///   (nabla_u pi)^{ij} = u^l d_l pi^{ij} + Gamma^i_{lk} u^l pi^{kj}
///                        + Gamma^j_{lk} u^l pi^{ik}
VectorXd nabla_vector_at(const VectorField& y, const ConnectionSpec& conn,
                         const VectorXd& p, const VectorXd& u);
MatrixXd nabla_bivector_at(const BivectorField& pi, const ConnectionSpec& conn,
                           const VectorXd& p, const VectorXd& u);

/// Gradient dH(p) as covector components.
VectorXd gradient_at(const Expr& h, const Chart& chart, const VectorXd& p);
std::vector<Expr> gradient_exprs(const Expr& h, const Chart& chart);

}  // namespace cotlab
