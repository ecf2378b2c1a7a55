#include "cotlab/geometry.hpp"

namespace cotlab {

VectorField hamiltonian_vf(const BivectorField& pi, const Expr& h) {
  const Chart& chart = pi.chart();
  const int n = chart.dim();
  std::vector<Expr> dh(n);
  for (int j = 0; j < n; ++j) dh[j] = h.diff(j);
  std::vector<Expr> comps(n);
  for (int i = 0; i < n; ++i) {
    Expr acc;
    for (int j = 0; j < n; ++j) acc = acc + pi.component(i, j) * dh[j];
    comps[i] = acc;
  }
  return VectorField(chart, std::move(comps));
}

TrivectorField schouten_self(const BivectorField& pi) {
  const Chart& chart = pi.chart();
  const int n = chart.dim();
  // cache partials d_l pi^{ij}
  std::vector<Expr> dpi(static_cast<std::size_t>(pair_count(n)) * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = 0; l < n; ++l)
        dpi[static_cast<std::size_t>(pair_index(i, j, n)) * n + l] =
            pi.component(i, j).diff(l);
  auto dcomp = [&](int i, int j, int l) -> Expr {
    if (i == j) return Expr();
    if (i < j) return dpi[static_cast<std::size_t>(pair_index(i, j, n)) * n + l];
    return -dpi[static_cast<std::size_t>(pair_index(j, i, n)) * n + l];
  };
  std::vector<Expr> out;
  out.reserve(triple_count(n));
  for (auto [i, j, k] : triples(n)) {
    Expr acc;
    for (int l = 0; l < n; ++l)
      acc = acc + pi.component(i, l) * dcomp(j, k, l) +
            pi.component(j, l) * dcomp(k, i, l) +
            pi.component(k, l) * dcomp(i, j, l);
    out.push_back(Expr::constant(2.0) * acc);
  }
  return TrivectorField(chart, std::move(out));
}

BivectorField lie_derivative(const BivectorField& pi, const VectorField& x) {
  const Chart& chart = pi.chart();
  const int n = chart.dim();
  std::vector<Expr> out;
  out.reserve(pair_count(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Expr acc;
      for (int l = 0; l < n; ++l)
        acc = acc + x.component(l) * pi.component(i, j).diff(l) -
              pi.component(l, j) * x.jacobian_entry(i, l) -
              pi.component(i, l) * x.jacobian_entry(j, l);
      out.push_back(acc);
    }
  return BivectorField(chart, std::move(out));
}

MatrixXd k_tensor_at(const VectorField& x, const ConnectionSpec& conn,
                     const VectorXd& p) {
  const int n = x.chart().dim();
  MatrixXd k = x.jacobian_at(p);
  if (conn.is_flat()) return k;
  auto g = conn.christoffels_at(p);
  VectorXd xv = x.at(p);
  // (K)^i_j += Gamma^i_{jl} X^l + T^i_{lj} X^l with T^i_{lj} = G^i_{lj} -
  // G^i_{jl}; the sum collapses to Gamma^i_{lj} X^l.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int l = 0; l < n; ++l) acc += g[i](l, j) * xv[l];
      k(i, j) += acc;
    }
  return k;
}

MatrixXd k_tensor_at(const BivectorField& pi, const Expr& h,
                     const ConnectionSpec& conn, const VectorXd& p) {
  return k_tensor_at(hamiltonian_vf(pi, h), conn, p);
}

VectorXd wedge3_sharp_at(const BivectorField& pi, const ThreeForm& phi,
                         const VectorXd& p) {
  return wedge3_sharp_matrix_at(pi, p) * phi.at(p);
}

MatrixXd wedge3_sharp_matrix_at(const BivectorField& pi, const VectorXd& p) {
  const int n = pi.dim();
  const auto tri = triples(n);
  MatrixXd m = pi.matrix_at(p);
  MatrixXd a(tri.size(), tri.size());
  for (std::size_t r = 0; r < tri.size(); ++r)
    for (std::size_t c = 0; c < tri.size(); ++c) {
      auto [i, j, k] = tri[r];
      auto [x, y, z] = tri[c];
      Eigen::Matrix3d minor;
      minor << m(i, x), m(i, y), m(i, z), m(j, x), m(j, y), m(j, z), m(k, x),
          m(k, y), m(k, z);
      a(r, c) = minor.determinant();
    }
  return a;
}

VectorXd nabla_vector_at(const VectorField& y, const ConnectionSpec& conn,
                         const VectorXd& p, const VectorXd& u) {
  const int n = y.chart().dim();
  VectorXd out = y.jacobian_at(p) * u;
  if (!conn.is_flat()) {
    auto g = conn.christoffels_at(p);
    VectorXd yv = y.at(p);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) acc += g[i](l, k) * u[l] * yv[k];
      out[i] += acc;
    }
  }
  return out;
}

MatrixXd nabla_bivector_at(const BivectorField& pi, const ConnectionSpec& conn,
                           const VectorXd& p, const VectorXd& u) {
  const int n = pi.dim();
  std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
  MatrixXd out = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (int l = 0; l < n; ++l)
        acc += pi.component(i, j).diff(l).eval(pt) * u[l];
      out(i, j) = acc;
      out(j, i) = -acc;
    }
  if (!conn.is_flat()) {
    auto g = conn.christoffels_at(p);
    MatrixXd m = pi.matrix_at(p);
    MatrixXd corr = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
          for (int k = 0; k < n; ++k)
            acc += g[i](l, k) * u[l] * m(k, j) + g[j](l, k) * u[l] * m(i, k);
        corr(i, j) = acc;
      }
    out += corr;
  }
  return out;
}

VectorXd gradient_at(const Expr& h, const Chart& chart, const VectorXd& p) {
  const int n = chart.dim();
  VectorXd g(n);
  std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
  for (int j = 0; j < n; ++j) g[j] = h.diff(j).eval(pt);
  return g;
}

std::vector<Expr> gradient_exprs(const Expr& h, const Chart& chart) {
  std::vector<Expr> g(chart.dim());
  for (int j = 0; j < chart.dim(); ++j) g[j] = h.diff(j);
  return g;
}

}  // namespace cotlab
