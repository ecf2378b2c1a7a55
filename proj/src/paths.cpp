#include "cotlab/paths.hpp"

#include <json.hpp>
#include <sstream>

namespace cotlab {

CotangentPath::CotangentPath(MatrixXd x_, MatrixXd a_)
    : x(std::move(x_)), a(std::move(a_)) {
  if (x.rows() != a.rows() || x.cols() != a.cols())
    throw std::invalid_argument("path sample arrays must match in shape");
  if (x.rows() < 9)
    throw std::invalid_argument("paths need at least N = 8 segments");
}

TangentPath::TangentPath(MatrixXd x_, MatrixXd b_)
    : x(std::move(x_)), b(std::move(b_)) {
  if (x.rows() != b.rows() || x.cols() != b.cols())
    throw std::invalid_argument("path sample arrays must match in shape");
  if (x.rows() < 9)
    throw std::invalid_argument("paths need at least N = 8 segments");
}

PathVariation::PathVariation(MatrixXd g, MatrixXd d, VariationClass c)
    : gamma(std::move(g)), delta(std::move(d)), cls(c) {
  if (gamma.rows() != delta.rows() || gamma.cols() != delta.cols())
    throw std::invalid_argument("variation sample arrays must match in shape");
  const int N = static_cast<int>(gamma.rows()) - 1;
  auto row_zero = [](const MatrixXd& m, int r) {
    return m.row(r).cwiseAbs().maxCoeff() == 0.0;
  };
  if (cls != VariationClass::Free) {
    if (!row_zero(gamma, 0) || !row_zero(gamma, N))
      throw std::invalid_argument("fixed-endpoint variation must pin gamma0");
  }
  if (cls == VariationClass::InitiallyCotangent) {
    if (!row_zero(delta, 0))
      throw std::invalid_argument("initially-cotangent variation needs delta0(0)=0");
    // second-order one-sided derivative of gamma at t = 0 must vanish
    double h = 1.0 / N;
    VectorXd d0 =
        (-3.0 * gamma.row(0) + 4.0 * gamma.row(1) - gamma.row(2)) / (2 * h);
    if (d0.cwiseAbs().maxCoeff() > 1e-9)
      throw std::invalid_argument(
          "initially-cotangent variation needs dgamma/dt(0)=0");
  }
}

double PathVariation::norm() const {
  return std::max(gamma.cwiseAbs().maxCoeff(), delta.cwiseAbs().maxCoeff());
}

// ---------------------------------------------------------------------------
// derivative stencils

MatrixXd derivative_2nd(const MatrixXd& f, double h) {
  const int rows = static_cast<int>(f.rows());
  MatrixXd d(rows, f.cols());
  if (rows < 3) throw std::invalid_argument("need at least 3 samples");
  d.row(0) = (-3.0 * f.row(0) + 4.0 * f.row(1) - f.row(2)) / (2 * h);
  for (int i = 1; i < rows - 1; ++i)
    d.row(i) = (f.row(i + 1) - f.row(i - 1)) / (2 * h);
  d.row(rows - 1) =
      (3.0 * f.row(rows - 1) - 4.0 * f.row(rows - 2) + f.row(rows - 3)) /
      (2 * h);
  return d;
}

MatrixXd derivative_4th(const MatrixXd& f, double h) {
  const int rows = static_cast<int>(f.rows());
  if (rows < 5) throw std::invalid_argument("need at least 5 samples");
  MatrixXd d(rows, f.cols());
  d.row(0) = (-25.0 * f.row(0) + 48.0 * f.row(1) - 36.0 * f.row(2) +
              16.0 * f.row(3) - 3.0 * f.row(4)) /
             (12 * h);
  d.row(1) = (-3.0 * f.row(0) - 10.0 * f.row(1) + 18.0 * f.row(2) -
              6.0 * f.row(3) + f.row(4)) /
             (12 * h);
  for (int i = 2; i < rows - 2; ++i)
    d.row(i) = (f.row(i - 2) - 8.0 * f.row(i - 1) + 8.0 * f.row(i + 1) -
                f.row(i + 2)) /
               (12 * h);
  d.row(rows - 2) = (3.0 * f.row(rows - 1) + 10.0 * f.row(rows - 2) -
                     18.0 * f.row(rows - 3) + 6.0 * f.row(rows - 4) -
                     f.row(rows - 5)) /
                    (12 * h);
  d.row(rows - 1) = (25.0 * f.row(rows - 1) - 48.0 * f.row(rows - 2) +
                     36.0 * f.row(rows - 3) - 16.0 * f.row(rows - 4) +
                     3.0 * f.row(rows - 5)) /
                    (12 * h);
  return d;
}

// ---------------------------------------------------------------------------
// flows

MatrixXd flow(const VectorField& x, const VectorXd& p, double T, int steps) {
  if (steps < 8) throw std::invalid_argument("flow needs at least 8 steps");
  const int n = x.chart().dim();
  MatrixXd out(steps + 1, n);
  VectorXd q = p;
  out.row(0) = q;
  if (!x.chart().contains(q)) throw FlowEscape(0, "initial point out of chart");
  const double h = T / steps;
  for (int i = 0; i < steps; ++i) {
    VectorXd k1 = x.at(q);
    VectorXd k2 = x.at(q + 0.5 * h * k1);
    VectorXd k3 = x.at(q + 0.5 * h * k2);
    VectorXd k4 = x.at(q + h * k3);
    q += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!x.chart().contains(q))
      throw FlowEscape(i + 1, "integral curve left the chart at step " +
                                  std::to_string(i + 1));
    out.row(i + 1) = q;
  }
  return out;
}

LinearizedFlow flow_with_linearization(const VectorField& x, const VectorXd& p,
                                       double T, int steps) {
  if (steps < 8) throw std::invalid_argument("flow needs at least 8 steps");
  const int n = x.chart().dim();
  LinearizedFlow lf;
  lf.points.resize(steps + 1, n);
  lf.transport.reserve(steps + 1);
  VectorXd q = p;
  MatrixXd b = MatrixXd::Identity(n, n);
  lf.points.row(0) = q;
  lf.transport.push_back(b);
  const double h = T / steps;
  // augmented RK4 on (x, B) with Bdot = J(x) B
  for (int i = 0; i < steps; ++i) {
    VectorXd k1 = x.at(q);
    MatrixXd m1 = x.jacobian_at(q) * b;
    VectorXd q2 = q + 0.5 * h * k1;
    MatrixXd b2 = b + 0.5 * h * m1;
    VectorXd k2 = x.at(q2);
    MatrixXd m2 = x.jacobian_at(q2) * b2;
    VectorXd q3 = q + 0.5 * h * k2;
    MatrixXd b3 = b + 0.5 * h * m2;
    VectorXd k3 = x.at(q3);
    MatrixXd m3 = x.jacobian_at(q3) * b3;
    VectorXd q4 = q + h * k3;
    MatrixXd b4 = b + h * m3;
    VectorXd k4 = x.at(q4);
    MatrixXd m4 = x.jacobian_at(q4) * b4;
    q += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    b += (h / 6.0) * (m1 + 2 * m2 + 2 * m3 + m4);
    if (!x.chart().contains(q))
      throw FlowEscape(i + 1, "integral curve left the chart at step " +
                                  std::to_string(i + 1));
    lf.points.row(i + 1) = q;
    lf.transport.push_back(b);
  }
  return lf;
}

TangentPath tangent_transport(const VectorField& x, const VectorXd& p,
                              const VectorXd& b0, double T, int steps) {
  LinearizedFlow lf = flow_with_linearization(x, p, T, steps);
  MatrixXd b(steps + 1, x.chart().dim());
  for (int i = 0; i <= steps; ++i) b.row(i) = lf.transport[i] * b0;
  return TangentPath(std::move(lf.points), std::move(b));
}

// ---------------------------------------------------------------------------
// predicates

TangentPath cotangent_defect(const CotangentPath& alpha,
                             const BivectorField& pi) {
  const int N = alpha.segments();
  const int n = alpha.dim();
  MatrixXd dx = derivative_2nd(alpha.x, alpha.dt());
  MatrixXd c(N + 1, n);
  for (int i = 0; i <= N; ++i) {
    VectorXd sharp = pi.sharp(alpha.x.row(i), alpha.a.row(i));
    c.row(i) = sharp.transpose() - dx.row(i);
  }
  return TangentPath(alpha.x, std::move(c));
}

CotangentVerdict is_cotangent(const CotangentPath& alpha,
                              const BivectorField& pi, double tol) {
  TangentPath c = cotangent_defect(alpha, pi);
  double sup = c.b.cwiseAbs().maxCoeff();
  return {sup <= tol, sup};
}

namespace {

// nabla along the sampled curve: (nabla_{dx/dt} w)_i for a vector path w,
// with the second-order stencils of this module.
MatrixXd covariant_derivative_vector(const MatrixXd& x, const MatrixXd& w,
                                     const ConnectionSpec& conn, double h) {
  MatrixXd dw = derivative_2nd(w, h);
  if (conn.is_flat()) return dw;
  MatrixXd dx = derivative_2nd(x, h);
  const int n = static_cast<int>(x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    auto g = conn.christoffels_at(x.row(i));
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc += g[k](a, b) * dx(i, a) * w(i, b);
      dw(i, k) += acc;
    }
  }
  return dw;
}

}  // namespace

TangentCurveVerdict is_tangent_integral_curve(const TangentPath& b,
                                              const VectorField& x,
                                              const ConnectionSpec& conn,
                                              double tol) {
  const int N = b.segments();
  const int n = b.dim();
  const double h = b.dt();
  MatrixXd dx = derivative_2nd(b.x, h);
  double base_res = 0.0;
  for (int i = 0; i <= N; ++i) {
    VectorXd xv = x.at(b.x.row(i));
    base_res = std::max(base_res, (dx.row(i).transpose() - xv).cwiseAbs().maxCoeff());
  }
  // nabla_X b - nabla_b X - Tor(X, b), with nabla_X b taken along the curve
  MatrixXd cov = covariant_derivative_vector(b.x, b.b, conn, h);
  double tr_res = 0.0;
  for (int i = 0; i <= N; ++i) {
    VectorXd p = b.x.row(i);
    VectorXd bv = b.b.row(i);
    VectorXd rhs = nabla_vector_at(x, conn, p, bv);
    if (!conn.is_flat()) {
      auto g = conn.christoffels_at(p);
      VectorXd xv = x.at(p);
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c)
            acc += (g[k](a, c) - g[k](c, a)) * xv[a] * bv[c];
        rhs[k] += acc;
      }
    }
    tr_res = std::max(tr_res,
                      (cov.row(i).transpose() - rhs).cwiseAbs().maxCoeff());
  }
  return {base_res <= tol && tr_res <= tol, base_res, tr_res};
}

QuasiCotangentVerdict is_quasi_cotangent(const CotangentPath& alpha,
                                         const BivectorField& pi, const Expr& h,
                                         const ConnectionSpec& conn,
                                         double tol) {
  const int N = alpha.segments();
  const double dt = alpha.dt();
  VectorField xh = hamiltonian_vf(pi, h);
  MatrixXd dx = derivative_2nd(alpha.x, dt);
  double base_res = 0.0;
  for (int i = 0; i <= N; ++i) {
    VectorXd xv = xh.at(alpha.x.row(i));
    base_res =
        std::max(base_res, (dx.row(i).transpose() - xv).cwiseAbs().maxCoeff());
  }
  TangentPath c = cotangent_defect(alpha, pi);
  MatrixXd cov = covariant_derivative_vector(alpha.x, c.b, conn, dt);
  double ode_res = 0.0;
  for (int i = 0; i <= N; ++i) {
    VectorXd p = alpha.x.row(i);
    VectorXd rhs = k_tensor_at(xh, conn, p) * c.b.row(i).transpose();
    ode_res =
        std::max(ode_res, (cov.row(i).transpose() - rhs).cwiseAbs().maxCoeff());
  }
  return {base_res <= tol && ode_res <= tol, base_res, ode_res};
}

// ---------------------------------------------------------------------------
// variations

PathVariation random_variation(Rng& rng, int segments, int dim,
                               VariationClass cls) {
  MatrixXd gamma(segments + 1, dim), delta(segments + 1, dim);
  // few-term trigonometric profiles keep high derivatives tame
  std::vector<std::array<double, 4>> gc(dim), dc(dim);
  for (int c = 0; c < dim; ++c)
    for (int q = 0; q < 4; ++q) {
      gc[c][q] = rand_uniform(rng, -1, 1);
      dc[c][q] = rand_uniform(rng, -1, 1);
    }
  for (int i = 0; i <= segments; ++i) {
    double t = static_cast<double>(i) / segments;
    double wg = 1.0, wd = 1.0;
    switch (cls) {
      case VariationClass::Free:
        break;
      case VariationClass::FixedEndpoints:
        wg = t * (1 - t);
        break;
      case VariationClass::InitiallyCotangent:
        wg = t * t * (1 - t);  // pins gamma(0), gamma(1) and dgamma/dt(0)
        wd = t;                // pins delta(0)
        break;
    }
    for (int c = 0; c < dim; ++c) {
      double g = gc[c][0] + gc[c][1] * std::sin(2 * M_PI * t) +
                 gc[c][2] * std::cos(2 * M_PI * t) + gc[c][3] * t;
      double d = dc[c][0] + dc[c][1] * std::sin(2 * M_PI * t) +
                 dc[c][2] * std::cos(2 * M_PI * t) + dc[c][3] * t;
      gamma(i, c) = wg * g;
      delta(i, c) = wd * d;
    }
  }
  return PathVariation(std::move(gamma), std::move(delta), cls);
}

// ---------------------------------------------------------------------------
// serialization

std::string path_to_csv(const CotangentPath& path) {
  const int n = path.dim();
  std::ostringstream out;
  out << "t";
  for (int c = 0; c < n; ++c) out << ",x" << (c + 1);
  for (int c = 0; c < n; ++c) out << ",a" << (c + 1);
  out << "\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << ',' << buf;
  };
  for (int i = 0; i <= path.segments(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", path.t(i));
    out << buf;
    for (int c = 0; c < n; ++c) put(path.x(i, c));
    for (int c = 0; c < n; ++c) put(path.a(i, c));
    out << "\n";
  }
  return out.str();
}

CotangentPath path_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  int cols = 1;
  for (char c : line)
    if (c == ',') ++cols;
  if (cols < 3 || (cols - 1) % 2 != 0)
    throw std::invalid_argument("CSV needs columns t,x_1..x_n,a_1..a_n");
  const int n = (cols - 1) / 2;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(parse_double(cell));
    if (static_cast<int>(row.size()) != cols)
      throw std::invalid_argument("ragged CSV row");
    rows.push_back(std::move(row));
  }
  MatrixXd x(rows.size(), n), a(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < n; ++c) {
      x(i, c) = rows[i][1 + c];
      a(i, c) = rows[i][1 + n + c];
    }
  return CotangentPath(std::move(x), std::move(a));
}

std::string path_to_json(const CotangentPath& path) {
  nlohmann::json j;
  j["schema"] = "cotlab-path/1";
  j["n"] = path.dim();
  j["segments"] = path.segments();
  auto encode = [](const MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(hex_double(m(i, c)));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["x"] = encode(path.x);
  j["a"] = encode(path.a);
  return j.dump(2);
}

CotangentPath path_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (j.value("schema", "") != "cotlab-path/1")
    throw std::invalid_argument("not a cotlab-path/1 document");
  const int n = j.at("n").get<int>();
  const int N = j.at("segments").get<int>();
  auto decode = [&](const nlohmann::json& rows) {
    MatrixXd m(N + 1, n);
    for (int i = 0; i <= N; ++i)
      for (int c = 0; c < n; ++c)
        m(i, c) = parse_double(rows.at(i).at(c).get<std::string>());
    return m;
  };
  return CotangentPath(decode(j.at("x")), decode(j.at("a")));
}

}  // namespace cotlab
