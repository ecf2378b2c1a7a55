#include "cotlab/fields.hpp"

#include <array>
#include <cmath>

namespace cotlab {

int triple_index(int i, int j, int k, int n) {
  // rank of (i,j,k), i<j<k, in lexicographic order
  int idx = 0;
  for (int a = 0; a < i; ++a) idx += (n - 1 - a) * (n - 2 - a) / 2;
  idx += (j - i - 1) * (2 * n - i - j - 2) / 2;
  idx += k - j - 1;
  return idx;
}

std::vector<std::array<int, 3>> triples(int n) {
  std::vector<std::array<int, 3>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) out.push_back({i, j, k});
  return out;
}

std::vector<std::array<int, 4>> quadruples(int n) {
  std::vector<std::array<int, 4>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) out.push_back({i, j, k, l});
  return out;
}

// --------------------------------------------------------------------------
// VectorField

VectorField::VectorField(Chart chart, std::vector<Expr> components)
    : chart_(std::move(chart)), comps_(std::move(components)) {
  const int n = chart_.dim();
  if (static_cast<int>(comps_.size()) != n)
    throw std::invalid_argument("vector field needs dim components");
  jac_.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) jac_.push_back(comps_[i].diff(j));
}

VectorField VectorField::zero(const Chart& chart) {
  return VectorField(chart, std::vector<Expr>(chart.dim()));
}

VectorXd VectorField::at(const VectorXd& p) const {
  const int n = chart_.dim();
  VectorXd v(n);
  std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
  for (int i = 0; i < n; ++i) v[i] = comps_[i].eval(pt);
  return v;
}

MatrixXd VectorField::jacobian_at(const VectorXd& p) const {
  const int n = chart_.dim();
  MatrixXd J(n, n);
  std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      J(i, j) = jac_[static_cast<std::size_t>(i) * n + j].eval(pt);
  return J;
}

const Expr& VectorField::jacobian_entry(int i, int j) const {
  return jac_.at(static_cast<std::size_t>(i) * chart_.dim() + j);
}

VectorField VectorField::bracket(const VectorField& other) const {
  const int n = chart_.dim();
  std::vector<Expr> out(n);
  for (int i = 0; i < n; ++i) {
    Expr acc;
    for (int l = 0; l < n; ++l)
      acc = acc + comps_[l] * other.jacobian_entry(i, l) -
            other.comps_[l] * jacobian_entry(i, l);
    out[i] = acc;
  }
  return VectorField(chart_, std::move(out));
}

// --------------------------------------------------------------------------
// BivectorField

BivectorField::BivectorField(Chart chart, std::vector<Expr> upper)
    : chart_(std::move(chart)), upper_(std::move(upper)) {
  if (static_cast<int>(upper_.size()) != pair_count(chart_.dim()))
    throw std::invalid_argument("bivector needs n(n-1)/2 components");
}

BivectorField BivectorField::zero(const Chart& chart) {
  return BivectorField(chart, std::vector<Expr>(pair_count(chart.dim())));
}

Expr BivectorField::component(int i, int j) const {
  if (i == j) return Expr();
  if (i < j) return upper_[pair_index(i, j, chart_.dim())];
  return -upper_[pair_index(j, i, chart_.dim())];
}

MatrixXd BivectorField::matrix_at(const VectorXd& p) const {
  const int n = chart_.dim();
  MatrixXd m = MatrixXd::Zero(n, n);
  std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = upper_[pair_index(i, j, n)].eval(pt);
      m(i, j) = v;
      m(j, i) = -v;
    }
  return m;
}

VectorXd BivectorField::sharp(const VectorXd& p, const VectorXd& xi) const {
  return matrix_at(p) * xi;
}

VectorField BivectorField::sharp_coordinate_field(int j) const {
  const int n = chart_.dim();
  std::vector<Expr> comps(n);
  for (int k = 0; k < n; ++k) comps[k] = component(k, j);
  return VectorField(chart_, std::move(comps));
}

BivectorField BivectorField::scaled(const Expr& f) const {
  std::vector<Expr> out;
  out.reserve(upper_.size());
  for (const Expr& e : upper_) out.push_back(f * e);
  return BivectorField(chart_, std::move(out));
}

// --------------------------------------------------------------------------
// TrivectorField / ThreeForm

namespace {

// Sign of the permutation sorting (i,j,k); 0 for repeated indices.
int sort3(int& i, int& j, int& k) {
  int sign = 1;
  if (i > j) {
    std::swap(i, j);
    sign = -sign;
  }
  if (j > k) {
    std::swap(j, k);
    sign = -sign;
  }
  if (i > j) {
    std::swap(i, j);
    sign = -sign;
  }
  if (i == j || j == k) return 0;
  return sign;
}

}  // namespace

TrivectorField::TrivectorField(Chart chart, std::vector<Expr> comps)
    : chart_(std::move(chart)), comps_(std::move(comps)) {
  if (static_cast<int>(comps_.size()) != triple_count(chart_.dim()))
    throw std::invalid_argument("trivector needs C(n,3) components");
}

Expr TrivectorField::component(int i, int j, int k) const {
  int s = sort3(i, j, k);
  if (s == 0) return Expr();
  Expr e = comps_[triple_index(i, j, k, chart_.dim())];
  return s > 0 ? e : -e;
}

VectorXd TrivectorField::at(const VectorXd& p) const {
  VectorXd out(comps_.size());
  std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
  for (std::size_t t = 0; t < comps_.size(); ++t) out[t] = comps_[t].eval(pt);
  return out;
}

double TrivectorField::max_abs_at(const VectorXd& p) const {
  if (comps_.empty()) return 0.0;
  return at(p).cwiseAbs().maxCoeff();
}

ThreeForm::ThreeForm(Chart chart, std::vector<Expr> comps)
    : chart_(std::move(chart)), comps_(std::move(comps)) {
  const int n = chart_.dim();
  if (static_cast<int>(comps_.size()) != triple_count(n))
    throw std::invalid_argument("3-form needs C(n,3) components");
  // assemble d phi once: (d phi)_{ijkl} = d_i p_{jkl} - d_j p_{ikl}
  //                                      + d_k p_{ijl} - d_l p_{ijk}
  auto comp = [&](int i, int j, int k) -> Expr {
    int s = sort3(i, j, k);
    if (s == 0) return Expr();
    Expr e = comps_[triple_index(i, j, k, n)];
    return s > 0 ? e : -e;
  };
  for (auto [i, j, k, l] : quadruples(n)) {
    Expr d = comp(j, k, l).diff(i) - comp(i, k, l).diff(j) +
             comp(i, j, l).diff(k) - comp(i, j, k).diff(l);
    dcomps_.push_back(d);
  }
}

Expr ThreeForm::component(int i, int j, int k) const {
  int s = sort3(i, j, k);
  if (s == 0) return Expr();
  Expr e = comps_[triple_index(i, j, k, chart_.dim())];
  return s > 0 ? e : -e;
}

VectorXd ThreeForm::at(const VectorXd& p) const {
  VectorXd out(comps_.size());
  std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
  for (std::size_t t = 0; t < comps_.size(); ++t) out[t] = comps_[t].eval(pt);
  return out;
}

double ThreeForm::exterior_derivative_max_at(const VectorXd& p) const {
  std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
  double m = 0.0;
  for (const Expr& e : dcomps_) m = std::max(m, std::abs(e.eval(pt)));
  return m;
}

// --------------------------------------------------------------------------
// ConnectionSpec

ConnectionSpec::ConnectionSpec(Chart chart, std::vector<Expr> christoffels,
                               bool torsion_free_claimed)
    : chart_(std::move(chart)),
      n_(static_cast<std::size_t>(chart_.dim())),
      gamma_(std::move(christoffels)),
      torsion_free_claimed_(torsion_free_claimed) {
  if (gamma_.size() != n_ * n_ * n_)
    throw std::invalid_argument("connection needs n^3 Christoffel symbols");
  flat_ = true;
  for (const Expr& g : gamma_)
    if (!g.is_zero()) {
      flat_ = false;
      break;
    }
}

ConnectionSpec ConnectionSpec::flat(const Chart& chart) {
  std::size_t n = static_cast<std::size_t>(chart.dim());
  return ConnectionSpec(chart, std::vector<Expr>(n * n * n), true);
}

std::vector<MatrixXd> ConnectionSpec::christoffels_at(const VectorXd& p) const {
  const int n = chart_.dim();
  std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
  std::vector<MatrixXd> out(n, MatrixXd::Zero(n, n));
  if (flat_) return out;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[k](i, j) = christoffel(k, i, j).eval(pt);
  return out;
}

}  // namespace cotlab
