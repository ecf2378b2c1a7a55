#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cotlab/expr.hpp"
#include "cotlab/util.hpp"

namespace cotlab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Axis-aligned box, used both as chart validity region and as sampling
/// region.
struct Bounds {
  VectorXd lo, hi;
};

/// A coordinate chart: an open box (or all of R^n) with named coordinates.
class Chart {
 public:
  explicit Chart(std::vector<std::string> coords,
                 std::optional<Bounds> bounds = std::nullopt)
      : coords_(std::move(coords)), bounds_(std::move(bounds)) {
    if (coords_.empty()) throw std::invalid_argument("chart needs dim >= 1");
    if (bounds_) {
      if (bounds_->lo.size() != dim() || bounds_->hi.size() != dim())
        throw std::invalid_argument("bounds dimension mismatch");
      for (int i = 0; i < dim(); ++i)
        if (!(bounds_->lo[i] < bounds_->hi[i]))
          throw std::invalid_argument("bounds must have positive volume");
    }
  }

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::string& name(int i) const { return coords_.at(i); }
  const std::optional<Bounds>& bounds() const { return bounds_; }

  Expr parse(std::string_view src) const { return parse_expr(src, coords_); }
  std::string print(const Expr& e) const { return e.str(coords_); }

  bool contains(const VectorXd& p) const {
    if (!bounds_) return true;
    for (int i = 0; i < dim(); ++i)
      if (p[i] < bounds_->lo[i] || p[i] > bounds_->hi[i]) return false;
    return true;
  }

  /// Uniform sample in `box` if given, else in the chart bounds, else in
  /// [-1,1]^n.
  VectorXd random_point(Rng& rng,
                        const std::optional<Bounds>& box = std::nullopt) const {
    VectorXd p(dim());
    for (int i = 0; i < dim(); ++i) {
      double lo = -1.0, hi = 1.0;
      if (box) {
        lo = box->lo[i];
        hi = box->hi[i];
      } else if (bounds_) {
        lo = bounds_->lo[i];
        hi = bounds_->hi[i];
      }
      p[i] = rand_uniform(rng, lo, hi);
    }
    return p;
  }

  bool operator==(const Chart& o) const { return coords_ == o.coords_; }

 private:
  std::vector<std::string> coords_;
  std::optional<Bounds> bounds_;
};

}  // namespace cotlab
