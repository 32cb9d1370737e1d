#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "minimax/linalg.hpp"
#include "minimax/polyhedral.hpp"

namespace minimax {

enum class Smoothness { SmoothC2, SmoothC1, LocallyLipschitz };

std::string to_string(Smoothness s);

struct Point {
  Vec x;
  Vec y;
};

// Evaluation oracle for f(x,y) with optional analytic derivative oracles and
// polyhedral feasible sets. Oracles are pure; the struct is immutable after
// construction.
struct MinMaxProblem {
  std::size_t n = 0;
  std::size_t m = 0;
  std::function<double(const Vec&, const Vec&)> eval;
  std::function<Vec(const Vec&, const Vec&)> grad_x;  // optional
  std::function<Vec(const Vec&, const Vec&)> grad_y;  // optional
  std::function<Mat(const Vec&, const Vec&)> hess_xx;  // optional
  std::function<Mat(const Vec&, const Vec&)> hess_yy;  // optional
  std::shared_ptr<const PolyhedralSet> x_set;
  std::shared_ptr<const PolyhedralSet> y_set;
  Smoothness smoothness = Smoothness::LocallyLipschitz;
  std::string id;

  bool feasible(const Point& p, double tol = 1e-9) const {
    return p.x.size() == n && p.y.size() == m && x_set->contains(p.x, tol) &&
           y_set->contains(p.y, tol);
  }

  // Analytic gradient when present, central differences (h = 1e-6) otherwise.
  Vec gradient_x(const Vec& x, const Vec& y, bool* used_fd = nullptr) const;
  Vec gradient_y(const Vec& x, const Vec& y, bool* used_fd = nullptr) const;
  Mat hessian_xx(const Vec& x, const Vec& y, bool* used_fd = nullptr) const;
  Mat hessian_yy(const Vec& x, const Vec& y, bool* used_fd = nullptr) const;
};

Vec fd_gradient(const std::function<double(const Vec&)>& g, const Vec& z,
                double h = 1e-6);
Mat fd_hessian(const std::function<double(const Vec&)>& g, const Vec& z,
               double h = 1e-4);

}  // namespace minimax
