#include "minimax/problem.hpp"

#include <stdexcept>

namespace minimax {

std::string to_string(Smoothness s) {
  switch (s) {
    case Smoothness::SmoothC2: return "smooth-C2";
    case Smoothness::SmoothC1: return "smooth-C1";
    case Smoothness::LocallyLipschitz: return "locally-Lipschitz";
  }
  return "unknown";
}

Vec fd_gradient(const std::function<double(const Vec&)>& g, const Vec& z,
                double h) {
  Vec grad(z.size());
  Vec p = z;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double zi = z[i];
    p[i] = zi + h;
    double fp = g(p);
    p[i] = zi - h;
    double fm = g(p);
    p[i] = zi;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

Mat fd_hessian(const std::function<double(const Vec&)>& g, const Vec& z,
               double h) {
  const std::size_t n = z.size();
  Mat hess(n, n);
  auto grad_at = [&](const Vec& q) { return fd_gradient(g, q, h); };
  Vec p = z;
  for (std::size_t j = 0; j < n; ++j) {
    double zj = z[j];
    p[j] = zj + h;
    Vec gp = grad_at(p);
    p[j] = zj - h;
    Vec gm = grad_at(p);
    p[j] = zj;
    for (std::size_t i = 0; i < n; ++i) hess(i, j) = (gp[i] - gm[i]) / (2.0 * h);
  }
  // symmetrize
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.5 * (hess(i, j) + hess(j, i));
      hess(i, j) = hess(j, i) = v;
    }
  return hess;
}

Vec MinMaxProblem::gradient_x(const Vec& x, const Vec& y, bool* used_fd) const {
  if (grad_x) {
    if (used_fd) *used_fd = false;
    return grad_x(x, y);
  }
  if (used_fd) *used_fd = true;
  return fd_gradient([&](const Vec& q) { return eval(q, y); }, x);
}

Vec MinMaxProblem::gradient_y(const Vec& x, const Vec& y, bool* used_fd) const {
  if (grad_y) {
    if (used_fd) *used_fd = false;
    return grad_y(x, y);
  }
  if (used_fd) *used_fd = true;
  return fd_gradient([&](const Vec& q) { return eval(x, q); }, y);
}

Mat MinMaxProblem::hessian_xx(const Vec& x, const Vec& y, bool* used_fd) const {
  if (hess_xx) {
    if (used_fd) *used_fd = false;
    return hess_xx(x, y);
  }
  if (used_fd) *used_fd = true;
  return fd_hessian([&](const Vec& q) { return eval(q, y); }, x);
}

Mat MinMaxProblem::hessian_yy(const Vec& x, const Vec& y, bool* used_fd) const {
  if (hess_yy) {
    if (used_fd) *used_fd = false;
    return hess_yy(x, y);
  }
  if (used_fd) *used_fd = true;
  return fd_hessian([&](const Vec& q) { return eval(x, q); }, y);
}

}  // namespace minimax
