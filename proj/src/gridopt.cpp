#include "minimax/gridopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minimax {

namespace {

double golden_sweep(const std::function<double(double)>& g, double a, double b,
                    double width) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = g(c), fd = g(d);
  while (b - a > width) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = g(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = g(c);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

GridOptResult grid_opt(const std::function<double(const Vec&)>& fn,
                       const Vec& lo_in, const Vec& up_in, const GridSpec& grid,
                       bool maximize, const Vec* ball_center,
                       double ball_radius) {
  const std::size_t dim = lo_in.size();
  const double worst = maximize ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();
  auto eval = [&](const Vec& z) { return maximize ? fn(z) : -fn(z); };
  auto inside = [&](const Vec& z) {
    if (!ball_center) return true;
    Vec d = z - *ball_center;
    return norm(d) <= ball_radius + 1e-15;
  };

  Vec lo = lo_in, up = up_in;
  if (ball_center) {
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = std::max(lo[i], (*ball_center)[i] - ball_radius);
      up[i] = std::min(up[i], (*ball_center)[i] + ball_radius);
      if (lo[i] > up[i]) return {worst, {}};
    }
  }

  const int nodes = std::max(2, grid.resolve(dim));
  std::vector<double> spacing(dim);
  for (std::size_t i = 0; i < dim; ++i)
    spacing[i] = (up[i] - lo[i]) / (nodes - 1);

  std::vector<std::pair<double, Vec>> best;  // stored as "maximize eval"
  Vec z(dim);
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= static_cast<std::size_t>(nodes);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = 0; i < dim; ++i) {
      z[i] = lo[i] + spacing[i] *
                         static_cast<double>(rem % static_cast<std::size_t>(nodes));
      rem /= static_cast<std::size_t>(nodes);
    }
    if (!inside(z)) continue;
    double v = eval(z);
    if (best.size() < 3) {
      best.emplace_back(v, z);
    } else {
      std::size_t w = 0;
      for (std::size_t i = 1; i < best.size(); ++i)
        if (best[i].first < best[w].first) w = i;
      if (v > best[w].first) best[w] = {v, z};
    }
  }
  if (best.empty()) return {worst, {}};

  GridOptResult out;
  double top = -std::numeric_limits<double>::infinity();
  for (auto& [v0, z0] : best) {
    double local = v0;
    Vec zc = z0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < dim; ++i) {
        double a = std::max(lo[i], zc[i] - spacing[i]);
        double b = std::min(up[i], zc[i] + spacing[i]);
        if (b <= a) continue;
        double best_coord = zc[i];
        double best_val = local;
        golden_sweep(
            [&](double c) {
              Vec zt = zc;
              zt[i] = c;
              if (!inside(zt))
                return -std::numeric_limits<double>::infinity();
              double v = eval(zt);
              if (v > best_val) {
                best_val = v;
                best_coord = c;
              }
              return v;
            },
            a, b, grid.refine_width);
        zc[i] = best_coord;
        local = best_val;
      }
    }
    if (local > top) {
      top = local;
      out.arg = zc;
    }
  }
  out.value = maximize ? top : -top;
  return out;
}

}  // namespace minimax
