#pragma once

#include <functional>

#include "minimax/examples.hpp"
#include "minimax/linalg.hpp"

namespace minimax {

struct GridOptResult {
  double value = 0.0;
  Vec arg;
};

// Tensor grid over [lo, up] plus coordinate golden-section refinement around
// the best few nodes. With a ball constraint, nodes outside
// ||z - ball_center|| <= ball_radius are skipped and refinement stays inside.
// Returns -inf (maximize) / +inf (minimize) when the feasible grid is empty.
GridOptResult grid_opt(const std::function<double(const Vec&)>& fn,
                       const Vec& lo, const Vec& up, const GridSpec& grid,
                       bool maximize, const Vec* ball_center = nullptr,
                       double ball_radius = 0.0);

}  // namespace minimax
