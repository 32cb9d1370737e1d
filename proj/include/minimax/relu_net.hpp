#pragma once

#include "minimax/linalg.hpp"

namespace minimax::relu_net {

// Two-layer ReLU network with a squared-norm head:
//   F(W,b) = || W2 (W1 xi + b1)_+ + b2 ||^2
// Parameters pack as (vec(W1), vec(W2), b1, b2), column-major.
struct Shape {
  std::size_t s = 2;   // input dim (xi)
  std::size_t s1 = 2;  // hidden width
  std::size_t s2 = 2;  // output dim
  std::size_t param_count() const { return s1 * s + s2 * s1 + s1 + s2; }
};

struct Params {
  Mat w1;  // s1 x s
  Mat w2;  // s2 x s1
  Vec b1;  // s1
  Vec b2;  // s2
};

Params unpack(const Shape& shape, const Vec& params);
Vec pack(const Shape& shape, const Params& p);

Vec inner_forward(const Shape& shape, const Vec& params, const Vec& xi);
double forward(const Shape& shape, const Vec& params, const Vec& xi);

// One-sided directional derivative of F at `params` along `dir`, from the
// per-row sign case split of the ReLU limit. Rows with |pre-activation| <=
// kink_eps take the branch selected by the sign of the direction's
// pre-activation.
double directional(const Shape& shape, const Vec& params, const Vec& dir,
                   const Vec& xi, double kink_eps = 1e-12);

}  // namespace minimax::relu_net
