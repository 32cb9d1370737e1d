#include "minimax/relu_net.hpp"

#include <stdexcept>

namespace minimax::relu_net {

Params unpack(const Shape& shape, const Vec& params) {
  if (params.size() != shape.param_count())
    throw std::invalid_argument("relu_net::unpack: bad parameter length");
  Params p;
  p.w1 = Mat(shape.s1, shape.s);
  p.w2 = Mat(shape.s2, shape.s1);
  p.b1.resize(shape.s1);
  p.b2.resize(shape.s2);
  std::size_t k = 0;
  for (std::size_t j = 0; j < shape.s; ++j)
    for (std::size_t i = 0; i < shape.s1; ++i) p.w1(i, j) = params[k++];
  for (std::size_t j = 0; j < shape.s1; ++j)
    for (std::size_t i = 0; i < shape.s2; ++i) p.w2(i, j) = params[k++];
  for (std::size_t i = 0; i < shape.s1; ++i) p.b1[i] = params[k++];
  for (std::size_t i = 0; i < shape.s2; ++i) p.b2[i] = params[k++];
  return p;
}

Vec pack(const Shape& shape, const Params& p) {
  Vec out(shape.param_count());
  std::size_t k = 0;
  for (std::size_t j = 0; j < shape.s; ++j)
    for (std::size_t i = 0; i < shape.s1; ++i) out[k++] = p.w1(i, j);
  for (std::size_t j = 0; j < shape.s1; ++j)
    for (std::size_t i = 0; i < shape.s2; ++i) out[k++] = p.w2(i, j);
  for (std::size_t i = 0; i < shape.s1; ++i) out[k++] = p.b1[i];
  for (std::size_t i = 0; i < shape.s2; ++i) out[k++] = p.b2[i];
  return out;
}

Vec inner_forward(const Shape& shape, const Vec& params, const Vec& xi) {
  Params p = unpack(shape, params);
  Vec h = p.w1.mul(xi);
  for (std::size_t i = 0; i < shape.s1; ++i) h[i] = std::max(0.0, h[i] + p.b1[i]);
  Vec z = p.w2.mul(h);
  for (std::size_t i = 0; i < shape.s2; ++i) z[i] += p.b2[i];
  return z;
}

double forward(const Shape& shape, const Vec& params, const Vec& xi) {
  Vec z = inner_forward(shape, params, xi);
  return dot(z, z);
}

double directional(const Shape& shape, const Vec& params, const Vec& dir,
                   const Vec& xi, double kink_eps) {
  Params p = unpack(shape, params);
  Params d = unpack(shape, dir);

  Vec pre = p.w1.mul(xi);
  axpy(1.0, p.b1, pre);
  Vec pre_dir = d.w1.mul(xi);
  axpy(1.0, d.b1, pre_dir);

  Vec h(shape.s1), h_dot(shape.s1);
  for (std::size_t i = 0; i < shape.s1; ++i) {
    h[i] = std::max(0.0, pre[i]);
    if (pre[i] > kink_eps)
      h_dot[i] = pre_dir[i];
    else if (pre[i] < -kink_eps)
      h_dot[i] = 0.0;
    else
      h_dot[i] = pre_dir[i] > 0.0 ? pre_dir[i] : 0.0;  // kink case split
  }

  // Upsilon = W2 h_dot + W2_dir h + b2_dir
  Vec upsilon = p.w2.mul(h_dot);
  axpy(1.0, d.w2.mul(h), upsilon);
  axpy(1.0, d.b2, upsilon);

  Vec z = p.w2.mul(h);
  axpy(1.0, p.b2, z);

  // grad rho(z) = 2 z for rho = ||.||^2
  return 2.0 * dot(z, upsilon);
}

}  // namespace minimax::relu_net
