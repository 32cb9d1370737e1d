#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "minimax/linalg.hpp"

namespace minimax {

using ScalarFn = std::function<double(const Vec&)>;

// Finite surrogate for the liminf/limsup difference quotients. Perturbation
// radii shrink proportionally to t so the per-level extremal quotients are
// (for smooth functions) affine in t; the reported value extrapolates the
// finest levels to t = 0.
struct QuotientScheme {
  std::vector<double> t_sequence = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double perturbation_radius = 1e-3;  // direction-cloud radius at t_sequence[0]
  int perturbation_count = 32;
  double base_point_radius = 1e-3;  // cap on the limsup base-point cloud
  double base_point_scale = 10.0;   // base radius = min(cap, scale * t)
  double tol_conv = 1e-4;
  double cap = 1e12;
  std::uint64_t seed = 2024;

  // Second-order quotients divide by t^2; they run on the square-root ladder
  // to stay clear of cancellation noise.
  std::vector<double> second_order_ts() const;

  static QuotientScheme parse_json(const std::string& text);
  std::string to_json() const;
};

struct DerivativeEstimate {
  double value = 0.0;
  double spread = 0.0;  // max - min over the cloud at the finest level
  bool converged = false;
  bool capped = false;
};

// d g(x)(v): liminf quotient with direction perturbation.
DerivativeEstimate subderivative(const ScalarFn& g, const Vec& x, const Vec& v,
                                 const QuotientScheme& scheme = {});

// g^o(x;v): Clarke limsup over nearby base points.
DerivativeEstimate clarke_directional(const ScalarFn& g, const Vec& x,
                                      const Vec& v,
                                      const QuotientScheme& scheme = {});

// d^2 g(x)(w), with the first-order term estimated internally per w'.
DerivativeEstimate second_subderivative(const ScalarFn& g, const Vec& x,
                                        const Vec& w,
                                        const QuotientScheme& scheme = {});

// d^2 g(x|v)(w), pinned linear term <v, w'>.
DerivativeEstimate second_subderivative_pinned(const ScalarFn& g, const Vec& x,
                                               const Vec& v, const Vec& w,
                                               const QuotientScheme& scheme = {});

// g^oo(x;u,v): double-limsup mixed quotient, delta = t pairing.
DerivativeEstimate generalized_second(const ScalarFn& g, const Vec& x,
                                      const Vec& u, const Vec& v,
                                      const QuotientScheme& scheme = {});

// g'(x;v) and g^(2)(x;v): one-sided limits, no direction perturbation.
DerivativeEstimate directional(const ScalarFn& g, const Vec& x, const Vec& v,
                               const QuotientScheme& scheme = {});
DerivativeEstimate second_directional(const ScalarFn& g, const Vec& x,
                                      const Vec& v,
                                      const QuotientScheme& scheme = {});

}  // namespace minimax
