#include "minimax/deriv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace minimax {

std::vector<double> QuotientScheme::second_order_ts() const {
  std::vector<double> out;
  out.reserve(t_sequence.size());
  for (double t : t_sequence) out.push_back(std::sqrt(t));
  return out;
}

QuotientScheme QuotientScheme::parse_json(const std::string& text) {
  QuotientScheme s;
  auto j = nlohmann::json::parse(text);
  if (j.contains("t_sequence")) s.t_sequence = j["t_sequence"].get<std::vector<double>>();
  if (j.contains("perturbation_radius")) s.perturbation_radius = j["perturbation_radius"];
  if (j.contains("perturbation_count")) s.perturbation_count = j["perturbation_count"];
  if (j.contains("base_point_radius")) s.base_point_radius = j["base_point_radius"];
  if (j.contains("base_point_scale")) s.base_point_scale = j["base_point_scale"];
  if (j.contains("tol_conv")) s.tol_conv = j["tol_conv"];
  if (j.contains("seed")) s.seed = j["seed"];
  if (s.t_sequence.size() < 2) throw std::invalid_argument("scheme: need >= 2 t levels");
  for (std::size_t i = 0; i + 1 < s.t_sequence.size(); ++i)
    if (!(s.t_sequence[i] > s.t_sequence[i + 1]) || s.t_sequence[i + 1] <= 0.0)
      throw std::invalid_argument("scheme: t_sequence must be positive decreasing");
  if (s.perturbation_count < 1) throw std::invalid_argument("scheme: count >= 1");
  return s;
}

std::string QuotientScheme::to_json() const {
  nlohmann::json j;
  j["t_sequence"] = t_sequence;
  j["perturbation_radius"] = perturbation_radius;
  j["perturbation_count"] = perturbation_count;
  j["base_point_radius"] = base_point_radius;
  j["base_point_scale"] = base_point_scale;
  j["tol_conv"] = tol_conv;
  j["seed"] = seed;
  return j.dump();
}

namespace {

std::vector<Vec> unit_cloud(std::uint64_t seed, int count, std::size_t dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  while (dirs.size() < static_cast<std::size_t>(count)) {
    Vec u(dim);
    for (auto& c : u) c = gauss(rng);
    double n = norm(u);
    if (n < 1e-8) continue;
    dirs.push_back((1.0 / n) * u);
  }
  return dirs;
}

// Lagrange extrapolation to t = 0 through the last (up to) three levels.
double extrap_to_zero(const std::vector<double>& ts, const std::vector<double>& as) {
  std::vector<double> t, a;
  for (std::size_t i = ts.size() >= 3 ? ts.size() - 3 : 0; i < ts.size(); ++i) {
    if (std::isfinite(as[i])) {
      t.push_back(ts[i]);
      a.push_back(as[i]);
    }
  }
  if (t.empty()) return std::numeric_limits<double>::quiet_NaN();
  double val = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < t.size(); ++j)
      if (j != i) w *= (0.0 - t[j]) / (t[i] - t[j]);
    val += w * a[i];
  }
  return val;
}

DerivativeEstimate finalize(const std::vector<double>& ts,
                            const std::vector<double>& as, double spread,
                            double scale, const QuotientScheme& scheme) {
  DerivativeEstimate est;
  est.spread = spread * std::abs(scale);
  std::size_t last = as.size() - 1;
  double a1 = as[last], a0 = as[last - 1];
  bool finite = std::isfinite(a1) && std::isfinite(a0);
  est.converged = finite && std::abs(a1 - a0) < scheme.tol_conv * (1.0 + std::abs(a1));
  double raw = extrap_to_zero(ts, as);
  if (!std::isfinite(raw)) {
    est.value = scheme.cap;
    est.capped = true;
    est.converged = false;
    return est;
  }
  // Diverging quotient: magnitude growing down the ladder without settling.
  if (!est.converged && finite && std::abs(a1) > 2.0 * std::abs(a0) &&
      std::abs(a1) > 1.0) {
    est.value = (a1 > 0 ? 1.0 : -1.0) * scheme.cap;
    est.capped = true;
    return est;
  }
  est.value = raw * scale;
  if (std::abs(est.value) > scheme.cap) {
    est.value = (est.value > 0 ? 1.0 : -1.0) * scheme.cap;
    est.capped = true;
    est.converged = false;
  }
  return est;
}

struct LevelStats {
  double extremal = std::numeric_limits<double>::quiet_NaN();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double q, bool minimize) {
    if (!std::isfinite(q)) return;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
    extremal = minimize ? lo : hi;
  }
  double spread() const { return hi >= lo ? hi - lo : 0.0; }
};

}  // namespace

DerivativeEstimate subderivative(const ScalarFn& g, const Vec& x, const Vec& v,
                                 const QuotientScheme& scheme) {
  double vn = norm(v);
  if (vn == 0.0) return {0.0, 0.0, true, false};
  Vec vhat = (1.0 / vn) * v;
  auto dirs = unit_cloud(scheme.seed, scheme.perturbation_count, x.size());
  const double g0 = g(x);
  const auto& ts = scheme.t_sequence;
  std::vector<double> as(ts.size());
  double spread = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double t = ts[k];
    double eps = scheme.perturbation_radius * (t / ts.front());
    LevelStats stats;
    for (int j = -1; j < static_cast<int>(dirs.size()); ++j) {
      Vec vp = vhat;
      if (j >= 0) axpy(eps, dirs[static_cast<std::size_t>(j)], vp);
      Vec p = x;
      axpy(t, vp, p);
      stats.add((g(p) - g0) / t, /*minimize=*/true);
    }
    as[k] = stats.extremal;
    if (k + 1 == ts.size()) spread = stats.spread();
  }
  return finalize(ts, as, spread, vn, scheme);
}

DerivativeEstimate clarke_directional(const ScalarFn& g, const Vec& x,
                                      const Vec& v,
                                      const QuotientScheme& scheme) {
  double vn = norm(v);
  if (vn == 0.0) return {0.0, 0.0, true, false};
  Vec vhat = (1.0 / vn) * v;
  auto dirs = unit_cloud(scheme.seed + 1, scheme.perturbation_count, x.size());
  dirs.push_back(vhat);
  dirs.push_back(-1.0 * vhat);
  const auto& ts = scheme.t_sequence;
  std::vector<double> as(ts.size());
  double spread = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double t = ts[k];
    double radius = std::min(scheme.base_point_radius, scheme.base_point_scale * t);
    LevelStats stats;
    for (int j = -1; j < static_cast<int>(dirs.size()); ++j) {
      Vec xp = x;
      if (j >= 0) axpy(radius, dirs[static_cast<std::size_t>(j)], xp);
      Vec xq = xp;
      axpy(t, vhat, xq);
      stats.add((g(xq) - g(xp)) / t, /*minimize=*/false);
    }
    as[k] = stats.extremal;
    if (k + 1 == ts.size()) spread = stats.spread();
  }
  return finalize(ts, as, spread, vn, scheme);
}

namespace {

DerivativeEstimate second_order_common(
    const ScalarFn& g, const Vec& x, const Vec& w, const QuotientScheme& scheme,
    const std::function<double(const Vec& wp)>& linear_term_at) {
  double wn = norm(w);
  if (wn == 0.0) return {0.0, 0.0, true, false};
  Vec what = (1.0 / wn) * w;
  auto dirs = unit_cloud(scheme.seed + 2, scheme.perturbation_count, x.size());
  const double g0 = g(x);
  auto ts = scheme.second_order_ts();
  std::vector<double> as(ts.size());
  double spread = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double t = ts[k];
    double eps = scheme.perturbation_radius * (t / ts.front());
    LevelStats stats;
    for (int j = -1; j < static_cast<int>(dirs.size()); ++j) {
      Vec wp = what;
      if (j >= 0) axpy(eps, dirs[static_cast<std::size_t>(j)], wp);
      Vec p = x;
      axpy(t, wp, p);
      double q = (g(p) - g0 - t * linear_term_at(wp)) / (0.5 * t * t);
      stats.add(q, /*minimize=*/true);
    }
    as[k] = stats.extremal;
    if (k + 1 == ts.size()) spread = stats.spread();
  }
  return finalize(ts, as, spread, wn * wn, scheme);
}

}  // namespace

DerivativeEstimate second_subderivative(const ScalarFn& g, const Vec& x,
                                        const Vec& w,
                                        const QuotientScheme& scheme) {
  QuotientScheme inner = scheme;
  inner.perturbation_count = std::max(4, scheme.perturbation_count / 4);
  return second_order_common(g, x, w, scheme, [&](const Vec& wp) {
    return subderivative(g, x, wp, inner).value;
  });
}

DerivativeEstimate second_subderivative_pinned(const ScalarFn& g, const Vec& x,
                                               const Vec& v, const Vec& w,
                                               const QuotientScheme& scheme) {
  return second_order_common(g, x, w, scheme,
                             [&](const Vec& wp) { return dot(v, wp); });
}

DerivativeEstimate generalized_second(const ScalarFn& g, const Vec& x,
                                      const Vec& u, const Vec& v,
                                      const QuotientScheme& scheme) {
  double un = norm(u), vn = norm(v);
  if (un == 0.0 || vn == 0.0) return {0.0, 0.0, true, false};
  Vec uhat = (1.0 / un) * u;
  Vec vhat = (1.0 / vn) * v;
  auto dirs = unit_cloud(scheme.seed + 3, scheme.perturbation_count, x.size());
  dirs.push_back(uhat);
  dirs.push_back(-1.0 * uhat);
  auto ts = scheme.second_order_ts();
  std::vector<double> as(ts.size());
  double spread = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double t = ts[k];
    double delta = t;
    double radius = t;  // base-point cloud shrinks with the ladder
    LevelStats stats;
    for (int j = -1; j < static_cast<int>(dirs.size()); ++j) {
      Vec xp = x;
      if (j >= 0) axpy(radius, dirs[static_cast<std::size_t>(j)], xp);
      Vec xdu = xp;
      axpy(delta, uhat, xdu);
      Vec xdutv = xdu;
      axpy(t, vhat, xdutv);
      Vec xtv = xp;
      axpy(t, vhat, xtv);
      double q = (g(xdutv) - g(xdu) - g(xtv) + g(xp)) / (delta * t);
      stats.add(q, /*minimize=*/false);
    }
    as[k] = stats.extremal;
    if (k + 1 == ts.size()) spread = stats.spread();
  }
  return finalize(ts, as, spread, un * vn, scheme);
}

DerivativeEstimate directional(const ScalarFn& g, const Vec& x, const Vec& v,
                               const QuotientScheme& scheme) {
  double vn = norm(v);
  if (vn == 0.0) return {0.0, 0.0, true, false};
  Vec vhat = (1.0 / vn) * v;
  const double g0 = g(x);
  const auto& ts = scheme.t_sequence;
  std::vector<double> as(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    Vec p = x;
    axpy(ts[k], vhat, p);
    as[k] = (g(p) - g0) / ts[k];
  }
  return finalize(ts, as, 0.0, vn, scheme);
}

DerivativeEstimate second_directional(const ScalarFn& g, const Vec& x,
                                      const Vec& v,
                                      const QuotientScheme& scheme) {
  double vn = norm(v);
  if (vn == 0.0) return {0.0, 0.0, true, false};
  Vec vhat = (1.0 / vn) * v;
  double d1 = directional(g, x, vhat, scheme).value;
  const double g0 = g(x);
  auto ts = scheme.second_order_ts();
  std::vector<double> as(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double t = ts[k];
    Vec p = x;
    axpy(t, vhat, p);
    as[k] = (g(p) - g0 - t * d1) / (0.5 * t * t);
  }
  return finalize(ts, as, 0.0, vn * vn, scheme);
}

}  // namespace minimax
