#include "minimax/polyhedral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace minimax {

PolyhedralSet PolyhedralSet::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size() || lower.empty())
    throw std::invalid_argument("box: bad bounds");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("box: lower must be < upper componentwise");
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw std::invalid_argument("box: bounds must be finite");
  }
  PolyhedralSet s;
  s.kind_ = Kind::Box;
  s.dim_ = lower.size();
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  return s;
}

namespace {

// Cheap phase-1: descend on ||(Az-b)_+||^2 from the origin.
bool find_feasible(const Mat& a, const Vec& b, Vec& z_out) {
  Vec z(a.cols, 0.0);
  for (int it = 0; it < 20000; ++it) {
    Vec r = a.mul(z);
    double viol = 0.0;
    Vec grad(a.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
      double s = r[i] - b[i];
      if (s > 0) {
        viol = std::max(viol, s);
        for (std::size_t j = 0; j < a.cols; ++j) grad[j] += 2.0 * s * a(i, j);
      }
    }
    if (viol <= 1e-10) {
      z_out = z;
      return true;
    }
    double gn = norm(grad);
    if (gn == 0.0) return false;
    axpy(-0.5 / gn * std::min(1.0, viol), grad, z);
  }
  return false;
}

}  // namespace

PolyhedralSet PolyhedralSet::halfspaces(Mat a, Vec b) {
  if (a.rows == 0 || a.cols == 0 || a.rows != b.size())
    throw std::invalid_argument("halfspaces: bad shapes");
  Vec witness;
  if (!find_feasible(a, b, witness))
    throw std::invalid_argument("halfspaces: no feasible point found");
  PolyhedralSet s;
  s.kind_ = Kind::Halfspaces;
  s.dim_ = a.cols;
  s.a_ = std::move(a);
  s.b_ = std::move(b);
  return s;
}

PolyhedralSet PolyhedralSet::parse_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.contains("box")) {
    Vec lo = j["box"]["lower"].get<Vec>();
    Vec up = j["box"]["upper"].get<Vec>();
    return box(std::move(lo), std::move(up));
  }
  if (j.contains("A")) {
    auto rows = j["A"].get<std::vector<Vec>>();
    Vec b = j["b"].get<Vec>();
    Mat a(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != a.cols)
        throw std::invalid_argument("parse_json: ragged A");
      for (std::size_t jcol = 0; jcol < a.cols; ++jcol) a(i, jcol) = rows[i][jcol];
    }
    return halfspaces(std::move(a), std::move(b));
  }
  throw std::invalid_argument("parse_json: expected \"box\" or \"A\"/\"b\"");
}

PolyhedralSet PolyhedralSet::as_halfspaces() const {
  if (kind_ == Kind::Halfspaces) return *this;
  Mat a(2 * dim_, dim_);
  Vec b(2 * dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    a(i, i) = 1.0;
    b[i] = upper_[i];
    a(dim_ + i, i) = -1.0;
    b[dim_ + i] = -lower_[i];
  }
  PolyhedralSet s;
  s.kind_ = Kind::Halfspaces;
  s.dim_ = dim_;
  s.a_ = std::move(a);
  s.b_ = std::move(b);
  return s;
}

bool PolyhedralSet::contains(const Vec& z, double tol_feas) const {
  if (z.size() != dim_) return false;
  if (kind_ == Kind::Box) {
    for (std::size_t i = 0; i < dim_; ++i)
      if (z[i] < lower_[i] - tol_feas || z[i] > upper_[i] + tol_feas) return false;
    return true;
  }
  Vec r = a_.mul(z);
  for (std::size_t i = 0; i < a_.rows; ++i)
    if (r[i] > b_[i] + tol_feas) return false;
  return true;
}

Vec PolyhedralSet::project(const Vec& z) const {
  if (kind_ != Kind::Box)
    throw std::logic_error("project: only implemented for boxes");
  Vec r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    r[i] = std::clamp(z[i], lower_[i], upper_[i]);
  return r;
}

Vec PolyhedralSet::center() const {
  if (kind_ == Kind::Box) {
    Vec c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) c[i] = 0.5 * (lower_[i] + upper_[i]);
    return c;
  }
  Vec w;
  find_feasible(a_, b_, w);
  return w;
}

std::vector<int> PolyhedralSet::active_set(const Vec& z, double tol_active) const {
  if (!contains(z, 1e-9 + tol_active))
    throw std::invalid_argument("active_set: infeasible point");
  std::vector<int> idx;
  if (kind_ == Kind::Box) {
    // Row ordering matches as_halfspaces(): upper rows first, then lower.
    for (std::size_t i = 0; i < dim_; ++i)
      if (z[i] >= upper_[i] - tol_active) idx.push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < dim_; ++i)
      if (z[i] <= lower_[i] + tol_active) idx.push_back(static_cast<int>(dim_ + i));
    return idx;
  }
  Vec r = a_.mul(z);
  for (std::size_t i = 0; i < a_.rows; ++i)
    if (r[i] >= b_[i] - tol_active) idx.push_back(static_cast<int>(i));
  return idx;
}

bool PolyhedralSet::tangent_cone_membership(const Vec& z, const Vec& v,
                                            double tol_orth) const {
  if (v.size() != dim_ || z.size() != dim_)
    throw std::invalid_argument("tangent_cone_membership: dimension mismatch");
  if (kind_ == Kind::Box) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (z[i] <= lower_[i] + 1e-9 && v[i] < -tol_orth) return false;
      if (z[i] >= upper_[i] - 1e-9 && v[i] > tol_orth) return false;
    }
    return true;
  }
  auto act = active_set(z);
  for (int i : act)
    if (dot(a_.row(static_cast<std::size_t>(i)), v) > tol_orth) return false;
  return true;
}

bool PolyhedralSet::t_circle_membership(const Vec& z, const Vec& v,
                                        double tol_orth) const {
  // For polyhedral sets T-circle equals the tangent cone.
  return tangent_cone_membership(z, v, tol_orth);
}

bool PolyhedralSet::t_circle_line_search(const Vec& z, const Vec& v,
                                         double tol_feas) const {
  for (double lambda = 1e-1; lambda >= 0.9e-12; lambda *= 0.1) {
    Vec w = z;
    axpy(lambda, v, w);
    if (contains(w, tol_feas)) return true;
  }
  return false;
}

NnlsResult nnls_fit(const std::vector<Vec>& rows, const Vec& g, int max_iter,
                    double tol) {
  NnlsResult res;
  res.alpha.assign(rows.size(), 0.0);
  if (rows.empty()) {
    res.residual = norm(g);
    res.converged = true;
    return res;
  }
  auto residual_vec = [&](const Vec& alpha) {
    Vec r = g;
    for (std::size_t i = 0; i < rows.size(); ++i) axpy(-alpha[i], rows[i], r);
    return r;
  };
  double lip = 0.0;
  for (const auto& row : rows) lip += dot(row, row);
  if (lip == 0.0) {
    res.residual = norm(g);
    res.converged = true;
    return res;
  }
  double step = 1.0 / lip;
  Vec alpha(rows.size(), 0.0);
  Vec r = residual_vec(alpha);
  double f = dot(r, r);
  for (int it = 0; it < max_iter; ++it) {
    // grad of ||g - M^T a||^2 wrt a_i is -2 <rows_i, r>
    Vec grad(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) grad[i] = -2.0 * dot(rows[i], r);
    double s = step;
    Vec next(rows.size());
    double fn = f;
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t i = 0; i < rows.size(); ++i)
        next[i] = std::max(0.0, alpha[i] - s * grad[i]);
      Vec rn = residual_vec(next);
      fn = dot(rn, rn);
      double decrease = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i)
        decrease += grad[i] * (next[i] - alpha[i]);
      if (fn <= f + 1e-4 * decrease || fn < f) {
        r = std::move(rn);
        break;
      }
      s *= 0.5;
    }
    double move = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      move = std::max(move, std::abs(next[i] - alpha[i]));
    alpha = next;
    double prev = f;
    f = fn;
    if (move < tol && prev - f < tol) break;
  }
  res.alpha = alpha;
  res.residual = std::sqrt(std::max(0.0, f));
  res.converged = true;
  return res;
}

NormalConeResult PolyhedralSet::normal_cone_membership(const Vec& z, const Vec& g,
                                                       const Tolerances& tol) const {
  if (g.size() != dim_)
    throw std::invalid_argument("normal_cone_membership: dimension mismatch");
  if (!contains(z, tol.feas))
    throw std::invalid_argument("normal_cone_membership: infeasible point");
  NormalConeResult out;
  if (kind_ == Kind::Box) {
    // N at interior coord = {0}; at lower bound (-inf,0]; at upper [0,inf).
    double res2 = 0.0;
    Vec by_row(2 * dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      bool lo = z[i] <= lower_[i] + tol.active;
      bool up = z[i] >= upper_[i] - tol.active;
      double gi = g[i];
      double allowed = 0.0;
      if (up && gi > 0) {
        allowed = gi;
        by_row[i] = gi;  // upper row +e_i
      } else if (lo && gi < 0) {
        allowed = gi;
        by_row[dim_ + i] = -gi;  // lower row -e_i
      }
      double excess = gi - allowed;
      res2 += excess * excess;
    }
    out.residual = std::sqrt(res2);
    out.member = out.residual <= tol.kkt * (1.0 + norm(g));
    out.active_rows = active_set(z, tol.active);
    out.multipliers.reserve(out.active_rows.size());
    for (int row : out.active_rows)
      out.multipliers.push_back(by_row[static_cast<std::size_t>(row)]);
    return out;
  }
  auto act = active_set(z, tol.active);
  std::vector<Vec> rows;
  rows.reserve(act.size());
  for (int i : act) rows.push_back(a_.row(static_cast<std::size_t>(i)));
  auto fit = nnls_fit(rows, g);
  out.residual = fit.residual;
  out.member = fit.converged && fit.residual <= tol.kkt * (1.0 + norm(g));
  out.multipliers = fit.alpha;
  out.active_rows = act;
  return out;
}

double PolyhedralSet::normal_cone_residual(const Vec& z, const Vec& g,
                                           const Tolerances& tol) const {
  return normal_cone_membership(z, g, tol).residual;
}

std::vector<Vec> PolyhedralSet::sample_cone_directions(
    const Vec& z, int count, std::uint64_t seed, ConeMode mode,
    const Vec* gradient, const Tolerances& tol) const {
  if (count < 1) throw std::invalid_argument("sample_cone_directions: count < 1");
  std::vector<Vec> out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto admit = [&](Vec v) -> bool {
    double n = norm(v);
    if (n < 1e-12) return false;
    v = (1.0 / n) * v;
    if (mode == ConeMode::Gamma) {
      if (gradient == nullptr)
        throw std::invalid_argument("gamma mode requires a gradient");
      double gn = norm(*gradient);
      if (gn > 0) {
        Vec p = v;
        axpy(-dot(v, *gradient) / (gn * gn), *gradient, p);
        double pn = norm(p);
        if (pn < 1e-10) return false;
        v = (1.0 / pn) * p;
        if (std::abs(dot(v, *gradient)) >
            tol.orth * (1.0 + norm(v) * gn))
          return false;
      }
    }
    if (!tangent_cone_membership(z, v, tol.orth)) return false;
    out.push_back(std::move(v));
    return true;
  };

  // Extreme rays of the box cone first; for halfspaces just signed axes.
  std::vector<Vec> rays;
  for (std::size_t i = 0; i < dim_; ++i) {
    Vec e(dim_, 0.0);
    e[i] = 1.0;
    rays.push_back(e);
    e[i] = -1.0;
    rays.push_back(e);
  }
  for (auto& ray : rays)
    if (tangent_cone_membership(z, ray, tol.orth)) admit(ray);

  std::size_t wanted = std::max(static_cast<std::size_t>(count), out.size());
  int attempts = 0;
  const int attempt_cap = 200 * std::max(count, 8);
  while (out.size() < wanted && attempts++ < attempt_cap) {
    Vec v(dim_);
    for (auto& c : v) c = gauss(rng);
    if (kind_ == Kind::Box) {
      for (std::size_t i = 0; i < dim_; ++i) {
        if (z[i] <= lower_[i] + tol.active) v[i] = std::abs(v[i]);
        if (z[i] >= upper_[i] - tol.active) v[i] = -std::abs(v[i]);
      }
    }
    admit(std::move(v));
  }
  return out;
}

double PolyhedralSet::diameter() const {
  if (kind_ == Kind::Box) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double w = upper_[i] - lower_[i];
      d2 += w * w;
    }
    return std::sqrt(d2);
  }
  return 2.0;  // halfspace fixtures in this project are O(1)-scaled
}

}  // namespace minimax
