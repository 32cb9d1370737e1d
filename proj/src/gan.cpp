#include "minimax/gan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>

#include "json.hpp"

namespace minimax::gan {

namespace {

double softplus(double u) {
  if (u > 0.0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  double e = std::exp(u);
  return e / (1.0 + e);
}

// Fixed-shape pairwise reduction so sums are bit-stable across run modes.
double pairwise_sum(const double* a, std::size_t count) {
  if (count == 0) return 0.0;
  if (count == 1) return a[0];
  std::size_t half = count / 2;
  return pairwise_sum(a, half) + pairwise_sum(a + half, count - half);
}

Vec pairwise_sum_vecs(const std::vector<Vec>& terms) {
  if (terms.empty()) return {};
  std::size_t dim = terms[0].size();
  Vec out(dim);
  std::vector<double> scratch(terms.size());
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < terms.size(); ++i) scratch[i] = terms[i][k];
    out[k] = pairwise_sum(scratch.data(), scratch.size());
  }
  return out;
}

struct SampleForward {
  Vec pre;   // W1 xi2 + b1, length s
  Vec h;     // (pre)_+
  Vec g;     // generator output, length s1
  double u1 = 0.0, u2 = 0.0;
  double min_abs_pre = 0.0;
};

SampleForward sample_forward(const GanParams& p, const Vec& xi1, const Vec& xi2,
                             const Vec& y) {
  SampleForward fw;
  fw.pre = p.w1.mul(xi2);
  fw.min_abs_pre = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fw.pre.size(); ++i) {
    fw.pre[i] += p.b1[i];
    fw.min_abs_pre = std::min(fw.min_abs_pre, std::abs(fw.pre[i]));
  }
  fw.h = fw.pre;
  for (double& v : fw.h) v = std::max(v, 0.0);
  fw.g = p.w2.mul(fw.h);
  for (std::size_t i = 0; i < fw.g.size(); ++i) fw.g[i] += p.b2[i];
  fw.u1 = dot(y, xi1);
  fw.u2 = dot(y, fw.g);
  return fw;
}

std::pair<Vec, Vec> gradients_impl(const GanSaaInstance& inst, const Vec& x,
                                   const Vec& y, bool strict) {
  const auto& sh = inst.shape;
  GanParams p = unpack(sh, x);
  std::size_t n = sh.n(), m = sh.m(), big = n + m;
  std::size_t count = inst.samples.xi1.size();
  // flat per-sample term matrix, reduced column-wise by the pairwise tree
  std::vector<double> terms(count * big);
  Vec pre(sh.s), h(sh.s), g(sh.s1), gy(m), hbar(sh.s);
  // packing offsets: vec(W1) [0, s*s2), vec(W2) [s*s2, s*s2+s1*s), b1, b2
  std::size_t off_w1 = 0, off_w2 = sh.s * sh.s2,
              off_b1 = sh.s * sh.s2 + sh.s1 * sh.s,
              off_b2 = off_b1 + sh.s;
  for (std::size_t j = 0; j < count; ++j) {
    const Vec& xi1 = inst.samples.xi1[j];
    const Vec& xi2 = inst.samples.xi2[j];
    double min_abs_pre = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sh.s; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < sh.s2; ++k) acc += p.w1(i, k) * xi2[k];
      acc += p.b1[i];
      pre[i] = acc;
      min_abs_pre = std::min(min_abs_pre, std::abs(acc));
      h[i] = std::max(acc, 0.0);
    }
    if (strict && min_abs_pre <= inst.kink_tol)
      throw KinkError("hidden pre-activation within kink_tol of zero; "
                      "resample or perturb x");
    for (std::size_t i = 0; i < sh.s1; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < sh.s; ++k) acc += p.w2(i, k) * h[k];
      g[i] = acc + p.b2[i];
    }
    double u1 = dot(y, xi1);
    double u2 = dot(y, g);
    double s1v = sigmoid(u1);      // d softplus(u1)/du1
    double c = 1.0 - sigmoid(u2);  // d (u2 - softplus(u2))/du2
    double* t = terms.data() + j * big;
    // grad_y = -sigma(u1) xi1 + (1 - sigma(u2)) g
    for (std::size_t k = 0; k < m; ++k) t[n + k] = -s1v * xi1[k] + c * g[k];
    // back through g = W2 h + b2 with upstream c * y
    for (std::size_t k = 0; k < m; ++k) gy[k] = c * y[k];
    for (std::size_t k = 0; k < sh.s; ++k) hbar[k] = 0.0;
    for (std::size_t i = 0; i < sh.s1; ++i)
      for (std::size_t k = 0; k < sh.s; ++k) hbar[k] += p.w2(i, k) * gy[i];
    for (std::size_t i = 0; i < sh.s1; ++i)
      for (std::size_t k = 0; k < sh.s; ++k)
        t[off_w2 + k * sh.s1 + i] = gy[i] * h[k];
    for (std::size_t i = 0; i < sh.s1; ++i) t[off_b2 + i] = gy[i];
    for (std::size_t i = 0; i < sh.s; ++i) {
      double mask = pre[i] > 0.0 ? 1.0 : 0.0;
      double hb = hbar[i] * mask;
      t[off_b1 + i] = hb;
      for (std::size_t k = 0; k < sh.s2; ++k)
        t[off_w1 + k * sh.s + i] = hb * xi2[k];
    }
  }
  std::vector<double> scratch(count);
  double inv = 1.0 / static_cast<double>(count);
  Vec gx(n), gyo(m);
  for (std::size_t k = 0; k < big; ++k) {
    for (std::size_t j = 0; j < count; ++j) scratch[j] = terms[j * big + k];
    double s = pairwise_sum(scratch.data(), count) * inv;
    if (k < n)
      gx[k] = s;
    else
      gyo[k - n] = s;
  }
  return {gx, gyo};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

GanParams unpack(const GanShape& shape, const Vec& x) {
  if (x.size() != shape.n()) throw std::invalid_argument("gan unpack: bad size");
  GanParams p;
  p.w1 = Mat(shape.s, shape.s2);
  p.w2 = Mat(shape.s1, shape.s);
  p.b1.resize(shape.s);
  p.b2.resize(shape.s1);
  std::size_t k = 0;
  for (std::size_t j = 0; j < shape.s2; ++j)
    for (std::size_t i = 0; i < shape.s; ++i) p.w1(i, j) = x[k++];
  for (std::size_t j = 0; j < shape.s; ++j)
    for (std::size_t i = 0; i < shape.s1; ++i) p.w2(i, j) = x[k++];
  for (std::size_t i = 0; i < shape.s; ++i) p.b1[i] = x[k++];
  for (std::size_t i = 0; i < shape.s1; ++i) p.b2[i] = x[k++];
  return p;
}

Vec pack(const GanShape& shape, const GanParams& p) {
  Vec x;
  x.reserve(shape.n());
  for (std::size_t j = 0; j < shape.s2; ++j)
    for (std::size_t i = 0; i < shape.s; ++i) x.push_back(p.w1(i, j));
  for (std::size_t j = 0; j < shape.s; ++j)
    for (std::size_t i = 0; i < shape.s1; ++i) x.push_back(p.w2(i, j));
  for (std::size_t i = 0; i < shape.s; ++i) x.push_back(p.b1[i]);
  for (std::size_t i = 0; i < shape.s1; ++i) x.push_back(p.b2[i]);
  return x;
}

Vec generator_forward(const GanShape& shape, const Vec& x, const Vec& xi2) {
  GanParams p = unpack(shape, x);
  Vec h = p.w1.mul(xi2);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::max(h[i] + p.b1[i], 0.0);
  Vec g = p.w2.mul(h);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += p.b2[i];
  return g;
}

double discriminator_forward(const Vec& y, const Vec& xi1) {
  return sigmoid(-dot(y, xi1));
}

GanBuildParams GanBuildParams::parse_json(const std::string& text) {
  GanBuildParams out;
  if (text.empty()) return out;
  auto j = nlohmann::json::parse(text);
  if (j.contains("s")) out.shape.s = j["s"].get<std::size_t>();
  if (j.contains("s1")) out.shape.s1 = j["s1"].get<std::size_t>();
  if (j.contains("s2")) out.shape.s2 = j["s2"].get<std::size_t>();
  if (j.contains("N")) out.sample_count = j["N"].get<std::size_t>();
  if (j.contains("sample_count"))
    out.sample_count = j["sample_count"].get<std::size_t>();
  if (j.contains("seed")) out.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("x_bound")) out.x_bound = j["x_bound"].get<double>();
  if (j.contains("y_bound")) out.y_bound = j["y_bound"].get<double>();
  if (j.contains("xi_bound")) out.xi_bound = j["xi_bound"].get<double>();
  if (j.contains("kink_tol")) out.kink_tol = j["kink_tol"].get<double>();
  if (j.contains("reference_x")) out.reference_x = j["reference_x"].get<Vec>();
  return out;
}

Vec default_start_x(const GanShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 7));
  std::normal_distribution<double> normal(0.0, 0.3);
  Vec x(shape.n());
  for (double& v : x) v = normal(rng);
  GanParams p = unpack(shape, x);
  // keep hidden biases away from zero so no hidden row is degenerate
  for (std::size_t i = 0; i < shape.s; ++i)
    if (std::abs(p.b1[i]) < 0.05) p.b1[i] = p.b1[i] < 0.0 ? -0.05 : 0.05;
  return pack(shape, p);
}

GanSaaInstance build_instance(const GanBuildParams& params) {
  GanSaaInstance inst;
  inst.shape = params.shape;
  inst.kink_tol = params.kink_tol;
  std::size_t n = params.shape.n(), m = params.shape.m();
  inst.x_box = std::make_shared<PolyhedralSet>(
      PolyhedralSet::box(Vec(n, -params.x_bound), Vec(n, params.x_bound)));
  inst.y_box = std::make_shared<PolyhedralSet>(
      PolyhedralSet::box(Vec(m, -params.y_bound), Vec(m, params.y_bound)));

  Vec ref = params.reference_x;
  if (ref.empty()) ref = default_start_x(params.shape, params.seed);
  if (ref.size() != n)
    throw std::invalid_argument("gan build: reference_x has wrong length");
  GanParams p = unpack(params.shape, ref);

  SampleSet& ss = inst.samples;
  ss.seed = params.seed;
  ss.xi1_lower = Vec(m, -params.xi_bound);
  ss.xi1_upper = Vec(m, params.xi_bound);
  ss.xi2_lower = Vec(params.shape.s2, -params.xi_bound);
  ss.xi2_upper = Vec(params.shape.s2, params.xi_bound);

  std::mt19937_64 rng(mix_seed(params.seed, 11));
  std::uniform_real_distribution<double> uni(-params.xi_bound, params.xi_bound);
  ss.xi1.reserve(params.sample_count);
  ss.xi2.reserve(params.sample_count);
  for (std::size_t j = 0; j < params.sample_count; ++j) {
    Vec xi1(m);
    for (double& v : xi1) v = uni(rng);
    ss.xi1.push_back(std::move(xi1));
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      Vec xi2(params.shape.s2);
      for (double& v : xi2) v = uni(rng);
      Vec pre = p.w1.mul(xi2);
      ok = true;
      for (std::size_t i = 0; i < pre.size(); ++i)
        if (std::abs(pre[i] + p.b1[i]) <= params.kink_tol) ok = false;
      if (ok) ss.xi2.push_back(std::move(xi2));
    }
    if (!ok)
      throw std::runtime_error(
          "gan build: could not draw a kink-clear latent sample in 100 tries");
  }
  return inst;
}

double min_preactivation(const GanSaaInstance& inst, const Vec& x) {
  GanParams p = unpack(inst.shape, x);
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& xi2 : inst.samples.xi2) {
    Vec pre = p.w1.mul(xi2);
    for (std::size_t i = 0; i < pre.size(); ++i)
      best = std::min(best, std::abs(pre[i] + p.b1[i]));
  }
  return best;
}

double saa_objective(const GanSaaInstance& inst, const Vec& x, const Vec& y) {
  GanParams p = unpack(inst.shape, x);
  std::vector<double> terms;
  terms.reserve(inst.samples.xi1.size());
  for (std::size_t j = 0; j < inst.samples.xi1.size(); ++j) {
    SampleForward fw =
        sample_forward(p, inst.samples.xi1[j], inst.samples.xi2[j], y);
    terms.push_back(-softplus(fw.u1) + fw.u2 - softplus(fw.u2));
  }
  return pairwise_sum(terms.data(), terms.size()) /
         static_cast<double>(terms.size());
}

std::pair<Vec, Vec> saa_gradients(const GanSaaInstance& inst, const Vec& x,
                                  const Vec& y) {
  return gradients_impl(inst, x, y, true);
}

std::pair<Mat, Mat> saa_hessian_blocks(const GanSaaInstance& inst, const Vec& x,
                                       const Vec& y) {
  const double h = 1e-4;
  std::size_t n = inst.shape.n(), m = inst.shape.m();
  Mat hxx(n, n), hyy(m, m);
  for (std::size_t j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    Vec gp = gradients_impl(inst, xp, y, true).first;
    Vec gm = gradients_impl(inst, xm, y, true).first;
    for (std::size_t i = 0; i < n; ++i) hxx(i, j) = (gp[i] - gm[i]) / (2.0 * h);
  }
  for (std::size_t j = 0; j < m; ++j) {
    Vec yp = y, ym = y;
    yp[j] += h;
    ym[j] -= h;
    Vec gp = gradients_impl(inst, x, yp, true).second;
    Vec gm = gradients_impl(inst, x, ym, true).second;
    for (std::size_t i = 0; i < m; ++i) hyy(i, j) = (gp[i] - gm[i]) / (2.0 * h);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.5 * (hxx(i, j) + hxx(j, i));
      hxx(i, j) = hxx(j, i) = s;
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      double s = 0.5 * (hyy(i, j) + hyy(j, i));
      hyy(i, j) = hyy(j, i) = s;
    }
  return {hxx, hyy};
}

MinMaxProblem make_problem(const GanSaaInstance& inst) {
  auto shared = std::make_shared<GanSaaInstance>(inst);
  MinMaxProblem p;
  p.id = "gan-saa";
  p.n = inst.shape.n();
  p.m = inst.shape.m();
  p.x_set = inst.x_box;
  p.y_set = inst.y_box;
  p.smoothness = Smoothness::LocallyLipschitz;
  p.eval = [shared](const Vec& x, const Vec& y) {
    return saa_objective(*shared, x, y);
  };
  p.grad_x = [shared](const Vec& x, const Vec& y) {
    return gradients_impl(*shared, x, y, true).first;
  };
  p.grad_y = [shared](const Vec& x, const Vec& y) {
    return gradients_impl(*shared, x, y, true).second;
  };
  p.hess_xx = [shared](const Vec& x, const Vec& y) {
    return saa_hessian_blocks(*shared, x, y).first;
  };
  p.hess_yy = [shared](const Vec& x, const Vec& y) {
    return saa_hessian_blocks(*shared, x, y).second;
  };
  return p;
}

MinMaxProblem build_problem_from_json(const std::string& params_json) {
  return make_problem(build_instance(GanBuildParams::parse_json(params_json)));
}

double first_order_residual(const GanSaaInstance& inst, const Vec& x,
                            const Vec& y) {
  auto [gx, gy] = gradients_impl(inst, x, y, false);
  Vec xs = x;
  axpy(-1.0, gx, xs);
  Vec ys = y;
  axpy(1.0, gy, ys);
  Vec rx = x - inst.x_box->project(xs);
  Vec ry = y - inst.y_box->project(ys);
  return std::sqrt(dot(rx, rx) + dot(ry, ry));
}

GdaResult gda_solve(const GanSaaInstance& inst, Vec x0, Vec y0, double step,
                    double tol, int max_iter) {
  GdaResult out;
  out.x = inst.x_box->project(x0);
  out.y = inst.y_box->project(y0);
  for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
    // one gradient evaluation feeds both the residual and the step
    auto [gx, gy] = gradients_impl(inst, out.x, out.y, false);
    Vec xs = out.x;
    axpy(-1.0, gx, xs);
    Vec ys = out.y;
    axpy(1.0, gy, ys);
    Vec rx = out.x - inst.x_box->project(xs);
    Vec ry = out.y - inst.y_box->project(ys);
    out.residual = std::sqrt(dot(rx, rx) + dot(ry, ry));
    if (out.residual < tol) {
      out.converged = true;
      return out;
    }
    Vec xn = out.x;
    axpy(-step, gx, xn);
    Vec yn = out.y;
    axpy(step, gy, yn);
    out.x = inst.x_box->project(xn);
    out.y = inst.y_box->project(yn);
  }
  out.residual = first_order_residual(inst, out.x, out.y);
  out.converged = out.residual < tol;
  return out;
}

std::vector<ConvergenceRow> convergence_experiment(
    const GanShape& shape, const std::vector<std::size_t>& n_list,
    std::uint64_t seed, int trials, std::size_t n_ref) {
  std::vector<ConvergenceRow> rows;
  for (std::size_t n_samples : n_list) {
    ConvergenceRow row;
    row.sample_count = n_samples;
    std::vector<double> residuals;
    for (int t = 0; t < trials; ++t) {
      std::uint64_t trial_seed = mix_seed(seed, 100 + static_cast<std::uint64_t>(t));
      GanBuildParams bp;
      bp.shape = shape;
      bp.seed = trial_seed;
      bp.sample_count = n_samples;
      GanSaaInstance inst = build_instance(bp);
      GanBuildParams rp = bp;
      rp.sample_count = n_ref;
      GanSaaInstance ref = build_instance(rp);
      Vec x0 = default_start_x(shape, trial_seed);
      Vec y0(shape.m(), 0.0);
      GdaResult res = gda_solve(inst, x0, y0);
      if (!res.converged) {
        row.nonconverged += 1;
        continue;
      }
      residuals.push_back(first_order_residual(ref, res.x, res.y));
    }
    std::sort(residuals.begin(), residuals.end());
    if (!residuals.empty()) {
      std::size_t k = residuals.size();
      row.median_residual =
          (k % 2 == 1) ? residuals[k / 2]
                       : 0.5 * (residuals[k / 2 - 1] + residuals[k / 2]);
      std::size_t p90 = static_cast<std::size_t>(std::ceil(0.9 * k));
      row.p90_residual = residuals[std::min(k - 1, p90 == 0 ? 0 : p90 - 1)];
    }
    rows.push_back(row);
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "N,median_residual,p90_residual,nonconverged\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%.12e,%.12e,%d\n", r.sample_count,
                  r.median_residual, r.p90_residual, r.nonconverged);
    out += buf;
  }
  return out;
}

void save_instance(const GanSaaInstance& inst, const std::string& path) {
  nlohmann::json header;
  header["s"] = inst.shape.s;
  header["s1"] = inst.shape.s1;
  header["s2"] = inst.shape.s2;
  header["N"] = inst.samples.xi1.size();
  header["seed"] = inst.samples.seed;
  header["kink_tol"] = inst.kink_tol;
  header["xi1_lower"] = inst.samples.xi1_lower;
  header["xi1_upper"] = inst.samples.xi1_upper;
  header["xi2_lower"] = inst.samples.xi2_lower;
  header["xi2_upper"] = inst.samples.xi2_upper;
  header["x_lower"] = inst.x_box->lower();
  header["x_upper"] = inst.x_box->upper();
  header["y_lower"] = inst.y_box->lower();
  header["y_upper"] = inst.y_box->upper();
  std::string htext = header.dump();

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_instance: cannot open " + path);
  f.write("GANSAA1\n", 8);
  std::uint64_t hlen = htext.size();
  f.write(reinterpret_cast<const char*>(&hlen), 8);
  f.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  auto write_mat = [&f](const std::vector<Vec>& cols_by_sample,
                        std::size_t rows) {
    // column-major: one column per sample
    for (const Vec& col : cols_by_sample) {
      if (col.size() != rows)
        throw std::runtime_error("save_instance: ragged sample matrix");
      f.write(reinterpret_cast<const char*>(col.data()),
              static_cast<std::streamsize>(rows * sizeof(double)));
    }
  };
  write_mat(inst.samples.xi1, inst.shape.s1);
  write_mat(inst.samples.xi2, inst.shape.s2);
  if (!f) throw std::runtime_error("save_instance: write failed");
}

GanSaaInstance load_instance(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_instance: cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, "GANSAA1\n", 8) != 0)
    throw std::runtime_error("load_instance: bad magic");
  std::uint64_t hlen = 0;
  f.read(reinterpret_cast<char*>(&hlen), 8);
  std::string htext(hlen, '\0');
  f.read(htext.data(), static_cast<std::streamsize>(hlen));
  auto header = nlohmann::json::parse(htext);

  GanSaaInstance inst;
  inst.shape.s = header["s"].get<std::size_t>();
  inst.shape.s1 = header["s1"].get<std::size_t>();
  inst.shape.s2 = header["s2"].get<std::size_t>();
  inst.kink_tol = header["kink_tol"].get<double>();
  inst.samples.seed = header["seed"].get<std::uint64_t>();
  inst.samples.xi1_lower = header["xi1_lower"].get<Vec>();
  inst.samples.xi1_upper = header["xi1_upper"].get<Vec>();
  inst.samples.xi2_lower = header["xi2_lower"].get<Vec>();
  inst.samples.xi2_upper = header["xi2_upper"].get<Vec>();
  inst.x_box = std::make_shared<PolyhedralSet>(PolyhedralSet::box(
      header["x_lower"].get<Vec>(), header["x_upper"].get<Vec>()));
  inst.y_box = std::make_shared<PolyhedralSet>(PolyhedralSet::box(
      header["y_lower"].get<Vec>(), header["y_upper"].get<Vec>()));

  std::size_t count = header["N"].get<std::size_t>();
  auto read_mat = [&f, count](std::size_t rows) {
    std::vector<Vec> cols(count, Vec(rows));
    for (Vec& col : cols)
      f.read(reinterpret_cast<char*>(col.data()),
             static_cast<std::streamsize>(rows * sizeof(double)));
    return cols;
  };
  inst.samples.xi1 = read_mat(inst.shape.s1);
  inst.samples.xi2 = read_mat(inst.shape.s2);
  if (!f) throw std::runtime_error("load_instance: truncated file");
  return inst;
}

}  // namespace minimax::gan
