#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "minimax/gan.hpp"
#include "minimax/problem.hpp"

using namespace minimax;
using namespace minimax::gan;

namespace {

GanSaaInstance small_instance(std::size_t count = 8, std::uint64_t seed = 3) {
  GanBuildParams params;
  params.shape = GanShape{3, 2, 2};
  params.sample_count = count;
  params.seed = seed;
  return build_instance(params);
}

// straight-line duplicate of the per-sample objective term
double naive_term(const GanSaaInstance& inst, const Vec& x, const Vec& y,
                  std::size_t k) {
  Vec g = generator_forward(inst.shape, x, inst.samples.xi2[k]);
  double u1 = dot(y, inst.samples.xi1[k]);
  double u2 = dot(y, g);
  REQUIRE(std::abs(u1) <= 30.0);
  REQUIRE(std::abs(u2) <= 30.0);
  double d_real = 1.0 / (1.0 + std::exp(u1));
  double d_fake = 1.0 / (1.0 + std::exp(u2));
  return std::log(d_real) + std::log(1.0 - d_fake);
}

}  // namespace

TEST_CASE("pack and unpack are inverse bijections") {
  GanShape shape{3, 2, 4};
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  Vec x(shape.n());
  for (double& v : x) v = gauss(rng);
  Vec back = pack(shape, unpack(shape, x));
  REQUIRE(back.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == x[i]);
}

TEST_CASE("generator forward matches a direct evaluation") {
  GanShape shape{2, 2, 1};
  GanParams p;
  p.w1 = Mat(2, 1);
  p.w1(0, 0) = 1.0;
  p.w1(1, 0) = -2.0;
  p.w2 = Mat(2, 2);
  p.w2(0, 0) = 3.0;
  p.w2(0, 1) = 1.0;
  p.w2(1, 0) = 0.0;
  p.w2(1, 1) = -1.0;
  p.b1 = Vec{0.5, 0.0};
  p.b2 = Vec{-1.0, 2.0};
  Vec x = pack(shape, p);
  Vec out = generator_forward(shape, x, Vec{0.7});
  double h0 = std::max(1.0 * 0.7 + 0.5, 0.0);
  double h1 = std::max(-2.0 * 0.7 + 0.0, 0.0);
  CHECK(out[0] == doctest::Approx(3.0 * h0 + 1.0 * h1 - 1.0).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(0.0 * h0 - 1.0 * h1 + 2.0).epsilon(1e-14));
}

TEST_CASE("discriminator is the logistic of the negative inner product") {
  CHECK(discriminator_forward(Vec{0.0, 0.0}, Vec{0.3, -0.2}) == 0.5);
  double v = discriminator_forward(Vec{1.0, 1.0}, Vec{20.0, 20.0});
  CHECK(v == doctest::Approx(1.0 / (1.0 + std::exp(40.0))));
  double w = discriminator_forward(Vec{1.0}, Vec{-3.0});
  CHECK(w == doctest::Approx(1.0 / (1.0 + std::exp(-3.0))).epsilon(1e-14));
}

TEST_CASE("objective at y = 0 is exactly -2 log 2") {
  auto inst = small_instance();
  Vec x = default_start_x(inst.shape, 3);
  Vec y(inst.shape.m(), 0.0);
  CHECK(saa_objective(inst, x, y) ==
        doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("objective equals the naive per-sample average") {
  auto inst = small_instance();
  Vec x = default_start_x(inst.shape, 3);
  Vec y{0.2, -0.1};
  double naive = 0.0;
  for (std::size_t k = 0; k < inst.samples.xi1.size(); ++k)
    naive += naive_term(inst, x, y, k);
  naive /= static_cast<double>(inst.samples.xi1.size());
  CHECK(saa_objective(inst, x, y) == doctest::Approx(naive).epsilon(1e-12));
  CHECK(naive < 0.0);
}

TEST_CASE("analytic gradients match finite differences") {
  auto inst = small_instance(4, 7);
  Vec x = default_start_x(inst.shape, 7);
  Vec y{0.15, -0.3};
  auto [gx, gy] = saa_gradients(inst, x, y);

  Vec z = x;
  z.insert(z.end(), y.begin(), y.end());
  auto joint = [&](const Vec& zz) {
    Vec xx(zz.begin(), zz.begin() + static_cast<long>(x.size()));
    Vec yy(zz.begin() + static_cast<long>(x.size()), zz.end());
    return saa_objective(inst, xx, yy);
  };
  Vec fd = fd_gradient(joint, z);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(gx[i] == doctest::Approx(fd[i]).epsilon(1e-5).scale(1.0));
  for (std::size_t j = 0; j < y.size(); ++j)
    CHECK(gy[j] == doctest::Approx(fd[x.size() + j]).epsilon(1e-5).scale(1.0));
}

TEST_CASE("y gradient and curvature have closed forms at y = 0") {
  auto inst = small_instance();
  Vec x = default_start_x(inst.shape, 3);
  Vec y(inst.shape.m(), 0.0);
  auto [gx, gy] = saa_gradients(inst, x, y);
  std::size_t m = inst.shape.m(), count = inst.samples.xi1.size();

  Vec expect(m, 0.0);
  Mat curv(m, m);
  for (std::size_t k = 0; k < count; ++k) {
    Vec g = generator_forward(inst.shape, x, inst.samples.xi2[k]);
    axpy(-0.5, inst.samples.xi1[k], expect);
    axpy(0.5, g, expect);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        curv(i, j) += -0.25 * (inst.samples.xi1[k][i] * inst.samples.xi1[k][j] +
                               g[i] * g[j]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    expect[j] /= static_cast<double>(count);
    CHECK(gy[j] == doctest::Approx(expect[j]).epsilon(1e-12).scale(1.0));
  }
  auto [hxx, hyy] = saa_hessian_blocks(inst, x, y);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      CHECK(hyy(i, j) == doctest::Approx(curv(i, j) /
                                         static_cast<double>(count))
                             .epsilon(1e-5)
                             .scale(1.0));
  CHECK(hxx.rows == inst.shape.n());
}

TEST_CASE("strict gradients refuse points on a kink") {
  auto inst = small_instance();
  Vec x(inst.shape.n(), 0.0);  // all pre-activations vanish
  Vec y(inst.shape.m(), 0.0);
  CHECK(min_preactivation(inst, x) <= inst.kink_tol);
  CHECK_THROWS_AS(saa_gradients(inst, x, y), KinkError);
}

TEST_CASE("built instances clear the kinks at the reference point") {
  for (std::uint64_t seed : {1ull, 5ull, 9ull}) {
    auto inst = small_instance(16, seed);
    CHECK(min_preactivation(inst, default_start_x(inst.shape, seed)) >
          inst.kink_tol);
  }
}

TEST_CASE("instances survive a save and load round trip bit for bit") {
  auto inst = small_instance(8, 11);
  std::string path = "gan_roundtrip.bin";
  save_instance(inst, path);
  auto back = load_instance(path);
  std::remove(path.c_str());

  CHECK(back.shape.s == inst.shape.s);
  CHECK(back.shape.s1 == inst.shape.s1);
  CHECK(back.shape.s2 == inst.shape.s2);
  CHECK(back.samples.seed == inst.samples.seed);
  CHECK(back.kink_tol == inst.kink_tol);
  REQUIRE(back.samples.xi1.size() == inst.samples.xi1.size());
  for (std::size_t k = 0; k < inst.samples.xi1.size(); ++k) {
    for (std::size_t i = 0; i < inst.shape.s1; ++i)
      CHECK(back.samples.xi1[k][i] == inst.samples.xi1[k][i]);
    for (std::size_t i = 0; i < inst.shape.s2; ++i)
      CHECK(back.samples.xi2[k][i] == inst.samples.xi2[k][i]);
  }
  CHECK(back.x_box->contains(Vec(back.shape.n(), 0.0)));
}

TEST_CASE("gradient steps reduce the first-order residual") {
  auto inst = small_instance(8, 2);
  Vec x0 = default_start_x(inst.shape, 2);
  Vec y0(inst.shape.m(), 0.0);
  CHECK(first_order_residual(inst, x0, y0) >= 0.0);
  auto res = gda_solve(inst, x0, y0, 1e-2, 1e-6, 20000);
  CHECK(res.residual == doctest::Approx(first_order_residual(inst, res.x, res.y))
                            .epsilon(1e-12));
  CHECK(res.iterations <= 20000);
  if (res.converged) CHECK(res.residual < 1e-6);
  Point pt{res.x, res.y};
  CHECK(make_problem(inst).feasible(pt));
}

TEST_CASE("builds and the convergence summary are deterministic") {
  auto a = small_instance(8, 21);
  auto b = small_instance(8, 21);
  for (std::size_t k = 0; k < a.samples.xi1.size(); ++k)
    CHECK(norm(a.samples.xi1[k] - b.samples.xi1[k]) == 0.0);

  GanShape shape{2, 2, 2};
  auto rows = convergence_experiment(shape, {4, 8}, 77, 2, 32);
  auto rows2 = convergence_experiment(shape, {4, 8}, 77, 2, 32);
  std::string csv = convergence_csv(rows);
  CHECK(csv == convergence_csv(rows2));
  CHECK(csv.rfind("N,median_residual,p90_residual,nonconverged\n", 0) == 0);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].sample_count == 4);
  CHECK(rows[1].sample_count == 8);
  for (const auto& r : rows) {
    CHECK(r.median_residual >= 0.0);
    CHECK(r.p90_residual >= r.median_residual - 1e-15);
  }
}
