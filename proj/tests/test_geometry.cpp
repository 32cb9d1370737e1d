#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "minimax/polyhedral.hpp"

using namespace minimax;

namespace {

PolyhedralSet unit_box(std::size_t dim) {
  return PolyhedralSet::box(Vec(dim, -1.0), Vec(dim, 1.0));
}

// right triangle {x >= 0, y >= 0, x + y <= 1}
PolyhedralSet triangle() {
  Mat a(3, 2);
  a(0, 0) = -1.0;
  a(1, 1) = -1.0;
  a(2, 0) = 1.0;
  a(2, 1) = 1.0;
  return PolyhedralSet::halfspaces(a, Vec{0.0, 0.0, 1.0});
}

Vec random_point(const PolyhedralSet& set, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  if (set.kind() == PolyhedralSet::Kind::Box) {
    Vec z(set.dim());
    for (std::size_t i = 0; i < z.size(); ++i) {
      double u = uni(rng);
      // bias toward faces so active sets are exercised
      if (u < 0.25)
        z[i] = set.lower()[i];
      else if (u < 0.5)
        z[i] = set.upper()[i];
      else
        z[i] = set.lower()[i] + uni(rng) * (set.upper()[i] - set.lower()[i]);
    }
    return z;
  }
  // triangle barycentric draw, occasionally snapped to a vertex
  double a = uni(rng), b = uni(rng);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  double u = uni(rng);
  if (u < 0.2) return Vec{0.0, 0.0};
  if (u < 0.3) return Vec{1.0, 0.0};
  if (u < 0.4) return Vec{0.0, 1.0};
  if (u < 0.5) return Vec{a, 1.0 - a};
  return Vec{a, b};
}

Vec random_direction(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  double n = 0.0;
  while (n < 1e-12) {
    for (double& c : v) c = gauss(rng);
    n = norm(v);
  }
  return (1.0 / n) * v;
}

}  // namespace

TEST_CASE("box basics") {
  auto box = PolyhedralSet::box(Vec{-1.0, 0.0}, Vec{1.0, 2.0});
  CHECK(box.dim() == 2);
  CHECK(box.contains(Vec{0.0, 1.0}));
  CHECK(box.contains(Vec{1.0, 2.0}));
  CHECK_FALSE(box.contains(Vec{1.1, 1.0}));
  Vec proj = box.project(Vec{3.0, -5.0});
  CHECK(proj[0] == 1.0);
  CHECK(proj[1] == 0.0);
  Vec c = box.center();
  CHECK(c[0] == doctest::Approx(0.0));
  CHECK(c[1] == doctest::Approx(1.0));
  CHECK(box.diameter() == doctest::Approx(std::sqrt(4.0 + 4.0)));
  CHECK_THROWS_AS(PolyhedralSet::box(Vec{1.0}, Vec{0.0}), std::invalid_argument);
}

TEST_CASE("active rows follow the halfspace ordering") {
  auto box = PolyhedralSet::box(Vec{-1.0, -1.0}, Vec{1.0, 1.0});
  auto act = box.active_set(Vec{1.0, -1.0});
  // row 0: +e_0 <= 1 active, row 3: -e_1 <= 1 active
  REQUIRE(act.size() == 2);
  CHECK(act[0] == 0);
  CHECK(act[1] == 3);
  CHECK(box.active_set(Vec{0.0, 0.0}).empty());

  auto hs = box.as_halfspaces();
  CHECK(hs.a().rows == 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::mt19937_64 rng(trial);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    Vec z{uni(rng), uni(rng)};
    CHECK(box.contains(z) == hs.contains(z));
  }
}

TEST_CASE("randomized cone invariants hold on 1000 triples") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    PolyhedralSet set = trial % 3 == 0   ? triangle()
                        : trial % 3 == 1 ? unit_box(2)
                                         : unit_box(3);
    Vec z = random_point(set, rng);
    Vec v = random_direction(set.dim(), rng);

    bool tangent = set.tangent_cone_membership(z, v);
    if (tangent != set.t_circle_membership(z, v)) ++violations;
    if (tangent && !set.t_circle_line_search(z, v)) ++violations;

    // cone is scale invariant
    if (tangent != set.tangent_cone_membership(z, 3.7 * v)) ++violations;

    // convexity: average of two tangent directions stays tangent
    Vec w = random_direction(set.dim(), rng);
    if (set.tangent_cone_membership(z, w) && tangent) {
      Vec mid = 0.5 * (v + w);
      if (norm(mid) > 1e-9 && !set.tangent_cone_membership(z, mid))
        ++violations;
    }

    // polarity: active-row conic combos pair nonpositively with tangents
    auto hs = set.kind() == PolyhedralSet::Kind::Box ? set.as_halfspaces() : set;
    Vec g(set.dim(), 0.0);
    for (int row : hs.active_set(z)) axpy(uni(rng), hs.a().row(row), g);
    if (norm(g) > 1e-12) {
      if (!set.normal_cone_membership(z, g).member) ++violations;
      if (tangent && dot(g, v) > 1e-7) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("triangle tangent and normal cones at the vertices") {
  auto tri = triangle();
  Vec origin{0.0, 0.0};
  CHECK(tri.tangent_cone_membership(origin, Vec{1.0, 0.0}));
  CHECK(tri.tangent_cone_membership(origin, Vec{1.0, 1.0}));
  CHECK_FALSE(tri.tangent_cone_membership(origin, Vec{-1.0, 0.0}));
  CHECK(tri.normal_cone_membership(origin, Vec{-1.0, -2.0}).member);
  CHECK_FALSE(tri.normal_cone_membership(origin, Vec{1.0, 1.0}).member);

  Vec apex{1.0, 0.0};
  // rows active at (1,0): -y <= 0 and x + y <= 1
  CHECK(tri.normal_cone_membership(apex, Vec{1.0, 1.0}).member);
  CHECK(tri.normal_cone_membership(apex, Vec{0.5, -0.5}).member);
  CHECK_FALSE(tri.normal_cone_membership(apex, Vec{-1.0, 0.0}).member);
}

TEST_CASE("normal cone multipliers reproduce the fitted gradient") {
  auto box = unit_box(2);
  Vec corner{1.0, 1.0};
  Vec g{2.0, 0.5};
  auto res = box.normal_cone_membership(corner, g);
  REQUIRE(res.member);
  REQUIRE(res.active_rows.size() == res.multipliers.size());
  auto hs = box.as_halfspaces();
  Vec fit(2, 0.0);
  for (std::size_t k = 0; k < res.active_rows.size(); ++k) {
    CHECK(res.multipliers[k] >= 0.0);
    axpy(res.multipliers[k], hs.a().row(res.active_rows[k]), fit);
  }
  CHECK(norm(fit - g) <= 1e-7);

  // interior point: only the zero vector belongs
  auto interior = box.normal_cone_membership(Vec{0.2, -0.3}, g);
  CHECK_FALSE(interior.member);
  CHECK(interior.residual == doctest::Approx(norm(g)));
  CHECK(box.normal_cone_membership(Vec{0.2, -0.3}, Vec{0.0, 0.0}).member);
}

TEST_CASE("nnls recovers nonnegative combinations") {
  std::vector<Vec> rows = {Vec{1.0, 0.0}, Vec{1.0, 1.0}};
  Vec g = 2.0 * rows[0] + 0.7 * rows[1];
  auto fit = nnls_fit(rows, g);
  CHECK(fit.residual <= 1e-7);
  CHECK(fit.alpha[0] == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(fit.alpha[1] == doctest::Approx(0.7).epsilon(1e-5));

  // g outside the cone of {e_1}: best fit is alpha = 0
  auto miss = nnls_fit({Vec{1.0, 0.0}}, Vec{-1.0, 2.0});
  CHECK(miss.alpha[0] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(miss.residual == doctest::Approx(std::sqrt(5.0)).epsilon(1e-8));
}

TEST_CASE("sampled cone directions are unit, feasible and deterministic") {
  auto tri = triangle();
  Vec z{0.0, 0.0};
  auto dirs = tri.sample_cone_directions(z, 16, 7, ConeMode::Tangent);
  CHECK(dirs.size() >= 16);
  for (const Vec& v : dirs) {
    CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(tri.tangent_cone_membership(z, v));
  }
  auto again = tri.sample_cone_directions(z, 16, 7, ConeMode::Tangent);
  REQUIRE(again.size() == dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i)
    CHECK(norm(again[i] - dirs[i]) == 0.0);

  Vec grad{1.0, 2.0};
  auto gamma = tri.sample_cone_directions(z, 16, 7, ConeMode::Gamma, &grad);
  for (const Vec& v : gamma) {
    CHECK(tri.tangent_cone_membership(z, v));
    CHECK(std::abs(dot(v, grad)) <= 1e-7 * (1.0 + norm(grad)));
  }
}
