#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "minimax/deriv.hpp"

using namespace minimax;

namespace {

const ScalarFn kAbs = [](const Vec& z) { return std::abs(z[0]); };
const ScalarFn kNegAbs = [](const Vec& z) { return -std::abs(z[0]); };

// smooth 2-D probe with hand-computed derivatives
const ScalarFn kSmooth = [](const Vec& z) {
  return std::sin(z[0]) + z[0] * z[0] * z[1] + 0.5 * z[1] * z[1];
};
Vec smooth_grad(const Vec& z) {
  return Vec{std::cos(z[0]) + 2.0 * z[0] * z[1], z[0] * z[0] + z[1]};
}
Mat smooth_hess(const Vec& z) {
  Mat h(2, 2);
  h(0, 0) = -std::sin(z[0]) + 2.0 * z[1];
  h(0, 1) = h(1, 0) = 2.0 * z[0];
  h(1, 1) = 1.0;
  return h;
}

}  // namespace

TEST_CASE("kink functions match the closed-form limits") {
  Vec origin{0.0};
  for (double s : {1.0, -1.0}) {
    Vec v{s};
    auto sub_abs = subderivative(kAbs, origin, v);
    CHECK(sub_abs.converged);
    CHECK(sub_abs.value == doctest::Approx(1.0).epsilon(1e-4));

    auto sub_neg = subderivative(kNegAbs, origin, v);
    CHECK(sub_neg.value == doctest::Approx(-1.0).epsilon(1e-4));

    // Clarke limit of -|x| picks up the steeper nearby slopes
    auto cl_neg = clarke_directional(kNegAbs, origin, v);
    CHECK(cl_neg.value == doctest::Approx(1.0).epsilon(1e-3));
    auto cl_abs = clarke_directional(kAbs, origin, v);
    CHECK(cl_abs.value == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("smooth agreement with gradients and hessians") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Vec z{uni(rng), uni(rng)};
    Vec v{uni(rng), uni(rng)};
    if (norm(v) < 0.1) continue;
    Vec g = smooth_grad(z);
    Mat h = smooth_hess(z);

    double gv = dot(g, v);
    CHECK(directional(kSmooth, z, v).value ==
          doctest::Approx(gv).epsilon(1e-5).scale(1.0));
    CHECK(subderivative(kSmooth, z, v).value ==
          doctest::Approx(gv).epsilon(1e-4).scale(1.0));
    CHECK(clarke_directional(kSmooth, z, v).value ==
          doctest::Approx(gv).epsilon(1e-4).scale(1.0));

    double vhv = quad_form(h, v);
    CHECK(second_directional(kSmooth, z, v).value ==
          doctest::Approx(vhv).epsilon(1e-3).scale(1.0));
    CHECK(second_subderivative_pinned(kSmooth, z, g, v).value ==
          doctest::Approx(vhv).epsilon(1e-3).scale(1.0));

    Vec u{uni(rng), uni(rng)};
    if (norm(u) < 0.1) continue;
    double uhv = dot(u, h.mul(v));
    CHECK(generalized_second(kSmooth, z, u, v).value ==
          doctest::Approx(uhv).epsilon(1e-3).scale(1.0));
  }
}

TEST_CASE("unpinned second subderivative agrees on a smooth probe") {
  Vec z{0.3, -0.4};
  Vec w{0.8, 0.6};
  double whw = quad_form(smooth_hess(z), w);
  CHECK(second_subderivative(kSmooth, z, w).value ==
        doctest::Approx(whw).epsilon(5e-3).scale(1.0));
}

TEST_CASE("positive homogeneity is exact in floating point") {
  Vec z{0.3, -0.4};
  Vec v{0.6, 0.8};
  // powers of two keep the unit-direction computation bit-identical
  for (double a : {2.0, 0.25, 8.0}) {
    Vec av = a * v;
    CHECK(subderivative(kSmooth, z, av).value ==
          doctest::Approx(a * subderivative(kSmooth, z, v).value)
              .epsilon(1e-12));
    CHECK(clarke_directional(kSmooth, z, av).value ==
          doctest::Approx(a * clarke_directional(kSmooth, z, v).value)
              .epsilon(1e-12));
    CHECK(second_directional(kSmooth, z, av).value ==
          doctest::Approx(a * a * second_directional(kSmooth, z, v).value)
              .epsilon(1e-12));
  }
}

TEST_CASE("clarke limit dominates the one-sided limit") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto g = [](const Vec& z) {
    return std::abs(z[0]) - 0.5 * std::abs(z[1]) + 0.1 * z[0] * z[1];
  };
  for (int trial = 0; trial < 20; ++trial) {
    Vec z{uni(rng), uni(rng)};
    if (trial % 2 == 0) z[0] = 0.0;  // sit on the kink half the time
    Vec v{uni(rng), uni(rng)};
    if (norm(v) < 0.1) continue;
    double lower = directional(g, z, v).value;
    double upper = clarke_directional(g, z, v).value;
    CHECK(upper >= lower - 1e-3);
  }
}

TEST_CASE("divergent quotients hit the cap and report it") {
  Vec origin{0.0};
  auto est = second_subderivative_pinned(kAbs, origin, Vec{0.0}, Vec{1.0});
  CHECK(est.capped);
  CHECK_FALSE(est.converged);
  CHECK(est.value == 1e12);
}

TEST_CASE("scheme serialization round trips and validates") {
  QuotientScheme s;
  s.t_sequence = {1e-1, 1e-3, 1e-5};
  s.perturbation_count = 8;
  s.seed = 42;
  QuotientScheme r = QuotientScheme::parse_json(s.to_json());
  CHECK(r.t_sequence == s.t_sequence);
  CHECK(r.perturbation_count == 8);
  CHECK(r.seed == 42);
  CHECK(r.to_json() == s.to_json());

  CHECK_THROWS_AS(QuotientScheme::parse_json("{\"t_sequence\":[1e-3,1e-2]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(QuotientScheme::parse_json("{\"t_sequence\":[1e-3]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(QuotientScheme::parse_json("{\"t_sequence\":[1e-2,-1.0]}"),
                  std::invalid_argument);

  auto ladder = s.second_order_ts();
  REQUIRE(ladder.size() == s.t_sequence.size());
  for (std::size_t i = 0; i < ladder.size(); ++i)
    CHECK(ladder[i] == doctest::Approx(std::sqrt(s.t_sequence[i])));
}
