#include "minimax/examples.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "minimax/gan.hpp"
#include "minimax/gridopt.hpp"
#include "minimax/relu_net.hpp"

namespace minimax {

int GridSpec::resolve(std::size_t dim) const {
  if (nodes_per_dim > 1) return nodes_per_dim;
  if (dim <= 1) return 401;
  if (dim == 2) return 61;
  return 15;
}

namespace {

double max_over_y(const MinMaxProblem& problem, const Vec& x,
                  const GridSpec& grid, const Vec* ball_center,
                  double ball_radius) {
  const auto& yset = *problem.y_set;
  if (yset.kind() != PolyhedralSet::Kind::Box)
    throw std::invalid_argument("envelope_phi: Y must be a bounded box");
  auto fn = [&](const Vec& y) { return problem.eval(x, y); };
  return grid_opt(fn, yset.lower(), yset.upper(), grid, true, ball_center,
                  ball_radius)
      .value;
}

std::shared_ptr<const PolyhedralSet> interval(double lo, double up) {
  return std::make_shared<PolyhedralSet>(PolyhedralSet::box({lo}, {up}));
}

std::shared_ptr<const PolyhedralSet> cube(std::size_t dim, double half) {
  return std::make_shared<PolyhedralSet>(
      PolyhedralSet::box(Vec(dim, -half), Vec(dim, half)));
}

MinMaxProblem make_quadratic_5xy() {
  MinMaxProblem p;
  p.id = "quadratic-5xy";
  p.n = p.m = 1;
  p.x_set = interval(-1, 1);
  p.y_set = interval(-1, 1);
  p.smoothness = Smoothness::SmoothC2;
  p.eval = [](const Vec& x, const Vec& y) {
    return -x[0] * x[0] + 5.0 * x[0] * y[0] - y[0] * y[0];
  };
  p.grad_x = [](const Vec& x, const Vec& y) { return Vec{-2.0 * x[0] + 5.0 * y[0]}; };
  p.grad_y = [](const Vec& x, const Vec& y) { return Vec{5.0 * x[0] - 2.0 * y[0]}; };
  p.hess_xx = [](const Vec&, const Vec&) { Mat h(1, 1); h(0, 0) = -2.0; return h; };
  p.hess_yy = [](const Vec&, const Vec&) { Mat h(1, 1); h(0, 0) = -2.0; return h; };
  return p;
}

MinMaxProblem make_xy_cos() {
  MinMaxProblem p;
  p.id = "xy-cos";
  p.n = p.m = 1;
  p.x_set = interval(-1, 1);
  p.y_set = interval(-5, 5);
  p.smoothness = Smoothness::SmoothC2;
  p.eval = [](const Vec& x, const Vec& y) {
    return x[0] * y[0] - std::cos(y[0]);
  };
  p.grad_x = [](const Vec&, const Vec& y) { return Vec{y[0]}; };
  p.grad_y = [](const Vec& x, const Vec& y) { return Vec{x[0] + std::sin(y[0])}; };
  p.hess_xx = [](const Vec&, const Vec&) { return Mat(1, 1, 0.0); };
  p.hess_yy = [](const Vec&, const Vec& y) {
    Mat h(1, 1);
    h(0, 0) = std::cos(y[0]);
    return h;
  };
  return p;
}

MinMaxProblem make_nonsmooth_935() {
  MinMaxProblem p;
  p.id = "nonsmooth-935";
  p.n = p.m = 1;
  p.x_set = interval(-1, 1);
  p.y_set = interval(-1, 1);
  p.smoothness = Smoothness::LocallyLipschitz;
  // |.|^p evaluated directly; branch-free and pure.
  p.eval = [](const Vec& x, const Vec& y) {
    double ax = std::abs(x[0]), ay = std::abs(y[0]);
    return -std::pow(ax, 9.0) + 0.6 * std::pow(ax, 3.0) * std::pow(ay, 3.0) -
           std::pow(ay, 5.0);
  };
  return p;
}

MinMaxProblem make_quartic_4x2y2() {
  MinMaxProblem p;
  p.id = "quartic-4x2y2";
  p.n = p.m = 1;
  p.x_set = interval(-1, 1);
  p.y_set = interval(-1, 1);
  p.smoothness = Smoothness::SmoothC2;
  p.eval = [](const Vec& x, const Vec& y) {
    double x2 = x[0] * x[0], y2 = y[0] * y[0];
    return -x2 * x2 + 4.0 * x2 * y2 - y2 * y2;
  };
  p.grad_x = [](const Vec& x, const Vec& y) {
    return Vec{-4.0 * x[0] * x[0] * x[0] + 8.0 * x[0] * y[0] * y[0]};
  };
  p.grad_y = [](const Vec& x, const Vec& y) {
    return Vec{8.0 * x[0] * x[0] * y[0] - 4.0 * y[0] * y[0] * y[0]};
  };
  p.hess_xx = [](const Vec& x, const Vec& y) {
    Mat h(1, 1);
    h(0, 0) = -12.0 * x[0] * x[0] + 8.0 * y[0] * y[0];
    return h;
  };
  p.hess_yy = [](const Vec& x, const Vec& y) {
    Mat h(1, 1);
    h(0, 0) = 8.0 * x[0] * x[0] - 12.0 * y[0] * y[0];
    return h;
  };
  return p;
}

const relu_net::Shape kReluShape{2, 2, 2};
const Vec kReluXi{0.7, -0.4};

MinMaxProblem make_relu_net_f() {
  MinMaxProblem p;
  p.id = "relu-net-F";
  p.n = kReluShape.param_count();
  p.m = 1;
  p.x_set = cube(p.n, 1.0);
  p.y_set = interval(-1, 1);
  p.smoothness = Smoothness::LocallyLipschitz;
  p.eval = [](const Vec& x, const Vec& y) {
    return relu_net::forward(kReluShape, x, kReluXi) - y[0] * y[0];
  };
  return p;
}

using Builder = std::function<MinMaxProblem(const std::string&)>;

const std::map<std::string, Builder>& registry() {
  static const std::map<std::string, Builder> reg = {
      {"quadratic-5xy", [](const std::string&) { return make_quadratic_5xy(); }},
      {"xy-cos", [](const std::string&) { return make_xy_cos(); }},
      {"relu-net-F", [](const std::string&) { return make_relu_net_f(); }},
      {"nonsmooth-935", [](const std::string&) { return make_nonsmooth_935(); }},
      {"quartic-4x2y2", [](const std::string&) { return make_quartic_4x2y2(); }},
      {"gan-saa",
       [](const std::string& params) { return gan::build_problem_from_json(params); }},
  };
  return reg;
}

}  // namespace

const std::vector<std::string>& example_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, _] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

bool is_example_id(const std::string& id) { return registry().count(id) > 0; }

std::vector<ExampleInfo> examples_manifest() {
  return {
      {"gan-saa", "box [-1,1]^n (n from shape)", "box [-1,1]^m",
       "smooth-C2 away from ReLU kinks",
       "SAA GAN objective; sigmoid discriminator, two-layer ReLU generator"},
      {"nonsmooth-935", "[-1,1]", "[-1,1]", "locally-Lipschitz",
       "-|x|^9 + 3/5 |x|^3 |y|^3 - |y|^5; d-stationary at the origin"},
      {"quadratic-5xy", "[-1,1]", "[-1,1]", "smooth-C2",
       "-x^2 + 5xy - y^2; global/local minimax at origin, no saddle point"},
      {"quartic-4x2y2", "[-1,1]", "[-1,1]", "smooth-C2",
       "-x^4 + 4x^2y^2 - y^4; degenerate second-order conditions at origin"},
      {"relu-net-F", "[-1,1]^12", "[-1,1]", "locally-Lipschitz",
       "two-layer ReLU network with squared-norm head, minus y^2"},
      {"xy-cos", "[-1,1]", "[-5,5]", "smooth-C2",
       "xy - cos(y); global minimax points that are not stationary"},
  };
}

MinMaxProblem build_example(const std::string& id, const std::string& params_json) {
  auto it = registry().find(id);
  if (it == registry().end())
    throw std::invalid_argument("unknown example id: " + id);
  return it->second(params_json);
}

double envelope_phi(const MinMaxProblem& problem, const Vec& x,
                    const GridSpec& grid) {
  if (!problem.x_set->contains(x))
    throw std::invalid_argument("envelope_phi: x infeasible");
  return max_over_y(problem, x, grid, nullptr, 0.0);
}

double envelope_phi_ball(const MinMaxProblem& problem, const Vec& x,
                         const Vec& y_center, double tau, const GridSpec& grid) {
  if (!problem.x_set->contains(x))
    throw std::invalid_argument("envelope_phi_ball: x infeasible");
  return max_over_y(problem, x, grid, &y_center, tau);
}

}  // namespace minimax
