#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "minimax/linalg.hpp"
#include "minimax/problem.hpp"

namespace minimax::gan {

// Generator: G(x, xi2) = W2 (W1 xi2 + b1)_+ + b2 with W1 in R^{s x s2},
// W2 in R^{s1 x s}. Discriminator: D(y, xi1) = 1 / (1 + exp(y^T xi1)).
// x packs as (vec(W1), vec(W2), b1, b2), column-major.
struct GanShape {
  std::size_t s = 4;   // hidden width
  std::size_t s1 = 2;  // data dimension
  std::size_t s2 = 2;  // latent dimension
  std::size_t n() const { return s * s2 + s1 * s + s + s1; }
  std::size_t m() const { return s1; }
};

struct GanParams {
  Mat w1;  // s x s2
  Mat w2;  // s1 x s
  Vec b1;  // s
  Vec b2;  // s1
};

GanParams unpack(const GanShape& shape, const Vec& x);
Vec pack(const GanShape& shape, const GanParams& p);

struct SampleSet {
  std::vector<Vec> xi1;  // N samples in R^{s1}
  std::vector<Vec> xi2;  // N samples in R^{s2}
  std::uint64_t seed = 0;
  Vec xi1_lower, xi1_upper;  // uniform-box support
  Vec xi2_lower, xi2_upper;
};

struct GanSaaInstance {
  GanShape shape;
  SampleSet samples;
  std::shared_ptr<const PolyhedralSet> x_box;
  std::shared_ptr<const PolyhedralSet> y_box;
  double kink_tol = 1e-7;
};

struct KinkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Vec generator_forward(const GanShape& shape, const Vec& x, const Vec& xi2);
double discriminator_forward(const Vec& y, const Vec& xi1);

// Build parameters: dimensions, N, seed, boxes; samples are redrawn (bounded
// retries) until all hidden pre-activations at reference_x clear kink_tol.
struct GanBuildParams {
  GanShape shape;
  std::size_t sample_count = 256;
  std::uint64_t seed = 1;
  double x_bound = 1.0;   // X = [-x_bound, x_bound]^n
  double y_bound = 1.0;   // Y = [-y_bound, y_bound]^m
  double xi_bound = 1.0;  // uniform supports [-xi_bound, xi_bound]
  double kink_tol = 1e-7;
  Vec reference_x;  // defaults to the deterministic start point
  static GanBuildParams parse_json(const std::string& text);
};

GanSaaInstance build_instance(const GanBuildParams& params);

// Deterministic start used by the solver and the resampling guarantee.
Vec default_start_x(const GanShape& shape, std::uint64_t seed);

double min_preactivation(const GanSaaInstance& inst, const Vec& x);

double saa_objective(const GanSaaInstance& inst, const Vec& x, const Vec& y);
// Hand-written reverse-mode gradients; throws KinkError near ReLU kinks.
std::pair<Vec, Vec> saa_gradients(const GanSaaInstance& inst, const Vec& x,
                                  const Vec& y);
// Central differences of the analytic gradients (h = 1e-4), symmetrized.
std::pair<Mat, Mat> saa_hessian_blocks(const GanSaaInstance& inst, const Vec& x,
                                       const Vec& y);

MinMaxProblem make_problem(const GanSaaInstance& inst);
MinMaxProblem build_problem_from_json(const std::string& params_json);

struct GdaResult {
  Vec x, y;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};
// Projected gradient descent-ascent with fixed steps; produces candidate
// points for certification only.
GdaResult gda_solve(const GanSaaInstance& inst, Vec x0, Vec y0,
                    double step = 1e-2, double tol = 1e-6,
                    int max_iter = 100000);

double first_order_residual(const GanSaaInstance& inst, const Vec& x,
                            const Vec& y);

struct ConvergenceRow {
  std::size_t sample_count = 0;
  double median_residual = 0.0;
  double p90_residual = 0.0;
  int nonconverged = 0;
};
std::vector<ConvergenceRow> convergence_experiment(
    const GanShape& shape, const std::vector<std::size_t>& n_list,
    std::uint64_t seed, int trials, std::size_t n_ref = 16384);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

// JSON header + little-endian column-major sample matrices.
void save_instance(const GanSaaInstance& inst, const std::string& path);
GanSaaInstance load_instance(const std::string& path);

}  // namespace minimax::gan
