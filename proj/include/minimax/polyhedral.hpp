#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minimax/linalg.hpp"

namespace minimax {

struct Tolerances {
  double feas = 1e-9;
  double active = 1e-9;
  double orth = 1e-8;
  double kkt = 1e-7;
};

enum class ConeMode { Tangent, TCircle, Gamma };

struct NormalConeResult {
  bool member = false;
  double residual = 0.0;
  Vec multipliers;  // nonnegative, one per active row (halfspace order)
  std::vector<int> active_rows;
};

// Box [lower, upper] or general {z : A z <= b}. Immutable after construction.
class PolyhedralSet {
 public:
  enum class Kind { Box, Halfspaces };

  static PolyhedralSet box(Vec lower, Vec upper);
  static PolyhedralSet halfspaces(Mat a, Vec b);
  static PolyhedralSet parse_json(const std::string& text);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  const Mat& a() const { return a_; }
  const Vec& b() const { return b_; }

  // Box sets expressed as rows: +e_i <= upper_i (rows 0..n-1), then
  // -e_i <= -lower_i (rows n..2n-1).
  PolyhedralSet as_halfspaces() const;

  bool contains(const Vec& z, double tol_feas = 1e-9) const;
  Vec project(const Vec& z) const;  // boxes only
  Vec center() const;

  std::vector<int> active_set(const Vec& z, double tol_active = 1e-9) const;

  bool tangent_cone_membership(const Vec& z, const Vec& v,
                               double tol_orth = 1e-8) const;
  // Algebraic T-circle test; equals the tangent test for polyhedra.
  bool t_circle_membership(const Vec& z, const Vec& v,
                           double tol_orth = 1e-8) const;
  // Cross-validation fallback: z + lambda v in set for some lambda in a ladder.
  bool t_circle_line_search(const Vec& z, const Vec& v,
                            double tol_feas = 1e-9) const;

  NormalConeResult normal_cone_membership(const Vec& z, const Vec& g,
                                          const Tolerances& tol = {}) const;
  // Distance-like residual of g against the normal cone at z.
  double normal_cone_residual(const Vec& z, const Vec& g,
                              const Tolerances& tol = {}) const;

  // Seeded unit directions inside the requested cone. Gamma mode projects
  // onto the hyperplane orthogonal to `gradient` and rejects directions the
  // projection pushes out of the cone. Empty result means the cone is {0}.
  std::vector<Vec> sample_cone_directions(const Vec& z, int count,
                                          std::uint64_t seed, ConeMode mode,
                                          const Vec* gradient = nullptr,
                                          const Tolerances& tol = {}) const;

  double diameter() const;  // finite boxes; crude bound for halfspaces

 private:
  PolyhedralSet() = default;
  Kind kind_ = Kind::Box;
  std::size_t dim_ = 0;
  Vec lower_, upper_;  // box
  Mat a_;              // halfspaces
  Vec b_;
};

// min ||g - M^T alpha||^2 over alpha >= 0, M rows are the columns of the fit.
// Projected gradient with Armijo backtracking.
struct NnlsResult {
  Vec alpha;
  double residual = 0.0;
  bool converged = false;
};
NnlsResult nnls_fit(const std::vector<Vec>& rows, const Vec& g,
                    int max_iter = 10000, double tol = 1e-12);

}  // namespace minimax
