#pragma once

#include <string>
#include <vector>

#include "minimax/problem.hpp"

namespace minimax {

// Inner-maximization grid: tensor grid over the bounded set followed by a
// golden-section refinement pass per coordinate around the best node.
struct GridSpec {
  int nodes_per_dim = 0;  // 0 = auto (401 for 1-D, coarser in higher dims)
  double refine_width = 1e-10;
  int resolve(std::size_t dim) const;
};

struct ExampleInfo {
  std::string id;
  std::string x_set;
  std::string y_set;
  std::string smoothness;
  std::string note;
};

const std::vector<std::string>& example_ids();
bool is_example_id(const std::string& id);
std::vector<ExampleInfo> examples_manifest();

// params_json is only consulted by gan-saa (dimensions, N, seed, bounds).
MinMaxProblem build_example(const std::string& id,
                            const std::string& params_json = "");

// phi(x) = max_{y in Y} f(x, y) over the grid with local refinement.
double envelope_phi(const MinMaxProblem& problem, const Vec& x,
                    const GridSpec& grid = {});

// max over the tau-ball {y in Y : ||y - y_center|| <= tau} instead of all Y.
double envelope_phi_ball(const MinMaxProblem& problem, const Vec& x,
                         const Vec& y_center, double tau,
                         const GridSpec& grid = {});

}  // namespace minimax
