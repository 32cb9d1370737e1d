#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minimax/deriv.hpp"
#include "minimax/examples.hpp"
#include "minimax/problem.hpp"

namespace minimax {

enum class Verdict { Pass, Fail, NotCheckable, Skipped };

std::string to_string(Verdict v);

struct ConditionResult {
  Verdict verdict = Verdict::Skipped;
  double residual = 0.0;
  Vec witness;              // violating direction, when verdict == Fail
  double witness_value = 0.0;
  std::string reason;       // skip / not-checkable explanation, FD notes
};

using ConditionMap = std::map<std::string, ConditionResult>;

struct StationarityReport {
  Point point;
  std::string problem_id;
  ConditionMap conditions;
  // Nonnegative conic multipliers: alpha fits -grad_x f over the active rows
  // of X, beta fits +grad_y f over the active rows of Y (halfspace row order,
  // zeros on inactive rows).
  std::optional<Vec> alpha, beta;
  std::uint64_t seed = 0;
  int direction_count = 0;

  bool all_checked_pass() const;
};

struct CertifyOptions {
  Tolerances tol;
  std::vector<double> delta_list = {1e-1, 1e-2, 1e-3};
  int samples = 16;
  std::uint64_t seed = 2024;
  QuotientScheme scheme;
  double deriv_tol = 1e-3;    // slack on nonsmooth estimates
  double ortho_filter = 1e-6; // slack when filtering estimated linear terms
};

void check_first_order_smooth(const MinMaxProblem& problem, const Point& pt,
                              StationarityReport& report,
                              const CertifyOptions& opts = {});
void check_second_order_smooth(const MinMaxProblem& problem, const Point& pt,
                               StationarityReport& report,
                               const CertifyOptions& opts = {});
void recover_kkt(const MinMaxProblem& problem, const Point& pt,
                 StationarityReport& report, const CertifyOptions& opts = {});
void check_d_stationarity(const MinMaxProblem& problem, const Point& pt,
                          StationarityReport& report,
                          const CertifyOptions& opts = {});

// Full report: smooth problems get gs2/gs6/FKKT/SKKT, locally Lipschitz ones
// get the NonS conditions; everything else is marked skipped.
StationarityReport certify_point(const MinMaxProblem& problem, const Point& pt,
                                 int order = 2, bool nonsmooth_requested = false,
                                 const CertifyOptions& opts = {});

struct ClassifyOptions {
  GridSpec grid;
  std::vector<double> delta_ladder = {0.2, 0.1, 0.05, 0.02, 0.01};  // x diameter scale
  std::vector<double> tau_powers = {1.0, 1.5, 2.0, 3.0};
  std::uint64_t seed = 2024;
  int ball_nodes = 17;     // per dim on the delta-ball grids
  std::size_t dim_cap = 2; // grid sweeps refuse higher-dimensional X
  CertifyOptions certify;
};

struct MinimaxClassification {
  std::vector<std::string> labels;  // sorted, possibly {"none"}
  std::optional<std::pair<double, double>> tau_fit;  // (c, p), tau = c * d^p
  double delta0 = 0.0;
  std::map<std::string, double> evidence;
  std::vector<std::string> notes;
};

MinimaxClassification classify_point(const MinMaxProblem& problem,
                                     const Point& pt,
                                     const ClassifyOptions& opts = {});

// argmin over the X grid of the envelope, paired with the inner argmax.
Point search_global_minimax(const MinMaxProblem& problem,
                            const GridSpec& grid = {});

// max-min minus min-max over the delta-boxes around the set centers.
double maxmin_gap(const MinMaxProblem& problem, double delta,
                  const GridSpec& grid = {});

std::string report_to_json(const StationarityReport& report);
std::string classification_to_json(const MinimaxClassification& cls);

}  // namespace minimax
