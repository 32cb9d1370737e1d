#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "minimax_cert.h"

namespace {

int fail_usage(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

bool parse_block(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) return false;
    } catch (...) {
      return false;
    }
  }
  return !out.empty();
}

// "x1,...,xn;y1,...,ym"
bool parse_point(const std::string& text, std::vector<double>& x,
                 std::vector<double>& y) {
  auto sep = text.find(';');
  if (sep == std::string::npos) return false;
  return parse_block(text.substr(0, sep), x) &&
         parse_block(text.substr(sep + 1), y);
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  f << text;
  if (!f) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 2;
  }
  return 0;
}

struct ProblemHandle {
  mmc_problem* p = nullptr;
  ~ProblemHandle() {
    if (p) mmc_problem_close(p);
  }
};

int open_problem(const std::string& id, const std::string& params,
                 ProblemHandle& h) {
  int rc = mmc_problem_open(id.c_str(), params.empty() ? nullptr : params.c_str(),
                            &h.p);
  if (rc != MMC_OK) return fail_usage(mmc_last_error());
  return 0;
}

int check_point_dims(mmc_problem* p, const std::vector<double>& x,
                     const std::vector<double>& y) {
  size_t n = 0, m = 0;
  mmc_problem_dims(p, &n, &m);
  if (x.size() != n || y.size() != m)
    return fail_usage("point has wrong dimensions (expected " +
                      std::to_string(n) + ";" + std::to_string(m) + ")");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certification of candidate points for constrained min-max "
               "problems"};
  app.require_subcommand(1);

  std::string problem_id, params, point_text, scheme, out_path, instance_path;
  std::string delta_ladder_text;
  unsigned long long seed = 2024;
  int order = 2;
  int grid_nodes = 0;
  bool nonsmooth = false;
  double delta = 1.0;
  std::vector<std::size_t> n_list = {16, 64, 256, 1024};
  int trials = 20;
  std::size_t n_ref = 16384;
  std::size_t gs = 4, gs1 = 2, gs2 = 2;

  auto add_common = [&](CLI::App* cmd, bool needs_point) {
    cmd->add_option("--problem", problem_id, "example id")->required();
    cmd->add_option("--params", params, "problem parameters (JSON)");
    if (needs_point)
      cmd->add_option("--point", point_text, "candidate point as x,..;y,..")
          ->required();
    cmd->add_option("--seed", seed, "rng seed");
    cmd->add_option("--out", out_path, "write the report here");
  };

  auto* verify = app.add_subcommand("verify", "check stationarity conditions");
  add_common(verify, true);
  verify->add_option("--order", order, "1 = first order only")
      ->check(CLI::IsMember({1, 2}));
  verify->add_flag("--nonsmooth", nonsmooth, "force the d-stationarity checks");
  verify->add_option("--scheme", scheme, "difference-quotient scheme (JSON)");

  auto* classify = app.add_subcommand("classify", "label per the definitions");
  add_common(classify, true);
  classify->add_option("--grid", grid_nodes, "grid nodes per dimension");
  classify->add_option("--delta-ladder", delta_ladder_text,
                       "comma-separated diameter fractions");

  auto* search = app.add_subcommand("search", "grid search a global minimax point");
  add_common(search, false);

  auto* gap = app.add_subcommand("gap", "max-min minus min-max on delta boxes");
  add_common(gap, false);
  gap->add_option("--delta", delta, "box half-width")->required();

  auto* gan_build = app.add_subcommand("gan-build", "sample and save an instance");
  gan_build->add_option("--params", params, "build parameters (JSON)");
  gan_build->add_option("--out", out_path, "instance path")->required();

  auto* gan_certify =
      app.add_subcommand("gan-certify", "solve (if no point) and certify");
  gan_certify->add_option("--instance", instance_path, "instance path")
      ->required();
  gan_certify->add_option("--point", point_text, "candidate point as x,..;y,..");
  gan_certify->add_option("--seed", seed, "rng seed");
  gan_certify->add_option("--out", out_path, "write the report here");

  auto* gan_converge =
      app.add_subcommand("gan-converge", "residual vs sample count experiment");
  gan_converge->add_option("--n-list", n_list, "sample counts");
  gan_converge->add_option("--trials", trials, "trials per N");
  gan_converge->add_option("--n-ref", n_ref, "reference sample count");
  gan_converge->add_option("--seed", seed, "rng seed");
  gan_converge->add_option("--s", gs, "hidden width");
  gan_converge->add_option("--s1", gs1, "data dimension");
  gan_converge->add_option("--s2", gs2, "latent dimension");
  gan_converge->add_option("--out", out_path, "write the CSV here");

  auto* examples = app.add_subcommand("examples", "list registered problems");
  examples->add_option("--out", out_path, "write the manifest here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (examples->parsed()) {
    char* json = nullptr;
    if (mmc_examples_manifest(&json) != MMC_OK) return fail_usage(mmc_last_error());
    std::string text = json;
    mmc_string_free(json);
    return emit(text, out_path);
  }

  if (gan_build->parsed()) {
    if (mmc_gan_build(params.empty() ? nullptr : params.c_str(),
                      out_path.c_str()) != MMC_OK)
      return fail_usage(mmc_last_error());
    return 0;
  }

  if (gan_converge->parsed()) {
    std::ostringstream opts;
    opts << "{\"s\":" << gs << ",\"s1\":" << gs1 << ",\"s2\":" << gs2
         << ",\"seed\":" << seed << ",\"trials\":" << trials
         << ",\"n_ref\":" << n_ref << ",\"n_list\":[";
    for (std::size_t i = 0; i < n_list.size(); ++i)
      opts << (i ? "," : "") << n_list[i];
    opts << "]}";
    char* csv = nullptr;
    if (mmc_gan_converge(opts.str().c_str(), &csv) != MMC_OK)
      return fail_usage(mmc_last_error());
    std::string text = csv;
    mmc_string_free(csv);
    return emit(text, out_path);
  }

  if (gan_certify->parsed()) {
    std::vector<double> x, y;
    const double *xp = nullptr, *yp = nullptr;
    if (!point_text.empty()) {
      if (!parse_point(point_text, x, y))
        return fail_usage("malformed --point (expected x,..;y,..)");
      xp = x.data();
      yp = y.data();
    }
    std::string opts = "{\"seed\":" + std::to_string(seed) + "}";
    char* report = nullptr;
    int all_pass = 0;
    int rc = mmc_gan_certify(instance_path.c_str(), xp, yp, opts.c_str(),
                             &report, &all_pass);
    if (rc != MMC_OK) return fail_usage(mmc_last_error());
    std::string text = report;
    mmc_string_free(report);
    int erc = emit(text, out_path);
    return erc != 0 ? erc : (all_pass ? 0 : 1);
  }

  // remaining verbs address a registered problem
  ProblemHandle h;
  if (int rc = open_problem(problem_id, params, h); rc != 0) return rc;

  if (search->parsed()) {
    size_t n = 0, m = 0;
    mmc_problem_dims(h.p, &n, &m);
    std::vector<double> x(n), y(m);
    if (mmc_search(h.p, x.data(), y.data()) != MMC_OK)
      return fail_usage(mmc_last_error());
    char buf[40];
    std::string text = "{\"x\":[";
    for (size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "%.12e", x[i]);
      text += std::string(i ? "," : "") + buf;
    }
    text += "],\"y\":[";
    for (size_t i = 0; i < m; ++i) {
      std::snprintf(buf, sizeof(buf), "%.12e", y[i]);
      text += std::string(i ? "," : "") + buf;
    }
    text += "]}";
    return emit(text, out_path);
  }

  if (gap->parsed()) {
    double g = 0.0;
    if (mmc_gap(h.p, delta, &g) != MMC_OK) return fail_usage(mmc_last_error());
    char buf[64];
    std::snprintf(buf, sizeof(buf), "{\"gap\":%.12e}", g);
    return emit(buf, out_path);
  }

  std::vector<double> x, y;
  if (!parse_point(point_text, x, y))
    return fail_usage("malformed --point (expected x,..;y,..)");
  if (int rc = check_point_dims(h.p, x, y); rc != 0) return rc;

  if (verify->parsed()) {
    std::string opts = "{\"order\":" + std::to_string(order) +
                       ",\"nonsmooth\":" + (nonsmooth ? "true" : "false") +
                       ",\"seed\":" + std::to_string(seed);
    if (!scheme.empty()) opts += ",\"scheme\":" + scheme;
    opts += "}";
    char* report = nullptr;
    int all_pass = 0;
    int rc = mmc_verify(h.p, x.data(), y.data(), opts.c_str(), &report,
                        &all_pass);
    if (rc != MMC_OK) return fail_usage(mmc_last_error());
    std::string text = report;
    mmc_string_free(report);
    int erc = emit(text, out_path);
    return erc != 0 ? erc : (all_pass ? 0 : 1);
  }

  if (classify->parsed()) {
    std::string opts = "{\"seed\":" + std::to_string(seed);
    if (grid_nodes > 0) opts += ",\"grid_nodes\":" + std::to_string(grid_nodes);
    if (!delta_ladder_text.empty()) {
      std::vector<double> ladder;
      if (!parse_block(delta_ladder_text, ladder))
        return fail_usage("malformed --delta-ladder");
      opts += ",\"delta_ladder\":[";
      char buf[40];
      for (std::size_t i = 0; i < ladder.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", ladder[i]);
        opts += std::string(i ? "," : "") + buf;
      }
      opts += "]";
    }
    opts += "}";
    char* report = nullptr;
    int nontrivial = 0;
    int rc = mmc_classify(h.p, x.data(), y.data(), opts.c_str(), &report,
                          &nontrivial);
    if (rc != MMC_OK) return fail_usage(mmc_last_error());
    std::string text = report;
    mmc_string_free(report);
    int erc = emit(text, out_path);
    return erc != 0 ? erc : (nontrivial ? 0 : 1);
  }

  return fail_usage("no subcommand handled");
}
