#include "minimax_cert.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"
#include "minimax/certify.hpp"
#include "minimax/examples.hpp"
#include "minimax/gan.hpp"
#include "minimax/report.hpp"

struct mmc_problem {
  minimax::MinMaxProblem problem;
};

namespace {

thread_local std::string g_last_error;

int set_error(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

minimax::Vec to_vec(const double* data, std::size_t count) {
  return minimax::Vec(data, data + count);
}

minimax::CertifyOptions parse_certify_options(const nlohmann::json& j) {
  minimax::CertifyOptions opts;
  if (j.contains("seed")) opts.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("scheme"))
    opts.scheme = minimax::QuotientScheme::parse_json(j["scheme"].dump());
  if (j.contains("samples")) opts.samples = j["samples"].get<int>();
  return opts;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return set_error(MMC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return set_error(MMC_ERR_RUNTIME, e.what());
  }
}

}  // namespace

extern "C" {

const char* mmc_last_error(void) { return g_last_error.c_str(); }

void mmc_string_free(char* s) { std::free(s); }

int mmc_problem_open(const char* example_id, const char* params_json,
                     mmc_problem** out) {
  if (!example_id || !out)
    return set_error(MMC_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  if (!minimax::is_example_id(example_id))
    return set_error(MMC_ERR_UNKNOWN_PROBLEM,
                     std::string("unknown example id: ") + example_id);
  return guarded([&]() -> int {
    auto* p = new mmc_problem{
        minimax::build_example(example_id, params_json ? params_json : "")};
    *out = p;
    return MMC_OK;
  });
}

void mmc_problem_close(mmc_problem* p) { delete p; }

int mmc_problem_dims(const mmc_problem* p, size_t* n, size_t* m) {
  if (!p) return set_error(MMC_ERR_INVALID_ARGUMENT, "null problem");
  if (n) *n = p->problem.n;
  if (m) *m = p->problem.m;
  return MMC_OK;
}

int mmc_problem_eval(const mmc_problem* p, const double* x, const double* y,
                     double* value) {
  if (!p || !x || !y || !value)
    return set_error(MMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *value = p->problem.eval(to_vec(x, p->problem.n), to_vec(y, p->problem.m));
    return MMC_OK;
  });
}

int mmc_verify(const mmc_problem* p, const double* x, const double* y,
               const char* options_json, char** report_json, int* all_pass) {
  if (!p || !x || !y || !report_json)
    return set_error(MMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    nlohmann::json j = nlohmann::json::object();
    if (options_json && *options_json) j = nlohmann::json::parse(options_json);
    int order = j.value("order", 2);
    bool nonsmooth = j.value("nonsmooth", false);
    minimax::CertifyOptions opts = parse_certify_options(j);
    minimax::Point pt{to_vec(x, p->problem.n), to_vec(y, p->problem.m)};
    if (!p->problem.feasible(pt))
      return set_error(MMC_ERR_INFEASIBLE_POINT, "point outside X x Y");
    auto report =
        minimax::certify_point(p->problem, pt, order, nonsmooth, opts);
    *report_json = dup_string(minimax::report_to_json(report));
    if (all_pass) *all_pass = report.all_checked_pass() ? 1 : 0;
    return MMC_OK;
  });
}

int mmc_classify(const mmc_problem* p, const double* x, const double* y,
                 const char* options_json, char** report_json,
                 int* nontrivial) {
  if (!p || !x || !y || !report_json)
    return set_error(MMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    nlohmann::json j = nlohmann::json::object();
    if (options_json && *options_json) j = nlohmann::json::parse(options_json);
    minimax::ClassifyOptions opts;
    if (j.contains("seed")) opts.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("grid_nodes"))
      opts.grid.nodes_per_dim = j["grid_nodes"].get<int>();
    if (j.contains("delta_ladder"))
      opts.delta_ladder = j["delta_ladder"].get<std::vector<double>>();
    opts.certify = parse_certify_options(j);
    minimax::Point pt{to_vec(x, p->problem.n), to_vec(y, p->problem.m)};
    if (!p->problem.feasible(pt))
      return set_error(MMC_ERR_INFEASIBLE_POINT, "point outside X x Y");
    auto cls = minimax::classify_point(p->problem, pt, opts);
    *report_json = dup_string(minimax::classification_to_json(cls));
    if (nontrivial)
      *nontrivial =
          (cls.labels.size() == 1 && cls.labels[0] == "none") ? 0 : 1;
    return MMC_OK;
  });
}

int mmc_search(const mmc_problem* p, double* x_out, double* y_out) {
  if (!p || !x_out || !y_out)
    return set_error(MMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    minimax::Point pt = minimax::search_global_minimax(p->problem);
    std::memcpy(x_out, pt.x.data(), pt.x.size() * sizeof(double));
    std::memcpy(y_out, pt.y.data(), pt.y.size() * sizeof(double));
    return MMC_OK;
  });
}

int mmc_gap(const mmc_problem* p, double delta, double* gap) {
  if (!p || !gap) return set_error(MMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *gap = minimax::maxmin_gap(p->problem, delta);
    return MMC_OK;
  });
}

int mmc_examples_manifest(char** json) {
  if (!json) return set_error(MMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& info : minimax::examples_manifest()) {
      nlohmann::json e;
      e["id"] = info.id;
      e["x_set"] = info.x_set;
      e["y_set"] = info.y_set;
      e["smoothness"] = info.smoothness;
      e["note"] = info.note;
      out.push_back(e);
    }
    *json = dup_string(minimax::canonical_dump(out));
    return MMC_OK;
  });
}

int mmc_gan_build(const char* params_json, const char* path) {
  if (!path) return set_error(MMC_ERR_INVALID_ARGUMENT, "null path");
  return guarded([&]() -> int {
    auto params = minimax::gan::GanBuildParams::parse_json(
        params_json ? params_json : "");
    minimax::gan::save_instance(minimax::gan::build_instance(params), path);
    return MMC_OK;
  });
}

int mmc_gan_certify(const char* path, const double* x, const double* y,
                    const char* options_json, char** report_json,
                    int* all_pass) {
  if (!path || !report_json)
    return set_error(MMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    auto inst = minimax::gan::load_instance(path);
    auto problem = minimax::gan::make_problem(inst);
    nlohmann::json j = nlohmann::json::object();
    if (options_json && *options_json) j = nlohmann::json::parse(options_json);
    minimax::CertifyOptions opts = parse_certify_options(j);
    minimax::Point pt;
    nlohmann::json extra;
    if (x && y) {
      pt = {to_vec(x, problem.n), to_vec(y, problem.m)};
    } else {
      auto gda = minimax::gan::gda_solve(
          inst, minimax::gan::default_start_x(inst.shape, inst.samples.seed),
          minimax::Vec(inst.shape.m(), 0.0));
      pt = {gda.x, gda.y};
      extra["solver"]["residual"] = gda.residual;
      extra["solver"]["iterations"] = gda.iterations;
      extra["solver"]["converged"] = gda.converged;
    }
    if (!problem.feasible(pt))
      return set_error(MMC_ERR_INFEASIBLE_POINT, "point outside X x Y");
    auto report = minimax::certify_point(problem, pt, 2, false, opts);
    auto out = nlohmann::json::parse(minimax::report_to_json(report));
    out["kink_certificate"] = minimax::gan::min_preactivation(inst, pt.x);
    for (auto it = extra.begin(); it != extra.end(); ++it)
      out[it.key()] = it.value();
    *report_json = dup_string(minimax::canonical_dump(out));
    if (all_pass) *all_pass = report.all_checked_pass() ? 1 : 0;
    return MMC_OK;
  });
}

int mmc_gan_converge(const char* options_json, char** csv) {
  if (!csv) return set_error(MMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    nlohmann::json j = nlohmann::json::object();
    if (options_json && *options_json) j = nlohmann::json::parse(options_json);
    minimax::gan::GanShape shape;
    if (j.contains("s")) shape.s = j["s"].get<std::size_t>();
    if (j.contains("s1")) shape.s1 = j["s1"].get<std::size_t>();
    if (j.contains("s2")) shape.s2 = j["s2"].get<std::size_t>();
    std::vector<std::size_t> n_list =
        j.value("n_list", std::vector<std::size_t>{16, 64, 256, 1024});
    std::uint64_t seed = j.value("seed", std::uint64_t{1});
    int trials = j.value("trials", 20);
    std::size_t n_ref = j.value("n_ref", std::size_t{16384});
    auto rows =
        minimax::gan::convergence_experiment(shape, n_list, seed, trials, n_ref);
    *csv = dup_string(minimax::gan::convergence_csv(rows));
    return MMC_OK;
  });
}

}  // extern "C"
