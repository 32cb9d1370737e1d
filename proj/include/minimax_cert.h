#ifndef MINIMAX_CERT_H
#define MINIMAX_CERT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque handle to a registered min-max problem instance. */
typedef struct mmc_problem mmc_problem;

enum {
  MMC_OK = 0,
  MMC_ERR_INVALID_ARGUMENT = 1,
  MMC_ERR_UNKNOWN_PROBLEM = 2,
  MMC_ERR_INFEASIBLE_POINT = 3,
  MMC_ERR_RUNTIME = 4
};

/* Message for the last failing call on this thread; owned by the library. */
const char* mmc_last_error(void);

/* Frees strings returned through char** out-parameters. */
void mmc_string_free(char* s);

/* example_id: quadratic-5xy, xy-cos, relu-net-F, nonsmooth-935,
 * quartic-4x2y2, gan-saa. params_json may be NULL; gan-saa reads dimensions,
 * N, seed and box bounds from it. */
int mmc_problem_open(const char* example_id, const char* params_json,
                     mmc_problem** out);
void mmc_problem_close(mmc_problem* p);
int mmc_problem_dims(const mmc_problem* p, size_t* n, size_t* m);
int mmc_problem_eval(const mmc_problem* p, const double* x, const double* y,
                     double* value);

/* options_json (may be NULL): {"order":1|2, "nonsmooth":bool,
 * "seed":uint, "scheme":{...}}. all_pass is 1 when no checked condition
 * failed. The report is canonical JSON. */
int mmc_verify(const mmc_problem* p, const double* x, const double* y,
               const char* options_json, char** report_json, int* all_pass);

/* options_json (may be NULL): {"seed":uint, "grid_nodes":int,
 * "delta_ladder":[...]}. nontrivial is 1 unless the label set is {"none"}. */
int mmc_classify(const mmc_problem* p, const double* x, const double* y,
                 const char* options_json, char** report_json, int* nontrivial);

/* Grid search for a global minimax candidate; buffers sized per dims. */
int mmc_search(const mmc_problem* p, double* x_out, double* y_out);

/* max-min minus min-max over delta-boxes around the set centers. */
int mmc_gap(const mmc_problem* p, double delta, double* gap);

int mmc_examples_manifest(char** json);

/* Builds a GAN SAA instance from params_json and serializes it to path. */
int mmc_gan_build(const char* params_json, const char* path);

/* Loads an instance, optionally runs projected GDA from the deterministic
 * start (when x/y are NULL), and certifies the resulting point. */
int mmc_gan_certify(const char* path, const double* x, const double* y,
                    const char* options_json, char** report_json,
                    int* all_pass);

/* options_json: {"s":..,"s1":..,"s2":..,"n_list":[...],"seed":..,
 * "trials":..,"n_ref":..}; returns the experiment CSV. */
int mmc_gan_converge(const char* options_json, char** csv);

#ifdef __cplusplus
}
#endif

#endif /* MINIMAX_CERT_H */
