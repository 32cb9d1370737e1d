#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstring>
#include <string>

#include "doctest.h"
#include "minimax_cert.h"

namespace {

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out = s;
  mmc_string_free(s);
  return out;
}

struct Handle {
  mmc_problem* p = nullptr;
  ~Handle() {
    if (p) mmc_problem_close(p);
  }
};

}  // namespace

TEST_CASE("unknown ids and null arguments are rejected with messages") {
  mmc_problem* p = nullptr;
  CHECK(mmc_problem_open("no-such-problem", nullptr, &p) ==
        MMC_ERR_UNKNOWN_PROBLEM);
  CHECK(p == nullptr);
  CHECK(std::strstr(mmc_last_error(), "no-such-problem") != nullptr);
  CHECK(mmc_problem_open(nullptr, nullptr, &p) == MMC_ERR_INVALID_ARGUMENT);
  CHECK(mmc_verify(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr) ==
        MMC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("dims and eval round trip through the handle") {
  Handle h;
  REQUIRE(mmc_problem_open("quadratic-5xy", nullptr, &h.p) == MMC_OK);
  size_t n = 0, m = 0;
  CHECK(mmc_problem_dims(h.p, &n, &m) == MMC_OK);
  CHECK(n == 1);
  CHECK(m == 1);
  double x = 0.3, y = -0.2, value = 0.0;
  CHECK(mmc_problem_eval(h.p, &x, &y, &value) == MMC_OK);
  CHECK(value == doctest::Approx(-0.09 + 5.0 * 0.3 * -0.2 - 0.04));
}

TEST_CASE("verify passes at the quadratic origin and is byte stable") {
  Handle h;
  REQUIRE(mmc_problem_open("quadratic-5xy", nullptr, &h.p) == MMC_OK);
  double x = 0.0, y = 0.0;
  char* report = nullptr;
  int all_pass = 0;
  REQUIRE(mmc_verify(h.p, &x, &y, "{\"order\":2}", &report, &all_pass) ==
          MMC_OK);
  std::string first = take(report);
  CHECK(all_pass == 1);
  CHECK(first.find("\"gs2-1\"") != std::string::npos);

  report = nullptr;
  REQUIRE(mmc_verify(h.p, &x, &y, "{\"order\":2}", &report, &all_pass) ==
          MMC_OK);
  CHECK(take(report) == first);
}

TEST_CASE("infeasible points surface the dedicated error code") {
  Handle h;
  REQUIRE(mmc_problem_open("quadratic-5xy", nullptr, &h.p) == MMC_OK);
  double x = 2.0, y = 0.0;
  char* report = nullptr;
  int all_pass = 0;
  CHECK(mmc_verify(h.p, &x, &y, nullptr, &report, &all_pass) ==
        MMC_ERR_INFEASIBLE_POINT);
  CHECK(report == nullptr);
  CHECK(mmc_classify(h.p, &x, &y, nullptr, &report, nullptr) ==
        MMC_ERR_INFEASIBLE_POINT);
}

TEST_CASE("classify reports a nontrivial label set at the origin") {
  Handle h;
  REQUIRE(mmc_problem_open("quadratic-5xy", nullptr, &h.p) == MMC_OK);
  double x = 0.0, y = 0.0;
  char* report = nullptr;
  int nontrivial = 0;
  REQUIRE(mmc_classify(h.p, &x, &y, nullptr, &report, &nontrivial) == MMC_OK);
  std::string text = take(report);
  CHECK(nontrivial == 1);
  CHECK(text.find("global-minimax") != std::string::npos);
  CHECK(text.find("local-minimax") != std::string::npos);
}

TEST_CASE("search and gap agree with the analytic values") {
  Handle h;
  REQUIRE(mmc_problem_open("quadratic-5xy", nullptr, &h.p) == MMC_OK);
  double x = 9.0, y = 9.0;
  CHECK(mmc_search(h.p, &x, &y) == MMC_OK);
  CHECK(std::abs(x) <= 1e-3);
  double gap = 1.0;
  CHECK(mmc_gap(h.p, 1.0, &gap) == MMC_OK);
  CHECK(gap == doctest::Approx(-1.0).epsilon(1e-4));
}

TEST_CASE("manifest lists all six problems") {
  char* json = nullptr;
  REQUIRE(mmc_examples_manifest(&json) == MMC_OK);
  std::string text = take(json);
  for (const char* id : {"quadratic-5xy", "xy-cos", "relu-net-F",
                         "nonsmooth-935", "quartic-4x2y2", "gan-saa"})
    CHECK(text.find(std::string("\"") + id + "\"") != std::string::npos);
}

TEST_CASE("gan build, certify and converge round trip through files") {
  const char* path = "capi_gan_instance.bin";
  REQUIRE(mmc_gan_build("{\"s\":3,\"s1\":2,\"s2\":2,\"N\":32,\"seed\":3}",
                        path) == MMC_OK);

  char* report = nullptr;
  int all_pass = 0;
  REQUIRE(mmc_gan_certify(path, nullptr, nullptr, "{\"seed\":5}", &report,
                          &all_pass) == MMC_OK);
  std::string text = take(report);
  CHECK(text.find("\"kink_certificate\"") != std::string::npos);
  CHECK(text.find("\"solver\"") != std::string::npos);

  report = nullptr;
  REQUIRE(mmc_gan_certify(path, nullptr, nullptr, "{\"seed\":5}", &report,
                          &all_pass) == MMC_OK);
  CHECK(take(report) == text);
  std::remove(path);

  char* csv = nullptr;
  const char* opts =
      "{\"s\":2,\"s1\":2,\"s2\":2,\"n_list\":[4,8],\"trials\":2,"
      "\"n_ref\":32,\"seed\":7}";
  REQUIRE(mmc_gan_converge(opts, &csv) == MMC_OK);
  std::string first = take(csv);
  CHECK(first.rfind("N,median_residual,p90_residual,nonconverged\n", 0) == 0);
  csv = nullptr;
  REQUIRE(mmc_gan_converge(opts, &csv) == MMC_OK);
  CHECK(take(csv) == first);
}
