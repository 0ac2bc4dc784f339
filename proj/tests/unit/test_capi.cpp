#include <doctest.h>

#include <cstdint>
#include <string>

#include "gpimc/capi.h"

namespace {

struct Ctx {
  gpimc_ctx* p = gpimc_ctx_new();
  ~Ctx() { gpimc_ctx_free(p); }
  operator gpimc_ctx*() const { return p; }
};

struct Out {
  char* s = nullptr;
  ~Out() { gpimc_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

}  // namespace

TEST_CASE("version string") {
  const char* v = gpimc_version();
  REQUIRE(v != nullptr);
  CHECK(std::string(v).find('.') != std::string::npos);
}

TEST_CASE("theorem gap through the c api") {
  Ctx ctx;
  Out exact;
  double approx = -1;
  CHECK(gpimc_theorem_gap(ctx, "1/2,1/4", 1, GPIMC_VARIANT_EQUALITY, &exact.s, &approx) ==
        GPIMC_OK);
  CHECK(exact.str() == "0");
  CHECK(approx == 0.0);
  CHECK(std::string(gpimc_last_error(ctx)).empty());

  Out slack;
  CHECK(gpimc_theorem_gap(ctx, "1/4,1/4", 2, GPIMC_VARIANT_SLACK, &slack.s, nullptr) ==
        GPIMC_OK);
  CHECK(slack.str() == "5/32");
}

TEST_CASE("gaussian gap through the c api") {
  Ctx ctx;
  Out memo, naive;
  double approx = 0;
  CHECK(gpimc_gaussian_gap(ctx, "1/2,1/4", 1, 0, &memo.s, &approx) == GPIMC_OK);
  CHECK(memo.str() == "1/32");
  CHECK(approx == doctest::Approx(0.03125));
  CHECK(gpimc_gaussian_gap(ctx, "1/2,1/4", 1, 1, &naive.s, nullptr) == GPIMC_OK);
  CHECK(naive.str() == "1/32");
}

TEST_CASE("finite trials gap through the c api") {
  Ctx ctx;
  Out exact;
  CHECK(gpimc_finite_n_gap(ctx, "1/2,1/4", 1, 2, &exact.s, nullptr) == GPIMC_OK);
  CHECK(exact.str() == "1/64");
}

TEST_CASE("convergence table through the c api") {
  Ctx ctx;
  const std::uint64_t ns[] = {32, 64};
  Out csv, json;
  CHECK(gpimc_convergence_table(ctx, "1/2,1/4", 1, ns, 2, "csv", &csv.s) == GPIMC_OK);
  CHECK(csv.str().find("32,31/1024") != std::string::npos);
  CHECK(gpimc_convergence_table(ctx, "1/2,1/4", 1, ns, 2, "json", &json.s) == GPIMC_OK);
  CHECK(json.str().find("\"exact\": \"1/32\"") != std::string::npos);

  Out bad;
  CHECK(gpimc_convergence_table(ctx, "1/2,1/4", 1, ns, 2, "xml", &bad.s) ==
        GPIMC_INVALID_INPUT);
  CHECK(std::string(gpimc_last_error(ctx)).find("format") != std::string::npos);
}

TEST_CASE("sample draws are reproducible through the c api") {
  Ctx ctx;
  Out a, b;
  CHECK(gpimc_sample_simplex(ctx, 2, GPIMC_SAMPLER_UNIFORM, 12, 42, 1, 0, &a.s) == GPIMC_OK);
  CHECK(a.str() == "1/4,7/12");
  CHECK(gpimc_sample_simplex(ctx, 2, GPIMC_SAMPLER_DIRICHLET_RAMP, 1000, 42, 1, 0, &b.s) ==
        GPIMC_OK);
  CHECK(b.str() == "4/25,28/125");
}

TEST_CASE("sweep through the c api is deterministic across workers") {
  Ctx ctx;
  const char* base = R"({"m_max":2,"d_max":2,"samples_per_cell":2,"seed":7,"grid":100})";
  const char* wide =
      R"({"m_max":2,"d_max":2,"samples_per_cell":2,"seed":7,"grid":100,"workers":4})";
  Out one, four;
  CHECK(gpimc_sweep(ctx, base, "csv", &one.s) == GPIMC_OK);
  CHECK(gpimc_sweep(ctx, wide, "csv", &four.s) == GPIMC_OK);
  CHECK(one.str() == four.str());
  CHECK(one.str().rfind("m,d,sample,variant,", 0) == 0);
}

TEST_CASE("sweep rejects unknown config keys") {
  Ctx ctx;
  Out out;
  CHECK(gpimc_sweep(ctx, R"({"m_max":1,"mmax":2})", "csv", &out.s) == GPIMC_INVALID_INPUT);
  CHECK(std::string(gpimc_last_error(ctx)).find("mmax") != std::string::npos);
  CHECK(gpimc_sweep(ctx, "not json", "csv", &out.s) == GPIMC_INVALID_INPUT);
  CHECK(gpimc_sweep(ctx, nullptr, "csv", &out.s) == GPIMC_INVALID_INPUT);
}

TEST_CASE("invalid inputs set the error message") {
  Ctx ctx;
  Out out;
  CHECK(gpimc_theorem_gap(ctx, "1/2,3/4", 1, GPIMC_VARIANT_EQUALITY, &out.s, nullptr) ==
        GPIMC_INVALID_INPUT);
  CHECK(!std::string(gpimc_last_error(ctx)).empty());
  CHECK(gpimc_theorem_gap(ctx, nullptr, 1, GPIMC_VARIANT_EQUALITY, &out.s, nullptr) ==
        GPIMC_INVALID_INPUT);
  CHECK(gpimc_gaussian_gap(ctx, "garbage", 1, 0, &out.s, nullptr) == GPIMC_INVALID_INPUT);
  CHECK(gpimc_finite_n_gap(ctx, "1/2", 1, 0, &out.s, nullptr) == GPIMC_INVALID_INPUT);

  // a successful call clears the message
  Out ok;
  CHECK(gpimc_theorem_gap(ctx, "1/2", 1, GPIMC_VARIANT_EQUALITY, &ok.s, nullptr) == GPIMC_OK);
  CHECK(std::string(gpimc_last_error(ctx)).empty());
}

TEST_CASE("budget caps surface as status codes") {
  Ctx ctx;
  CHECK(gpimc_set_term_budget(ctx, 0) == GPIMC_INVALID_INPUT);
  CHECK(gpimc_set_wick_degree_cap(ctx, 0) == GPIMC_INVALID_INPUT);

  CHECK(gpimc_set_term_budget(ctx, 5) == GPIMC_OK);
  Out out;
  CHECK(gpimc_theorem_gap(ctx, "1/4,1/4", 2, GPIMC_VARIANT_SLACK, &out.s, nullptr) ==
        GPIMC_BUDGET_EXCEEDED);
  CHECK(std::string(gpimc_last_error(ctx)).find("budget") != std::string::npos);

  CHECK(gpimc_set_term_budget(ctx, 50'000'000) == GPIMC_OK);
  CHECK(gpimc_set_wick_degree_cap(ctx, 4) == GPIMC_OK);
  Out gauss;
  CHECK(gpimc_gaussian_gap(ctx, "1/2,1/4", 2, 0, &gauss.s, nullptr) == GPIMC_BUDGET_EXCEEDED);
}

TEST_CASE("verify through the c api") {
  Ctx ctx;
  Out report;
  CHECK(gpimc_verify(ctx, R"({"survey_samples_per_cell":1})", &report.s) == GPIMC_OK);
  CHECK(report.str().find("\"ok\": true") != std::string::npos);

  Out faulty;
  CHECK(gpimc_verify(ctx, R"({"survey_samples_per_cell":1,"inject_stirling_fault":true})",
                     &faulty.s) == GPIMC_VERIFY_FAILED);
  CHECK(faulty.str().find("\"ok\": false") != std::string::npos);
  CHECK(faulty.str().find("stirling-recurrence") != std::string::npos);

  Out bad;
  CHECK(gpimc_verify(ctx, R"({"surveysamples":1})", &bad.s) == GPIMC_INVALID_INPUT);
}
