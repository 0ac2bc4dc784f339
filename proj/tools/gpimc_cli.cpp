#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpimc/capi.h"

namespace {

using nlohmann::json;

int exit_code(gpimc_status status) {
  switch (status) {
    case GPIMC_OK: return 0;
    case GPIMC_VERIFY_FAILED: return 1;
    case GPIMC_INVALID_INPUT: return 2;
    case GPIMC_BUDGET_EXCEEDED: return 3;
    default: return 1;
  }
}

int fail(gpimc_ctx* ctx, gpimc_status status) {
  std::fprintf(stderr, "error: %s\n", gpimc_last_error(ctx));
  return exit_code(status);
}

struct StringOut {
  char* value = nullptr;
  ~StringOut() { gpimc_string_free(value); }
};

bool parse_env_u64(const char* name, std::uint64_t& out) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return true;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (!end || *end != '\0' || v == 0) {
    std::fprintf(stderr, "error: %s must be a positive integer, got '%s'\n", name, raw);
    return false;
  }
  out = v;
  return true;
}

int write_output(const std::string& path, const char* data) {
  if (path.empty()) {
    std::fputs(data, stdout);
    return 0;
  }
  std::ofstream file(path, std::ios::binary);
  file << data;
  if (!file) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return 2;
  }
  return 0;
}

unsigned csv_dim(const std::string& p) {
  unsigned commas = 0;
  for (char c : p)
    if (c == ',') ++commas;
  return commas + 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact multinomial / Gaussian product-inequality gap evaluator"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global budget flags after the subcommand too

  std::uint64_t max_terms = 0;
  unsigned wick_cap = 0;
  app.add_option("--max-terms", max_terms,
                 "term budget per evaluation (overrides env GPI_BUDGET)");
  app.add_option("--wick-cap", wick_cap,
                 "total-degree cap for pairing sums (overrides env GPI_WICK_CAP)");

  auto* gap = app.add_subcommand("gap", "combinatorial condition value at one point");
  unsigned gap_m = 1;
  int gap_d = 0;
  std::string gap_p, gap_variant = "equality";
  gap->add_option("--m", gap_m, "moment order")->required();
  gap->add_option("--p", gap_p, "probabilities, e.g. 1/2,1/4")->required();
  gap->add_option("--d", gap_d, "dimension (checked against --p)");
  gap->add_option("--variant", gap_variant, "constraint variant")
      ->check(CLI::IsMember({"equality", "slack"}));

  auto* oracle = app.add_subcommand("oracle", "Gaussian limit gap via Wick pairing");
  unsigned oracle_m = 1;
  std::string oracle_p;
  bool oracle_naive = false;
  oracle->add_option("--m", oracle_m, "moment order")->required();
  oracle->add_option("--p", oracle_p, "probabilities")->required();
  oracle->add_flag("--naive", oracle_naive, "enumerate all pairings instead of memoizing");

  auto* finite = app.add_subcommand("finite-n", "scaled finite-trials gap");
  unsigned finite_m = 1;
  std::uint64_t finite_trials = 0;
  std::string finite_p;
  finite->add_option("--m", finite_m, "moment order")->required();
  finite->add_option("--p", finite_p, "probabilities")->required();
  finite->add_option("--N", finite_trials, "trial count")->required();

  auto* sweep = app.add_subcommand("sweep", "evaluate an (m, d) grid of sampled points");
  unsigned sweep_m_max = 1, sweep_d_max = 1, sweep_samples = 25, sweep_grid = 10000,
           sweep_workers = 1;
  std::uint64_t sweep_seed = 0;
  std::string sweep_sampler = "uniform", sweep_format = "csv", sweep_out;
  std::vector<std::string> sweep_variants, sweep_fixed;
  std::vector<std::uint64_t> sweep_finite_n;
  bool sweep_timings = false, sweep_no_oracle = false;
  sweep->add_option("--m-max", sweep_m_max, "largest moment order");
  sweep->add_option("--d-max", sweep_d_max, "largest dimension");
  sweep->add_option("--samples", sweep_samples, "samples per (m, d) cell");
  sweep->add_option("--sampler", sweep_sampler, "point source")
      ->check(CLI::IsMember({"uniform", "dirichlet-ramp", "fixed"}));
  sweep->add_option("--grid", sweep_grid, "denominator grid for sampled points");
  sweep->add_option("--seed", sweep_seed, "sweep seed");
  sweep->add_option("--format", sweep_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sweep_out, "output path (stdout when omitted)");
  sweep->add_option("--variant", sweep_variants, "constraint variants to evaluate")
      ->check(CLI::IsMember({"equality", "slack"}));
  sweep->add_option("--fixed-p", sweep_fixed, "fixed points for --sampler fixed (repeatable)");
  sweep->add_option("--finite-N", sweep_finite_n, "trial counts for finite diagnostics")
      ->delimiter(',');
  sweep->add_option("--workers", sweep_workers, "worker threads (never affects output bytes)");
  sweep->add_flag("--timings", sweep_timings, "append wall-time column (breaks determinism)");
  sweep->add_flag("--no-oracle", sweep_no_oracle, "skip the Gaussian oracle");

  auto* converge = app.add_subcommand("converge", "finite-trials convergence study");
  unsigned converge_m = 1;
  std::string converge_p, converge_format = "csv";
  std::vector<std::uint64_t> converge_ns;
  converge->add_option("--m", converge_m, "moment order")->required();
  converge->add_option("--p", converge_p, "probabilities")->required();
  converge->add_option("--N-list", converge_ns, "ascending trial counts, e.g. 32,64,128")
      ->required()
      ->delimiter(',');
  converge->add_option("--format", converge_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* verify = app.add_subcommand("verify", "run the full invariant battery");
  bool verify_json = false, verify_fault = false;
  std::uint64_t verify_seed = 0;
  unsigned verify_survey = 0;
  verify->add_flag("--json", verify_json, "emit the JSON report instead of text");
  auto* verify_seed_opt = verify->add_option("--seed", verify_seed, "survey seed");
  auto* verify_survey_opt =
      verify->add_option("--survey-samples", verify_survey, "survey samples per cell");
  verify->add_flag("--inject-stirling-fault", verify_fault, "corrupt a table copy (self-test)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::uint64_t env_terms = 0, env_cap = 0;
  if (!parse_env_u64("GPI_BUDGET", env_terms) || !parse_env_u64("GPI_WICK_CAP", env_cap))
    return 2;
  if (max_terms == 0 && env_terms > 0) max_terms = env_terms;
  if (wick_cap == 0 && env_cap > 0) wick_cap = static_cast<unsigned>(env_cap);

  const std::unique_ptr<gpimc_ctx, decltype(&gpimc_ctx_free)> ctx(gpimc_ctx_new(),
                                                                  &gpimc_ctx_free);
  if (!ctx) {
    std::fprintf(stderr, "error: cannot create context\n");
    return 1;
  }
  if (max_terms > 0) {
    const gpimc_status s = gpimc_set_term_budget(ctx.get(), max_terms);
    if (s != GPIMC_OK) return fail(ctx.get(), s);
  }
  if (wick_cap > 0) {
    const gpimc_status s = gpimc_set_wick_degree_cap(ctx.get(), wick_cap);
    if (s != GPIMC_OK) return fail(ctx.get(), s);
  }

  if (*gap) {
    if (gap->count("--d") && static_cast<unsigned>(gap_d) != csv_dim(gap_p)) {
      std::fprintf(stderr, "error: --d %d does not match the %u entries of --p\n", gap_d,
                   csv_dim(gap_p));
      return 2;
    }
    const gpimc_variant v =
        gap_variant == "slack" ? GPIMC_VARIANT_SLACK : GPIMC_VARIANT_EQUALITY;
    StringOut exact;
    double approx = 0;
    const gpimc_status s =
        gpimc_theorem_gap(ctx.get(), gap_p.c_str(), gap_m, v, &exact.value, &approx);
    if (s != GPIMC_OK) return fail(ctx.get(), s);
    std::printf("theorem_gap m=%u variant=%s p=%s exact=%s float=%.17g\n", gap_m,
                gap_variant.c_str(), gap_p.c_str(), exact.value, approx);
    return 0;
  }

  if (*oracle) {
    StringOut exact;
    double approx = 0;
    const gpimc_status s = gpimc_gaussian_gap(ctx.get(), oracle_p.c_str(), oracle_m,
                                              oracle_naive ? 1 : 0, &exact.value, &approx);
    if (s != GPIMC_OK) return fail(ctx.get(), s);
    std::printf("gaussian_gap m=%u engine=%s p=%s exact=%s float=%.17g\n", oracle_m,
                oracle_naive ? "naive" : "memoized", oracle_p.c_str(), exact.value, approx);
    return 0;
  }

  if (*finite) {
    StringOut exact;
    double approx = 0;
    const gpimc_status s = gpimc_finite_n_gap(ctx.get(), finite_p.c_str(), finite_m,
                                              finite_trials, &exact.value, &approx);
    if (s != GPIMC_OK) return fail(ctx.get(), s);
    std::printf("finite_gap m=%u N=%llu p=%s exact=%s float=%.17g\n", finite_m,
                static_cast<unsigned long long>(finite_trials), finite_p.c_str(), exact.value,
                approx);
    return 0;
  }

  if (*sweep) {
    json config{{"m_max", sweep_m_max},
                {"d_max", sweep_d_max},
                {"samples_per_cell", sweep_samples},
                {"sampler", sweep_sampler},
                {"grid", sweep_grid},
                {"seed", sweep_seed},
                {"oracle", !sweep_no_oracle},
                {"workers", sweep_workers},
                {"timings", sweep_timings}};
    if (!sweep_variants.empty()) config["variants"] = sweep_variants;
    if (!sweep_finite_n.empty()) config["finite_N"] = sweep_finite_n;
    if (!sweep_fixed.empty()) config["fixed_points"] = sweep_fixed;
    const std::string config_text = config.dump();
    StringOut out;
    const gpimc_status s =
        gpimc_sweep(ctx.get(), config_text.c_str(), sweep_format.c_str(), &out.value);
    if (s != GPIMC_OK) return fail(ctx.get(), s);
    return write_output(sweep_out, out.value);
  }

  if (*converge) {
    StringOut out;
    const gpimc_status s =
        gpimc_convergence_table(ctx.get(), converge_p.c_str(), converge_m, converge_ns.data(),
                                converge_ns.size(), converge_format.c_str(), &out.value);
    if (s != GPIMC_OK) return fail(ctx.get(), s);
    std::fputs(out.value, stdout);
    return 0;
  }

  if (*verify) {
    json options = json::object();
    if (verify_seed_opt->count()) options["seed"] = verify_seed;
    if (verify_survey_opt->count()) options["survey_samples_per_cell"] = verify_survey;
    if (verify_fault) options["inject_stirling_fault"] = true;
    const std::string options_text = options.dump();
    StringOut report;
    const gpimc_status s = gpimc_verify(ctx.get(), options_text.c_str(), &report.value);
    if (s != GPIMC_OK && s != GPIMC_VERIFY_FAILED) return fail(ctx.get(), s);
    if (verify_json) {
      std::fputs(report.value, stdout);
    } else {
      // report.value is the JSON document; render the text view from it.
      const json doc = json::parse(report.value);
      for (const auto& inv : doc["invariants"])
        std::printf("[%s] %s - %s\n", inv["passed"].get<bool>() ? "PASS" : "FAIL",
                    inv["name"].get<std::string>().c_str(),
                    inv["detail"].get<std::string>().c_str());
      for (const auto& f : doc["findings"])
        std::printf("[FINDING] %s - %s\n", f["kind"].get<std::string>().c_str(),
                    f["detail"].get<std::string>().c_str());
      std::printf("invariants run: %zu, passed: %u, failed: %u, findings: %zu\n",
                  doc["invariants"].size(), doc["passed"].get<unsigned>(),
                  doc["failed"].get<unsigned>(), doc["findings"].size());
    }
    return exit_code(s);
  }

  return 2;
}
