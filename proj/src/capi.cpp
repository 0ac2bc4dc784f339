#include "gpimc/capi.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpimc/budget.hpp"
#include "gpimc/gaussian.hpp"
#include "gpimc/gpi_condition.hpp"
#include "gpimc/multinomial.hpp"
#include "gpimc/rational.hpp"
#include "gpimc/rng.hpp"
#include "gpimc/sweep.hpp"
#include "gpimc/verify.hpp"

using nlohmann::json;

struct gpimc_ctx {
  gpimc::EvalBudget budget;
  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gpimc_status guard(gpimc_ctx* ctx, const std::function<void()>& body) {
  if (!ctx) return GPIMC_INVALID_INPUT;
  try {
    body();
    ctx->last_error.clear();
    return GPIMC_OK;
  } catch (const gpimc::BudgetExceededError& e) {
    ctx->last_error = e.what();
    return GPIMC_BUDGET_EXCEEDED;
  } catch (const std::invalid_argument& e) {
    ctx->last_error = e.what();
    return GPIMC_INVALID_INPUT;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return GPIMC_INTERNAL_ERROR;
  }
}

void write_value(const gpimc::Rational& value, char** exact_out, double* approx_out) {
  if (exact_out) *exact_out = dup_string(gpimc::to_string(value));
  if (approx_out) *approx_out = gpimc::to_double(value);
}

const char* require_cstr(const char* s, const char* what) {
  if (!s) throw std::invalid_argument(std::string(what) + " must not be null");
  return s;
}

gpimc::ConstraintVariant cpp_variant(gpimc_variant v) {
  switch (v) {
    case GPIMC_VARIANT_EQUALITY: return gpimc::ConstraintVariant::Equality;
    case GPIMC_VARIANT_SLACK: return gpimc::ConstraintVariant::Slack;
  }
  throw std::invalid_argument("unknown variant code " + std::to_string(static_cast<int>(v)));
}

gpimc::SimplexSampler cpp_sampler(gpimc_sampler s) {
  switch (s) {
    case GPIMC_SAMPLER_UNIFORM: return gpimc::SimplexSampler::UniformSimplex;
    case GPIMC_SAMPLER_DIRICHLET_RAMP: return gpimc::SimplexSampler::DirichletRamp;
  }
  throw std::invalid_argument("unknown sampler code " + std::to_string(static_cast<int>(s)));
}

json parse_object(const char* text, const char* what) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument(std::string(what) + ": expected an object");
  return doc;
}

gpimc::SweepConfig config_from_json(const json& doc, const gpimc::EvalBudget& base) {
  gpimc::SweepConfig config;
  config.budget = base;
  for (const auto& [key, value] : doc.items()) {
    if (key == "m_max") {
      config.m_max = value.get<unsigned>();
    } else if (key == "d_max") {
      config.d_max = value.get<unsigned>();
    } else if (key == "samples_per_cell") {
      config.samples_per_cell = value.get<unsigned>();
    } else if (key == "sampler") {
      config.sampler = gpimc::sampler_from_string(value.get<std::string>());
    } else if (key == "grid") {
      config.denominator_grid = value.get<unsigned>();
    } else if (key == "seed") {
      config.seed = value.get<std::uint64_t>();
    } else if (key == "variants") {
      config.variants.clear();
      for (const auto& v : value)
        config.variants.push_back(gpimc::variant_from_string(v.get<std::string>()));
    } else if (key == "oracle") {
      config.oracle = value.get<bool>();
    } else if (key == "finite_N") {
      config.finite_N = value.get<std::vector<std::uint64_t>>();
    } else if (key == "fixed_points") {
      for (const auto& v : value)
        config.fixed_points.push_back(gpimc::ProbVector::parse(v.get<std::string>()));
    } else if (key == "workers") {
      config.workers = value.get<unsigned>();
    } else if (key == "timings") {
      config.timings = value.get<bool>();
    } else if (key == "max_terms") {
      config.budget.max_terms = value.get<std::uint64_t>();
    } else if (key == "wick_degree_cap") {
      config.budget.wick_degree_cap = value.get<unsigned>();
    } else {
      throw std::invalid_argument("sweep config: unknown key '" + key + "'");
    }
  }
  return config;
}

}  // namespace

extern "C" {

const char* gpimc_version(void) { return "1.0.0"; }

gpimc_ctx* gpimc_ctx_new(void) { return new (std::nothrow) gpimc_ctx{}; }

void gpimc_ctx_free(gpimc_ctx* ctx) { delete ctx; }

const char* gpimc_last_error(const gpimc_ctx* ctx) {
  return ctx ? ctx->last_error.c_str() : "";
}

gpimc_status gpimc_set_term_budget(gpimc_ctx* ctx, uint64_t max_terms) {
  return guard(ctx, [&] {
    if (max_terms == 0) throw std::invalid_argument("term budget must be >= 1");
    ctx->budget.max_terms = max_terms;
  });
}

gpimc_status gpimc_set_wick_degree_cap(gpimc_ctx* ctx, unsigned cap) {
  return guard(ctx, [&] {
    if (cap == 0) throw std::invalid_argument("wick degree cap must be >= 1");
    ctx->budget.wick_degree_cap = cap;
  });
}

gpimc_status gpimc_theorem_gap(gpimc_ctx* ctx, const char* p_csv, unsigned m,
                               gpimc_variant variant, char** exact_out, double* approx_out) {
  return guard(ctx, [&] {
    const gpimc::ProbVector p = gpimc::ProbVector::parse(require_cstr(p_csv, "p"));
    if (m == 0) throw std::invalid_argument("m must be >= 1");
    write_value(gpimc::condition::theorem_gap(p, m, cpp_variant(variant), ctx->budget),
                exact_out, approx_out);
  });
}

gpimc_status gpimc_gaussian_gap(gpimc_ctx* ctx, const char* p_csv, unsigned m,
                                int use_naive_pairing, char** exact_out, double* approx_out) {
  return guard(ctx, [&] {
    const gpimc::ProbVector p = gpimc::ProbVector::parse(require_cstr(p_csv, "p"));
    if (m == 0) throw std::invalid_argument("m must be >= 1");
    gpimc::Rational value;
    if (use_naive_pairing) {
      const gpimc::CovMatrix cov = gpimc::CovMatrix::from_prob(p);
      const gpimc::MultiplicityVector mult(p.dim(), static_cast<int>(2 * m));
      value = gpimc::gaussian::wick_moment_enumerated(cov, mult, ctx->budget);
      gpimc::Rational prod = 1;
      for (std::size_t i = 0; i < p.dim(); ++i)
        prod *= gpimc::gaussian::univariate_even_moment(cov.at(i, i), m);
      value -= prod;
    } else {
      value = gpimc::gaussian::gpi_gap(p, m, ctx->budget);
    }
    write_value(value, exact_out, approx_out);
  });
}

gpimc_status gpimc_finite_n_gap(gpimc_ctx* ctx, const char* p_csv, unsigned m,
                                uint64_t trials, char** exact_out, double* approx_out) {
  return guard(ctx, [&] {
    const gpimc::ProbVector p = gpimc::ProbVector::parse(require_cstr(p_csv, "p"));
    if (m == 0) throw std::invalid_argument("m must be >= 1");
    write_value(
        gpimc::multinomial::scaled_gap_finite(gpimc::MultinomialSpec(trials, p), m, ctx->budget),
        exact_out, approx_out);
  });
}

gpimc_status gpimc_convergence_table(gpimc_ctx* ctx, const char* p_csv, unsigned m,
                                     const uint64_t* n_list, size_t n_count,
                                     const char* format, char** out) {
  return guard(ctx, [&] {
    const gpimc::ProbVector p = gpimc::ProbVector::parse(require_cstr(p_csv, "p"));
    if (!n_list && n_count > 0) throw std::invalid_argument("n_list must not be null");
    if (!out) throw std::invalid_argument("out must not be null");
    const std::string fmt = require_cstr(format, "format");
    if (fmt != "csv" && fmt != "json")
      throw std::invalid_argument("format must be csv or json, got '" + fmt + "'");
    const std::vector<std::uint64_t> ns(n_list, n_list + n_count);
    const gpimc::ConvergenceTable table = gpimc::run_convergence(p, m, ns, ctx->budget);
    *out = dup_string(fmt == "csv" ? gpimc::to_csv(table) : gpimc::to_json(table));
  });
}

gpimc_status gpimc_sample_simplex(gpimc_ctx* ctx, unsigned d, gpimc_sampler sampler,
                                  unsigned grid, uint64_t seed, unsigned m,
                                  unsigned sample_index, char** p_csv_out) {
  return guard(ctx, [&] {
    if (!p_csv_out) throw std::invalid_argument("p_csv_out must not be null");
    gpimc::SplitMix64 stream = gpimc::cell_stream(seed, m, d, sample_index);
    const gpimc::ProbVector p = gpimc::sample_simplex(d, cpp_sampler(sampler), grid, stream);
    *p_csv_out = dup_string(p.to_string());
  });
}

gpimc_status gpimc_sweep(gpimc_ctx* ctx, const char* config_json, const char* format,
                         char** out) {
  return guard(ctx, [&] {
    if (!out) throw std::invalid_argument("out must not be null");
    const std::string fmt = require_cstr(format, "format");
    if (fmt != "csv" && fmt != "json")
      throw std::invalid_argument("format must be csv or json, got '" + fmt + "'");
    const json doc = parse_object(require_cstr(config_json, "config"), "sweep config");
    const gpimc::SweepConfig config = config_from_json(doc, ctx->budget);
    const gpimc::SweepResult result = gpimc::run_sweep(config);
    *out = dup_string(fmt == "csv" ? gpimc::to_csv(result) : gpimc::to_json(result));
  });
}

gpimc_status gpimc_verify(gpimc_ctx* ctx, const char* options_json, char** report_json_out) {
  bool ok = true;
  const gpimc_status status = guard(ctx, [&] {
    gpimc::VerifyOptions options;
    options.budget = ctx->budget;
    if (options_json && *options_json) {
      const json doc = parse_object(options_json, "verify options");
      for (const auto& [key, value] : doc.items()) {
        if (key == "seed") {
          options.seed = value.get<std::uint64_t>();
        } else if (key == "survey_samples_per_cell") {
          options.survey_samples_per_cell = value.get<unsigned>();
        } else if (key == "inject_stirling_fault") {
          options.inject_stirling_fault = value.get<bool>();
        } else {
          throw std::invalid_argument("verify options: unknown key '" + key + "'");
        }
      }
    }
    const gpimc::VerifyReport report = gpimc::verify_all(options);
    ok = report.ok();
    if (report_json_out) *report_json_out = dup_string(gpimc::to_json(report));
  });
  if (status != GPIMC_OK) return status;
  if (!ok) {
    ctx->last_error = "verification failed";
    return GPIMC_VERIFY_FAILED;
  }
  return GPIMC_OK;
}

void gpimc_string_free(char* s) { std::free(s); }

}  // extern "C"
