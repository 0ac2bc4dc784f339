#include "gpimc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gpimc/gaussian.hpp"

namespace gpimc {

using nlohmann::json;

std::string_view to_string(SimplexSampler s) {
  switch (s) {
    case SimplexSampler::UniformSimplex: return "uniform";
    case SimplexSampler::DirichletRamp: return "dirichlet-ramp";
    case SimplexSampler::FixedList: return "fixed";
  }
  throw std::logic_error("unreachable sampler tag");
}

SimplexSampler sampler_from_string(std::string_view s) {
  if (s == "uniform") return SimplexSampler::UniformSimplex;
  if (s == "dirichlet-ramp") return SimplexSampler::DirichletRamp;
  if (s == "fixed") return SimplexSampler::FixedList;
  throw std::invalid_argument("unknown sampler '" + std::string(s) +
                              "' (expected uniform, dirichlet-ramp, or fixed)");
}

int GapRecord::theorem_sign() const { return theorem_gap ? sign(*theorem_gap) : 2; }

int GapRecord::gaussian_sign() const { return gaussian_gap ? sign(*gaussian_gap) : 2; }

bool GapRecord::sign_agree() const {
  if (!theorem_gap || !gaussian_gap) return true;
  return (sign(*theorem_gap) < 0) == (sign(*gaussian_gap) < 0);
}

ProbVector sample_simplex(unsigned d, SimplexSampler sampler,
                          unsigned denominator_grid, SplitMix64& stream) {
  if (d == 0) throw std::invalid_argument("sample_simplex: d must be >= 1");
  if (sampler == SimplexSampler::FixedList)
    throw std::invalid_argument("sample_simplex: FixedList holds given points, nothing to draw");
  if (denominator_grid < d + 1)
    throw std::invalid_argument("sample_simplex: grid " + std::to_string(denominator_grid) +
                                " < d + 1");
  const std::uint64_t grid = denominator_grid;
  std::vector<std::uint64_t> parts(d + 1, 0);

  if (sampler == SimplexSampler::UniformSimplex) {
    // Uniform composition of grid into d+1 positive parts, via d distinct
    // cut points in {1, ..., grid-1}.
    std::vector<std::uint64_t> cuts;
    cuts.reserve(d);
    while (cuts.size() < d) {
      const std::uint64_t c = 1 + stream.next_below(grid - 1);
      if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::uint64_t prev = 0;
    for (unsigned i = 0; i < d; ++i) {
      parts[i] = cuts[i] - prev;
      prev = cuts[i];
    }
    parts[d] = grid - prev;
  } else {
    // Dirichlet(1, 2, ..., d+1): gamma with integer shape s is a sum of s
    // unit exponentials. Floating point selects the point; the grid snap
    // (largest remainder, then positivity repair) makes it exact.
    std::vector<double> w(d + 1);
    double total = 0;
    for (unsigned i = 0; i <= d; ++i) {
      double g = 0;
      for (unsigned t = 0; t <= i; ++t) {
        const double u = static_cast<double>((stream.next() >> 11) + 1) * 0x1.0p-53;
        g -= std::log(u);
      }
      w[i] = g;
      total += g;
    }
    std::vector<double> frac(d + 1);
    std::uint64_t assigned = 0;
    for (unsigned i = 0; i <= d; ++i) {
      const double raw = w[i] / total * static_cast<double>(grid);
      const double fl = std::floor(raw);
      parts[i] = static_cast<std::uint64_t>(fl);
      frac[i] = raw - fl;
      assigned += parts[i];
    }
    std::vector<unsigned> order(d + 1);
    for (unsigned i = 0; i <= d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](unsigned a, unsigned b) {
      if (frac[a] != frac[b]) return frac[a] > frac[b];
      return a < b;
    });
    for (std::uint64_t r = 0; assigned < grid; ++r, ++assigned) parts[order[r % (d + 1)]]++;
    // Repair zeros: move units from the largest part (first such index).
    for (unsigned i = 0; i <= d; ++i) {
      while (parts[i] == 0) {
        unsigned big = 0;
        for (unsigned t = 1; t <= d; ++t)
          if (parts[t] > parts[big]) big = t;
        --parts[big];
        ++parts[i];
      }
    }
  }

  std::vector<Rational> entries;
  entries.reserve(d);
  for (unsigned i = 0; i < d; ++i)
    entries.push_back(make_rational(Integer(static_cast<unsigned long>(parts[i])),
                                    Integer(static_cast<unsigned long>(grid))));
  return ProbVector(std::move(entries));
}

namespace {

struct CellTask {
  unsigned m;
  unsigned d;
  unsigned sample;
  const ProbVector* fixed = nullptr;
};

struct CellOutput {
  std::vector<GapRecord> records;
  std::vector<Finding> findings;
};

CellOutput evaluate_cell(const SweepConfig& config, const CellTask& task) {
  CellOutput out;
  const auto t0 = std::chrono::steady_clock::now();

  ProbVector p = [&] {
    if (task.fixed) return *task.fixed;
    SplitMix64 stream = cell_stream(config.seed, task.m, task.d, task.sample);
    return sample_simplex(task.d, config.sampler, config.denominator_grid, stream);
  }();

  auto add_finding = [&](std::string kind, std::string variant, std::string detail) {
    out.findings.push_back(Finding{std::move(kind), task.m, task.d, task.sample,
                                   std::move(variant), std::move(detail)});
  };

  std::string shared_note;
  std::optional<Rational> gaussian;
  if (config.oracle) {
    try {
      gaussian = gaussian::gpi_gap(p, task.m, config.budget);
      if (sign(*gaussian) < 0)
        add_finding("conjecture-watch", "",
                    "gaussian gap " + to_string(*gaussian) + " < 0 at p=" + p.to_string());
    } catch (const BudgetExceededError& e) {
      shared_note = std::string("gaussian: ") + e.what();
      add_finding("budget", "", shared_note);
    }
  }

  std::vector<std::pair<std::uint64_t, Rational>> finite;
  for (std::uint64_t n : config.finite_N) {
    try {
      finite.emplace_back(
          n, multinomial::scaled_gap_finite(MultinomialSpec(n, p), task.m, config.budget));
    } catch (const BudgetExceededError& e) {
      const std::string msg = "finite N=" + std::to_string(n) + ": " + e.what();
      if (!shared_note.empty()) shared_note += "; ";
      shared_note += msg;
      add_finding("budget", "", msg);
    }
  }

  for (ConstraintVariant variant : config.variants) {
    GapRecord rec(task.m, task.d, task.sample, variant, p);
    rec.gaussian_gap = gaussian;
    rec.finite_gaps = finite;
    rec.note = shared_note;
    try {
      rec.theorem_gap = condition::theorem_gap(p, task.m, variant, config.budget);
    } catch (const BudgetExceededError& e) {
      const std::string msg = std::string("theorem: ") + e.what();
      if (!rec.note.empty()) rec.note += "; ";
      rec.note += msg;
      add_finding("budget", std::string(to_string(variant)), msg);
    }
    if (rec.theorem_gap && rec.gaussian_gap && !rec.sign_agree())
      add_finding("sign-disagreement", std::string(to_string(variant)),
                  "theorem gap " + to_string(*rec.theorem_gap) + " vs gaussian gap " +
                      to_string(*rec.gaussian_gap) + " at p=" + p.to_string());
    out.records.push_back(std::move(rec));
  }

  const auto t1 = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  for (GapRecord& rec : out.records) rec.wall_ms = ms;
  return out;
}

void validate(const SweepConfig& config) {
  if (config.m_max < 1 || config.d_max < 1)
    throw std::invalid_argument("sweep: m_max and d_max must be >= 1");
  if (config.samples_per_cell < 1)
    throw std::invalid_argument("sweep: samples_per_cell must be >= 1");
  if (config.denominator_grid < 10)
    throw std::invalid_argument("sweep: denominator grid must be >= 10");
  if (config.variants.empty()) throw std::invalid_argument("sweep: no variants selected");
  if (config.sampler == SimplexSampler::FixedList) {
    if (config.fixed_points.empty())
      throw std::invalid_argument("sweep: fixed sampler needs fixed_points");
  } else {
    if (!config.fixed_points.empty())
      throw std::invalid_argument("sweep: fixed_points given but sampler is not fixed");
    if (config.denominator_grid < config.d_max + 1)
      throw std::invalid_argument("sweep: denominator grid must be >= d_max + 1");
  }
}

std::string sanitize_note(std::string note) {
  std::replace(note.begin(), note.end(), ',', ';');
  std::replace(note.begin(), note.end(), '\n', ' ');
  return note;
}

std::string join_float(const ProbVector& p) {
  std::string out;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i > 0) out += ';';
    out += to_decimal(p[i]);
  }
  return out;
}

std::string join_exact(const ProbVector& p) {
  std::string out;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i > 0) out += ';';
    out += to_string(p[i]);
  }
  return out;
}

struct Stats {
  unsigned count = 0;
  unsigned negative = 0;
  std::vector<Rational> values;

  void add(const Rational& v) {
    ++count;
    if (sign(v) < 0) ++negative;
    values.push_back(v);
  }

  json to_json() {
    if (count == 0) return nullptr;
    std::sort(values.begin(), values.end());
    const Rational& min = values.front();
    Rational median = values[values.size() / 2];
    if (values.size() % 2 == 0)
      median = (values[values.size() / 2 - 1] + values[values.size() / 2]) / 2;
    return json{{"count", count},
                {"negative", negative},
                {"min", to_string(min)},
                {"min_float", to_double(min)},
                {"median", to_string(median)},
                {"median_float", to_double(median)}};
  }
};

json config_json(const SweepConfig& config) {
  // workers deliberately omitted: output bytes must not depend on it.
  json variants = json::array();
  for (ConstraintVariant v : config.variants) variants.push_back(std::string(to_string(v)));
  json fixed = json::array();
  for (const ProbVector& p : config.fixed_points) fixed.push_back(p.to_string());
  return json{{"m_max", config.m_max},
              {"d_max", config.d_max},
              {"samples_per_cell", config.samples_per_cell},
              {"sampler", std::string(to_string(config.sampler))},
              {"grid", config.denominator_grid},
              {"seed", config.seed},
              {"variants", variants},
              {"oracle", config.oracle},
              {"finite_N", config.finite_N},
              {"fixed_points", fixed},
              {"timings", config.timings},
              {"max_terms", config.budget.max_terms},
              {"wick_degree_cap", config.budget.wick_degree_cap}};
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  validate(config);

  std::vector<CellTask> tasks;
  if (config.sampler == SimplexSampler::FixedList) {
    for (unsigned m = 1; m <= config.m_max; ++m)
      for (unsigned s = 0; s < config.fixed_points.size(); ++s)
        tasks.push_back(CellTask{m, static_cast<unsigned>(config.fixed_points[s].dim()), s,
                                 &config.fixed_points[s]});
  } else {
    for (unsigned m = 1; m <= config.m_max; ++m)
      for (unsigned d = 1; d <= config.d_max; ++d)
        for (unsigned s = 0; s < config.samples_per_cell; ++s)
          tasks.push_back(CellTask{m, d, s, nullptr});
  }

  std::vector<CellOutput> outputs(tasks.size());
  std::atomic<std::size_t> cursor{0};
  auto drain = [&] {
    for (;;) {
      const std::size_t t = cursor.fetch_add(1);
      if (t >= tasks.size()) return;
      outputs[t] = evaluate_cell(config, tasks[t]);
    }
  };

  const unsigned workers = std::max(1u, config.workers);
  if (workers == 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
    for (std::thread& t : pool) t.join();
  }

  SweepResult result;
  result.config = config;
  for (CellOutput& out : outputs) {
    for (GapRecord& r : out.records) result.records.push_back(std::move(r));
    for (Finding& f : out.findings) result.findings.push_back(std::move(f));
  }
  return result;
}

std::string to_csv(const SweepResult& result) {
  std::string out =
      "m,d,sample,variant,p,p_float,theorem_gap,theorem_gap_float,theorem_sign,"
      "gaussian_gap,gaussian_gap_float,gaussian_sign,sign_agree,finite_gaps,"
      "finite_gaps_float,note";
  if (result.config.timings) out += ",time_ms";
  out += '\n';

  for (const GapRecord& r : result.records) {
    out += std::to_string(r.m) + ',' + std::to_string(r.d) + ',' + std::to_string(r.sample) +
           ',' + std::string(to_string(r.variant)) + ',';
    out += join_exact(r.p) + ',' + join_float(r.p) + ',';
    if (r.theorem_gap) {
      out += to_string(*r.theorem_gap) + ',' + to_decimal(*r.theorem_gap) + ',' +
             std::to_string(sign(*r.theorem_gap));
    } else {
      out += ",,";
    }
    out += ',';
    if (r.gaussian_gap) {
      out += to_string(*r.gaussian_gap) + ',' + to_decimal(*r.gaussian_gap) + ',' +
             std::to_string(sign(*r.gaussian_gap));
    } else {
      out += ",,";
    }
    out += ',';
    if (r.theorem_gap && r.gaussian_gap) out += r.sign_agree() ? "1" : "0";
    out += ',';
    std::string exact, approx;
    for (std::size_t i = 0; i < r.finite_gaps.size(); ++i) {
      if (i > 0) {
        exact += ';';
        approx += ';';
      }
      exact += std::to_string(r.finite_gaps[i].first) + ':' + to_string(r.finite_gaps[i].second);
      approx += std::to_string(r.finite_gaps[i].first) + ':' + to_decimal(r.finite_gaps[i].second);
    }
    out += exact + ',' + approx + ',' + sanitize_note(r.note);
    if (result.config.timings) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", r.wall_ms);
      out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const SweepResult& result) {
  json records = json::array();
  for (const GapRecord& r : result.records) {
    json rec{{"m", r.m},
             {"d", r.d},
             {"sample", r.sample},
             {"variant", std::string(to_string(r.variant))}};
    json p_exact = json::array();
    json p_float = json::array();
    for (std::size_t i = 0; i < r.p.dim(); ++i) {
      p_exact.push_back(to_string(r.p[i]));
      p_float.push_back(to_double(r.p[i]));
    }
    rec["p"] = p_exact;
    rec["p_float"] = p_float;
    if (r.theorem_gap) {
      rec["theorem_gap"] = to_string(*r.theorem_gap);
      rec["theorem_gap_float"] = to_double(*r.theorem_gap);
      rec["theorem_sign"] = sign(*r.theorem_gap);
    } else {
      rec["theorem_gap"] = nullptr;
      rec["theorem_gap_float"] = nullptr;
      rec["theorem_sign"] = nullptr;
    }
    if (r.gaussian_gap) {
      rec["gaussian_gap"] = to_string(*r.gaussian_gap);
      rec["gaussian_gap_float"] = to_double(*r.gaussian_gap);
      rec["gaussian_sign"] = sign(*r.gaussian_gap);
    } else {
      rec["gaussian_gap"] = nullptr;
      rec["gaussian_gap_float"] = nullptr;
      rec["gaussian_sign"] = nullptr;
    }
    rec["sign_agree"] = (r.theorem_gap && r.gaussian_gap) ? json(r.sign_agree()) : json(nullptr);
    json fg = json::array();
    for (const auto& [n, v] : r.finite_gaps)
      fg.push_back(json{{"N", n}, {"exact", to_string(v)}, {"float", to_double(v)}});
    rec["finite_gaps"] = fg;
    rec["note"] = r.note;
    if (result.config.timings) rec["time_ms"] = r.wall_ms;
    records.push_back(std::move(rec));
  }

  // Summary matrix: per (m, d) cell, distribution stats from exact values.
  std::vector<std::pair<unsigned, unsigned>> cells;
  for (const GapRecord& r : result.records) {
    const auto cell = std::make_pair(r.m, r.d);
    if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
  }
  std::sort(cells.begin(), cells.end());
  json summary_cells = json::array();
  for (const auto& [m, d] : cells) {
    Stats gaussian;
    std::vector<std::pair<ConstraintVariant, Stats>> per_variant;
    for (ConstraintVariant v : result.config.variants) per_variant.emplace_back(v, Stats{});
    for (const GapRecord& r : result.records) {
      if (r.m != m || r.d != d) continue;
      if (r.variant == result.config.variants.front() && r.gaussian_gap)
        gaussian.add(*r.gaussian_gap);
      for (auto& [v, stats] : per_variant)
        if (r.variant == v && r.theorem_gap) stats.add(*r.theorem_gap);
    }
    json cell{{"m", m}, {"d", d}, {"gaussian", gaussian.to_json()}};
    json theorem = json::object();
    for (auto& [v, stats] : per_variant) theorem[std::string(to_string(v))] = stats.to_json();
    cell["theorem"] = theorem;
    summary_cells.push_back(std::move(cell));
  }

  json findings = json::array();
  for (const Finding& f : result.findings)
    findings.push_back(json{{"kind", f.kind},
                            {"m", f.m},
                            {"d", f.d},
                            {"sample", f.sample},
                            {"variant", f.variant},
                            {"detail", f.detail}});

  json doc{{"config", config_json(result.config)},
           {"records", records},
           {"summary", json{{"rows", result.config.m_max},
                            {"cols", result.config.d_max},
                            {"cells", summary_cells}}},
           {"findings", findings}};
  return doc.dump(2) + '\n';
}

ConvergenceTable run_convergence(const ProbVector& p, unsigned m,
                                 const std::vector<std::uint64_t>& N_list,
                                 const EvalBudget& budget) {
  if (m == 0) throw std::invalid_argument("convergence: m must be >= 1");
  if (N_list.empty()) throw std::invalid_argument("convergence: empty N list");
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] < 1) throw std::invalid_argument("convergence: N must be >= 1");
    if (i > 0 && N_list[i] <= N_list[i - 1])
      throw std::invalid_argument("convergence: N list must be strictly ascending");
  }

  ConvergenceTable table(p, m, gaussian::gpi_gap(p, m, budget));
  std::optional<Rational> prev_error;
  for (std::uint64_t n : N_list) {
    ConvergenceRow row;
    row.N = n;
    try {
      row.scaled_gap = multinomial::scaled_gap_finite(MultinomialSpec(n, p), m, budget);
      row.abs_error = abs(*row.scaled_gap - table.limit);
      if (prev_error && sign(*row.abs_error) != 0)
        row.error_ratio = to_double(*prev_error / *row.abs_error);
      prev_error = row.abs_error;
    } catch (const BudgetExceededError& e) {
      row.note = std::string("skipped: ") + e.what();
      prev_error.reset();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string to_csv(const ConvergenceTable& table) {
  std::string out = "# p=" + table.p.to_string() + " m=" + std::to_string(table.m) +
                    " limit=" + to_string(table.limit) +
                    " limit_float=" + to_decimal(table.limit) + '\n';
  out += "N,scaled_gap,scaled_gap_float,abs_error,abs_error_float,error_ratio,note\n";
  for (const ConvergenceRow& row : table.rows) {
    out += std::to_string(row.N) + ',';
    if (row.scaled_gap)
      out += to_string(*row.scaled_gap) + ',' + to_decimal(*row.scaled_gap);
    else
      out += ',';
    out += ',';
    if (row.abs_error) out += to_string(*row.abs_error) + ',' + to_decimal(*row.abs_error);
    else
      out += ',';
    out += ',';
    if (row.error_ratio) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", *row.error_ratio);
      out += buf;
    }
    out += ',' + sanitize_note(row.note) + '\n';
  }
  return out;
}

std::string to_json(const ConvergenceTable& table) {
  json p_exact = json::array();
  for (std::size_t i = 0; i < table.p.dim(); ++i) p_exact.push_back(to_string(table.p[i]));
  json rows = json::array();
  for (const ConvergenceRow& row : table.rows) {
    json r{{"N", row.N}};
    if (row.scaled_gap) {
      r["scaled_gap"] = to_string(*row.scaled_gap);
      r["scaled_gap_float"] = to_double(*row.scaled_gap);
    } else {
      r["scaled_gap"] = nullptr;
      r["scaled_gap_float"] = nullptr;
    }
    if (row.abs_error) {
      r["abs_error"] = to_string(*row.abs_error);
      r["abs_error_float"] = to_double(*row.abs_error);
    } else {
      r["abs_error"] = nullptr;
      r["abs_error_float"] = nullptr;
    }
    r["error_ratio"] = row.error_ratio ? json(*row.error_ratio) : json(nullptr);
    r["note"] = row.note;
    rows.push_back(std::move(r));
  }
  json doc{{"p", p_exact},
           {"m", table.m},
           {"limit", json{{"exact", to_string(table.limit)}, {"float", to_double(table.limit)}}},
           {"rows", rows}};
  return doc.dump(2) + '\n';
}

}  // namespace gpimc
