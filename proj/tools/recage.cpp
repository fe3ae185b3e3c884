// Command-line front end: limiting constants, exact finite-horizon tables,
// Monte Carlo cross-checks, restaurant-process checks, stick-breaking
// samples, and Laplace-transform diagnostics, written as CSV or JSON with an
// embedded run manifest.  Data always goes to --out (default standard
// output); log lines go to standard error.  Exit codes: 0 success, 1 usage,
// 2 numerical failure, 3 resource ceiling.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "recage/ages.hpp"
#include "recage/errors.hpp"
#include "recage/exact_engine.hpp"
#include "recage/gamma_quad.hpp"
#include "recage/montecarlo.hpp"
#include "recage/oracle.hpp"
#include "recage/output.hpp"
#include "recage/partitions.hpp"
#include "recage/rng.hpp"

namespace {

using recage::output::cell;
using recage::output::Row;

struct OutFlags {
  std::string out = "-";
  std::string format = "csv";
};

void add_out_flags(CLI::App* cmd, OutFlags& o) {
  cmd->add_option("--out", o.out, "output path, '-' for standard output");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void emit(const OutFlags& o, const recage::output::RunManifest& m,
          const std::vector<std::string>& header, const std::vector<Row>& rows) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (o.out != "-") {
    file.open(o.out, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output path: " + o.out);
    os = &file;
  }
  if (o.format == "csv") {
    recage::output::write_csv(*os, m, header, rows);
  } else {
    recage::output::write_json(*os, m, header, rows);
  }
  os->flush();
  if (!*os) throw std::invalid_argument("write failure: " + o.out);
  if (o.out != "-") {
    std::cerr << "wrote " << rows.size() << " rows to " << o.out << "\n";
  }
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("RECAGE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // library picks hardware concurrency
}

// Runs fn(i) over [0, count) on `threads` workers (0 = auto), rethrowing the
// first worker exception.  Writers must touch disjoint slots.
template <class Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
  int t = threads;
  if (t <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    t = hw == 0 ? 1 : static_cast<int>(hw);
  }
  if (static_cast<std::int64_t>(t) > count) t = static_cast<int>(count);
  if (t <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w) {
    const std::int64_t lo = count * w / t;
    const std::int64_t hi = count * (w + 1) / t;
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double se = v.size() > 1
                        ? std::sqrt(ss / static_cast<double>(v.size() - 1) /
                                    static_cast<double>(v.size()))
                        : 0.0;
  return {mean, se};
}

std::string partition_text(const recage::oracle::Partition& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += '+';
    out += std::to_string(p[i]);
  }
  return out;
}

// ---------------------------------------------------------------------- //

void run_constants(const std::string& family, int beta, int k_max, double tol,
                   const OutFlags& out) {
  const auto fam = family == "p" ? recage::gamma_quad::ConstantFamily::p
                                 : recage::gamma_quad::ConstantFamily::C;
  const auto variant = recage::variant_from_int(beta);
  std::vector<Row> rows;
  for (int k = 1; k <= k_max; ++k) {
    const auto res = recage::gamma_quad::constant(
        recage::gamma_quad::ConstantSpec{fam, variant, k, tol});
    Row row{cell(family), cell(beta), cell(k)};
    if (res.divergent) {
      row.push_back("divergent");
      row.push_back("inf");
    } else {
      row.push_back(cell(res.value));
      row.push_back(cell(res.abs_err_bound));
    }
    rows.push_back(std::move(row));
  }
  const auto manifest = recage::output::make_manifest(
      "constants", {{"family", family},
                    {"beta", cell(beta)},
                    {"k_max", cell(k_max)},
                    {"tol", cell(tol)},
                    {"format", out.format},
                    {"out", out.out}});
  emit(out, manifest, {"family", "beta", "k", "value", "abs_err_bound"}, rows);
}

void run_exact(int beta, int k, std::int64_t n_max, const std::string& quantity,
               std::int64_t ceiling, const OutFlags& out) {
  const auto variant = recage::variant_from_int(beta);
  const auto table =
      quantity == "p"
          ? recage::exact_engine::p_exact(variant, k, n_max, ceiling)
          : recage::exact_engine::el_exact(variant, k, n_max, ceiling);
  std::vector<Row> rows;
  rows.reserve(table.values.size());
  for (std::size_t n = 0; n < table.values.size(); ++n) {
    rows.push_back({cell(static_cast<std::int64_t>(n)), cell(table.values[n])});
  }
  const auto manifest = recage::output::make_manifest(
      "exact", {{"beta", cell(beta)},
                {"k", cell(k)},
                {"n_max", cell(n_max)},
                {"quantity", quantity},
                {"ceiling", cell(ceiling)},
                {"format", out.format},
                {"out", out.out}});
  emit(out, manifest, {"n", "value"}, rows);
}

void run_simulate(const std::string& dist, std::int64_t n, std::int64_t replicas,
                  std::uint64_t seed, int k_max, int threads,
                  const OutFlags& out) {
  recage::montecarlo::WalkConfig cfg;
  if (dist == "gaussian") {
    cfg.step_law = recage::montecarlo::StepLaw::gaussian;
  } else if (dist == "uniform") {
    cfg.step_law = recage::montecarlo::StepLaw::uniform;
  } else if (dist == "cauchy") {
    cfg.step_law = recage::montecarlo::StepLaw::cauchy;
  } else {
    cfg.step_law = recage::montecarlo::StepLaw::renewal_exact;
  }
  cfg.n = n;
  cfg.replicas = replicas;
  cfg.seed = seed;
  cfg.k_max = k_max;

  std::vector<recage::montecarlo::StatRequest> stats;
  std::vector<std::pair<std::string, int>> labels;  // (name, beta) per stat
  for (const auto target : {recage::montecarlo::Target::rank_probability,
                            recage::montecarlo::Target::mean_ratio}) {
    const std::string name =
        target == recage::montecarlo::Target::rank_probability
            ? "rank_probability"
            : "mean_ratio";
    for (int beta = 1; beta <= 3; ++beta) {
      for (int k = 1; k <= k_max; ++k) {
        stats.push_back({target, recage::variant_from_int(beta), k});
        labels.emplace_back(name, beta);
      }
    }
  }
  const auto estimates =
      recage::montecarlo::estimate_many(cfg, stats, resolve_threads(threads));

  std::vector<Row> rows;
  rows.reserve(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const auto& est = estimates[i];
    rows.push_back({cell(labels[i].first), cell(stats[i].k),
                    cell(labels[i].second), cell(est.mean),
                    cell(est.std_error), cell(est.count)});
  }
  const auto manifest = recage::output::make_manifest(
      "simulate", {{"dist", dist},
                   {"n", cell(n)},
                   {"replicas", cell(replicas)},
                   {"k_max", cell(k_max)},
                   {"threads", cell(threads)},
                   {"format", out.format},
                   {"out", out.out}},
      std::to_string(seed));
  emit(out, manifest, {"statistic", "k", "beta", "mean", "std_error", "count"},
       rows);
}

void run_crp_check(std::int64_t n, const std::string& mode,
                   std::int64_t replicas, std::uint64_t seed,
                   const OutFlags& out) {
  const auto renewal_exact = recage::oracle::partition_law_beta1(n);

  std::map<recage::oracle::Partition, double> crp_side;
  if (mode == "exact") {
    const auto law = recage::partitions::crp_partition_law_exact(
        recage::Rational(1, 2), recage::Rational(0), n);
    for (const auto& [part, prob] : law) crp_side[part] = prob.to_double();
  } else {
    if (replicas < 1) throw std::domain_error("need at least one replica");
    std::map<recage::oracle::Partition, std::int64_t> counts;
    for (std::int64_t r = 0; r < replicas; ++r) {
      auto rng = recage::make_stream(seed, static_cast<std::uint64_t>(r));
      auto state = recage::partitions::crp_start(0.5, 0.0);
      for (std::int64_t i = 1; i < n; ++i) {
        recage::partitions::crp_step(state, rng.uniform_open01());
      }
      auto part = state.table_sizes;
      std::sort(part.begin(), part.end(), std::greater<>());
      counts[part] += 1;
    }
    for (const auto& [part, c] : counts) {
      crp_side[part] =
          static_cast<double>(c) / static_cast<double>(replicas);
    }
  }

  std::map<recage::oracle::Partition, std::pair<double, double>> merged;
  for (const auto& [part, prob] : crp_side) merged[part].first = prob;
  for (const auto& [part, prob] : renewal_exact) merged[part].second = prob;

  std::vector<Row> rows;
  for (const auto& [part, probs] : merged) {
    rows.push_back({cell(partition_text(part)), cell(probs.first),
                    cell(probs.second),
                    cell(std::abs(probs.first - probs.second))});
  }
  const auto manifest = recage::output::make_manifest(
      "crp-check", {{"n", cell(n)},
                    {"mode", mode},
                    {"replicas", cell(mode == "exact" ? 0 : replicas)},
                    {"format", out.format},
                    {"out", out.out}},
      mode == "exact" ? std::string() : std::to_string(seed));
  emit(out, manifest, {"partition", "p_crp", "p_renewal", "abs_diff"}, rows);
}

void run_pd(std::int64_t replicas, int depth, std::uint64_t seed, double alpha,
            double theta, int k_max, int threads, const OutFlags& out) {
  if (replicas < 1) throw std::domain_error("need at least one replica");
  if (k_max < 1 || k_max > depth) {
    throw std::domain_error("k_max must lie in [1, depth]");
  }
  std::vector<std::vector<double>> ranked_rows(
      static_cast<std::size_t>(replicas));
  std::vector<double> residuals(static_cast<std::size_t>(replicas));
  parallel_for(replicas, resolve_threads(threads), [&](std::int64_t r) {
    auto rng = recage::make_stream(seed, static_cast<std::uint64_t>(r));
    const auto sticks =
        recage::partitions::pd_sample(alpha, theta, depth, rng);
    auto sorted = recage::partitions::ranked(sticks);
    sorted.resize(static_cast<std::size_t>(k_max));
    ranked_rows[static_cast<std::size_t>(r)] = std::move(sorted);
    residuals[static_cast<std::size_t>(r)] = sticks.residual;
  });

  std::vector<Row> rows;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<double> col;
    col.reserve(ranked_rows.size());
    for (const auto& row : ranked_rows) {
      col.push_back(row[static_cast<std::size_t>(k - 1)]);
    }
    const MeanSe ms = mean_se(col);
    rows.push_back({cell(std::string("ranked_ratio")), cell(k), cell(ms.mean),
                    cell(ms.se), cell(replicas)});
  }
  const MeanSe res = mean_se(residuals);
  rows.push_back({cell(std::string("residual")), cell(depth), cell(res.mean),
                  cell(res.se), cell(replicas)});

  const auto manifest = recage::output::make_manifest(
      "pd", {{"replicas", cell(replicas)},
             {"depth", cell(depth)},
             {"alpha", cell(alpha)},
             {"theta", cell(theta)},
             {"k_max", cell(k_max)},
             {"threads", cell(threads)},
             {"format", out.format},
             {"out", out.out}},
      std::to_string(seed));
  emit(out, manifest, {"statistic", "k", "mean", "std_error", "count"}, rows);
}

void run_laplace(int beta, int k, const std::string& quantity,
                 const std::vector<double>& s_values, std::int64_t n_max,
                 std::int64_t ceiling, const OutFlags& out) {
  const auto variant = recage::variant_from_int(beta);
  const auto table =
      quantity == "p"
          ? recage::exact_engine::p_exact(variant, k, n_max, ceiling)
          : recage::exact_engine::el_exact(variant, k, n_max, ceiling);

  // Leading-order transform predictions near s = 0.
  std::function<double(double)> predicted;
  if (quantity == "p") {
    if (beta == 3) {
      predicted = [](double s) {
        return std::log(1.0 / std::sqrt(s)) / std::sqrt(s);
      };
    } else {
      const double limit =
          recage::gamma_quad::constant(
              recage::gamma_quad::ConstantSpec{
                  recage::gamma_quad::ConstantFamily::p, variant, k, 1e-9})
              .value;
      predicted = [limit](double s) { return limit / s; };
    }
  } else {
    const double limit =
        recage::gamma_quad::constant(
            recage::gamma_quad::ConstantSpec{
                recage::gamma_quad::ConstantFamily::C, variant, k, 1e-9})
            .value;
    predicted = [limit](double s) { return limit / (s * s); };
  }

  std::vector<Row> rows;
  for (double s : s_values) {
    const auto diag = recage::exact_engine::laplace_diag(table, s);
    if (diag.truncated) {
      std::cerr << "s=" << s
                << ": transform tail not negligible at this horizon; "
                   "increase --n-max\n";
    }
    const double pred = predicted(s);
    rows.push_back({cell(s), cell(diag.sum), cell(pred),
                    cell(diag.sum / pred)});
  }
  std::map<std::string, std::string> params{{"beta", cell(beta)},
                                            {"k", cell(k)},
                                            {"quantity", quantity},
                                            {"n_max", cell(n_max)},
                                            {"ceiling", cell(ceiling)},
                                            {"format", out.format},
                                            {"out", out.out}};
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    params["s" + std::to_string(i)] = cell(s_values[i]);
  }
  const auto manifest = recage::output::make_manifest("laplace", params);
  emit(out, manifest, {"s", "empirical_sum", "predicted", "ratio"}, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "record-age laboratory: exact tables, limiting constants, and "
      "stochastic cross-checks for symmetric random walks"};
  app.require_subcommand(1);

  // constants -------------------------------------------------------------
  std::string c_family;
  int c_beta = 1;
  int c_kmax = 6;
  double c_tol = 1e-7;
  OutFlags c_out;
  auto* constants =
      app.add_subcommand("constants", "limiting constants per rank");
  constants->add_option("--family", c_family, "p (rank probabilities) or C (age proportions)")
      ->required()
      ->check(CLI::IsMember({"p", "C"}));
  constants->add_option("--beta", c_beta, "age-list variant 1|2|3")
      ->required()
      ->check(CLI::Range(1, 3));
  constants->add_option("--k-max", c_kmax, "largest rank")
      ->check(CLI::Range(1, 512));
  constants->add_option("--tol", c_tol, "absolute tolerance")
      ->check(CLI::PositiveNumber);
  add_out_flags(constants, c_out);
  constants->callback(
      [&] { run_constants(c_family, c_beta, c_kmax, c_tol, c_out); });

  // exact -----------------------------------------------------------------
  int e_beta = 1;
  int e_k = 1;
  std::int64_t e_nmax = 0;
  std::string e_quantity = "p";
  std::int64_t e_ceiling = recage::exact_engine::kDefaultCeiling;
  OutFlags e_out;
  auto* exact = app.add_subcommand("exact", "exact finite-horizon tables");
  exact->add_option("--beta", e_beta, "age-list variant 1|2|3")
      ->required()
      ->check(CLI::Range(1, 3));
  exact->add_option("--k", e_k, "rank")->check(CLI::Range(1, 1 << 20));
  exact->add_option("--n-max", e_nmax, "largest horizon")
      ->required()
      ->check(CLI::NonNegativeNumber);
  exact->add_option("--quantity", e_quantity, "p or EL")
      ->check(CLI::IsMember({"p", "EL"}));
  exact->add_option("--ceiling", e_ceiling, "work ceiling for the horizon");
  add_out_flags(exact, e_out);
  exact->callback(
      [&] { run_exact(e_beta, e_k, e_nmax, e_quantity, e_ceiling, e_out); });

  // simulate ----------------------------------------------------------------
  std::string s_dist = "gaussian";
  std::int64_t s_n = 500;
  std::int64_t s_replicas = 10000;
  std::uint64_t s_seed = 1;
  int s_kmax = 4;
  int s_threads = 0;
  OutFlags s_out;
  auto* simulate =
      app.add_subcommand("simulate", "Monte Carlo record-age statistics");
  simulate->add_option("--dist", s_dist, "gaussian|uniform|cauchy|renewal")
      ->check(CLI::IsMember({"gaussian", "uniform", "cauchy", "renewal"}));
  simulate->add_option("--n", s_n, "horizon")->check(CLI::PositiveNumber);
  simulate->add_option("--replicas", s_replicas)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", s_seed);
  simulate->add_option("--k-max", s_kmax, "largest rank")
      ->check(CLI::Range(1, 64));
  simulate->add_option("--threads", s_threads,
                       "worker threads (0: RECAGE_THREADS or hardware)");
  add_out_flags(simulate, s_out);
  simulate->callback([&] {
    run_simulate(s_dist, s_n, s_replicas, s_seed, s_kmax, s_threads, s_out);
  });

  // crp-check ---------------------------------------------------------------
  std::int64_t cc_n = 4;
  std::string cc_mode = "exact";
  std::int64_t cc_replicas = 100000;
  std::uint64_t cc_seed = 1;
  OutFlags cc_out;
  auto* crp = app.add_subcommand(
      "crp-check",
      "restaurant partition law against the record-age partition law");
  crp->add_option("--n", cc_n, "number of customers / horizon")
      ->required()
      ->check(CLI::PositiveNumber);
  crp->add_option("--mode", cc_mode, "exact or sample")
      ->check(CLI::IsMember({"exact", "sample"}));
  crp->add_option("--replicas", cc_replicas)->check(CLI::PositiveNumber);
  crp->add_option("--seed", cc_seed);
  add_out_flags(crp, cc_out);
  crp->callback(
      [&] { run_crp_check(cc_n, cc_mode, cc_replicas, cc_seed, cc_out); });

  // pd ------------------------------------------------------------------
  std::int64_t p_replicas = 100000;
  int p_depth = 50;
  std::uint64_t p_seed = 1;
  double p_alpha = 0.5;
  double p_theta = 0.0;
  int p_kmax = 6;
  int p_threads = 0;
  OutFlags p_out;
  auto* pd = app.add_subcommand("pd", "stick-breaking ranked proportions");
  pd->add_option("--replicas", p_replicas)->check(CLI::PositiveNumber);
  pd->add_option("--depth", p_depth, "stick-breaking depth")
      ->check(CLI::Range(1, 1 << 20));
  pd->add_option("--seed", p_seed);
  pd->add_option("--alpha", p_alpha, "discount in [0, 1)");
  pd->add_option("--theta", p_theta, "strength > -alpha");
  pd->add_option("--k-max", p_kmax, "ranked coordinates to report")
      ->check(CLI::Range(1, 64));
  pd->add_option("--threads", p_threads,
                 "worker threads (0: RECAGE_THREADS or hardware)");
  add_out_flags(pd, p_out);
  pd->callback([&] {
    run_pd(p_replicas, p_depth, p_seed, p_alpha, p_theta, p_kmax, p_threads,
           p_out);
  });

  // laplace -----------------------------------------------------------------
  int l_beta = 1;
  int l_k = 1;
  std::string l_quantity = "p";
  std::vector<double> l_s;
  std::int64_t l_nmax = 1024;
  std::int64_t l_ceiling = recage::exact_engine::kDefaultCeiling;
  OutFlags l_out;
  auto* laplace = app.add_subcommand(
      "laplace", "transform sums against their leading-order predictions");
  laplace->add_option("--beta", l_beta, "age-list variant 1|2|3")
      ->required()
      ->check(CLI::Range(1, 3));
  laplace->add_option("--k", l_k, "rank")->check(CLI::Range(1, 1 << 20));
  laplace->add_option("--quantity", l_quantity, "p or EL")
      ->check(CLI::IsMember({"p", "EL"}));
  laplace->add_option("--s", l_s, "transform parameters (repeatable)")
      ->required()
      ->check(CLI::PositiveNumber);
  laplace->add_option("--n-max", l_nmax, "table horizon")
      ->check(CLI::PositiveNumber);
  laplace->add_option("--ceiling", l_ceiling, "work ceiling for the horizon");
  add_out_flags(laplace, l_out);
  laplace->callback([&] {
    run_laplace(l_beta, l_k, l_quantity, l_s, l_nmax, l_ceiling, l_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const recage::ResourceCeiling& e) {
    std::cerr << "resource ceiling: " << e.what() << "\n";
    return 3;
  } catch (const recage::QuadratureFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::overflow_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const recage::DivergentQuantity& e) {
    std::cerr << "requested quantity has no finite value: " << e.what()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
