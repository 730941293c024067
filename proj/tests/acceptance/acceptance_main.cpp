// Acceptance suite: one PASS/FAIL line per criterion, detail lines indented
// below. Exits 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dealerfield/checks.hpp"
#include "dealerfield/dp_ladder.hpp"
#include "dealerfield/engine.hpp"
#include "dealerfield/metrics.hpp"
#include "dealerfield/presets.hpp"
#include "dealerfield/quoting.hpp"

using namespace dealerfield;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
  Criterion(int id_, std::string title_) : id(id_), title(std::move(title_)) {}

  int id;
  std::string title;
  bool pass = true;
  std::vector<std::string> details;

  void expect(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string near(const std::string& label, double got, double want, double tol) {
  std::ostringstream s;
  s << label << ": " << fmt("%.4f", got) << " vs " << fmt("%.4f", want) << " (tol " << tol << ")";
  return s.str();
}

bool within(double got, double want, double tol) { return std::abs(got - want) <= tol; }
bool within_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

struct Ensemble {
  metrics::EnsembleStats stats;
  std::vector<metrics::Moments> profit;
  double seconds = 0.0;
};

Ensemble run_preset(const char* name) {
  const auto config = io::make_preset(name).config;
  const auto start = Clock::now();
  const auto results = engine::simulate_ensemble(config, 0);
  Ensemble e;
  e.stats = metrics::ensemble_stats(results);
  e.seconds = seconds_since(start);
  e.profit.resize(config.n_dealers());
  for (const auto& run : results)
    for (std::size_t i = 0; i < config.n_dealers(); ++i) e.profit[i].add(metrics::profit(run, i));
  return e;
}

Criterion average_spread() {
  Criterion c{1, "average spread from the analytic time average"};
  struct Want {
    const char* preset;
    std::vector<double> spreads;
  };
  const std::vector<Want> table = {{"table1", {1.49}},       {"table2", {2.11, 2.11}},
                                   {"table3", {2.79, 2.79, 2.79}},
                                   {"table4", std::vector<double>(7, 5.40)},
                                   {"table5", {2.01, 3.39}}, {"table6", {2.77, 2.79, 3.74}}};
  const auto start = Clock::now();
  for (const auto& w : table) {
    const auto config = io::make_preset(w.preset).config;
    for (std::size_t i = 0; i < w.spreads.size(); ++i) {
      const double got = metrics::analytic_average_spread(config.dealers[i], config.market, config.n_dealers());
      c.expect(within(got, w.spreads[i], 0.01 + 1e-12),
               near(std::string(w.preset) + " dealer " + std::to_string(i + 1), got, w.spreads[i], 0.01));
    }
  }
  const double t = seconds_since(start);
  c.expect(t < 1.0, "runtime " + fmt("%.3g", t) + " s < 1 s");
  return c;
}

Criterion single_dealer() {
  Criterion c{2, "one dealer Monte Carlo profit"};
  const auto e = run_preset("table1");
  const auto& d = e.stats.dealers[0];
  c.expect(within(d.mean_profit, 64.26, 2.0), near("mean profit", d.mean_profit, 64.26, 2.0));
  c.expect(within(d.std_profit, 5.68, 1.5), near("std profit", d.std_profit, 5.68, 1.5));
  c.expect(std::abs(d.mean_qT) <= 0.4, near("|mean q_T|", std::abs(d.mean_qT), 0.0, 0.4));
  c.expect(e.seconds < 5.0, "runtime " + fmt("%.3g", e.seconds) + " s < 5 s");
  return c;
}

Criterion competition() {
  Criterion c{3, "competition splits profit"};
  struct Want {
    const char* preset;
    double mean;
    double tol;
  };
  for (const Want& w : {Want{"table2", 29.3, 2.0}, Want{"table3", 15.8, 2.0}, Want{"table4", 1.86, 0.8}}) {
    const auto e = run_preset(w.preset);
    const auto n = e.stats.dealers.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double got = e.stats.dealers[i].mean_profit;
      c.expect(within(got, w.mean, w.tol),
               near(std::string(w.preset) + " dealer " + std::to_string(i + 1), got, w.mean, w.tol));
    }
    double worst_z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double se = std::hypot(e.profit[i].std_error(), e.profit[j].std_error());
        worst_z = std::max(worst_z, std::abs(e.profit[i].mean() - e.profit[j].mean()) / se);
      }
    c.expect(worst_z <= 3.0, std::string(w.preset) + " max pairwise |z| " + fmt("%.2f", worst_z) + " <= 3");
  }
  return c;
}

Criterion risk_aversion() {
  Criterion c{4, "risk-aversion sensitivity"};
  const auto e = run_preset("table5");
  const auto& lo = e.stats.dealers[0];
  const auto& hi = e.stats.dealers[1];
  c.expect(lo.mean_profit > hi.mean_profit, "ordering: mean profit " + fmt("%.2f", lo.mean_profit) + " > " +
                                                fmt("%.2f", hi.mean_profit));
  c.expect(lo.std_profit > hi.std_profit, "ordering: std profit " + fmt("%.2f", lo.std_profit) + " > " +
                                              fmt("%.2f", hi.std_profit));
  c.expect(lo.std_qT > hi.std_qT, "ordering: std q_T " + fmt("%.2f", lo.std_qT) + " > " + fmt("%.2f", hi.std_qT));
  struct Mag {
    const char* label;
    double got;
    double want;
  };
  for (const auto& m : {Mag{"gamma=0.01 mean profit", lo.mean_profit, 23.97},
                        Mag{"gamma=1 mean profit", hi.mean_profit, 17.98},
                        Mag{"gamma=0.01 std profit", lo.std_profit, 7.44},
                        Mag{"gamma=1 std profit", hi.std_profit, 4.25},
                        Mag{"gamma=0.01 std q_T", lo.std_qT, 4.30},
                        Mag{"gamma=1 std q_T", hi.std_qT, 1.61}})
    c.expect(within_rel(m.got, m.want, 0.25), near(m.label, m.got, m.want, 0.25 * m.want));
  return c;
}

Criterion initial_inventory() {
  Criterion c{5, "initial-inventory sensitivity"};
  const auto t7 = run_preset("table7");
  c.expect(t7.stats.dealers[0].mean_profit < t7.stats.dealers[1].mean_profit,
           "table7 q0=10 dealer " + fmt("%.2f", t7.stats.dealers[0].mean_profit) + " < q0=1 dealer " +
               fmt("%.2f", t7.stats.dealers[1].mean_profit));
  const auto t8 = run_preset("table8");
  const double p = t8.stats.dealers[0].mean_profit;
  c.expect(p < 0.0 && p < -250.0, "table8 q0=50 dealer " + fmt("%.2f", p) + " < -250");
  c.expect(within_rel(p, -391.98, 0.35), near("table8 q0=50 dealer", p, -391.98, 0.35 * 391.98));
  return c;
}

Criterion oracle() {
  Criterion c{6, "numeric one-period argmax equals the closed form"};
  const auto start = Clock::now();
  const auto market = io::baseline_market();
  for (std::size_t n : {1u, 2u, 3u, 7u}) {
    const double err = checks::oracle_sweep_max_error(n, market);
    c.expect(err <= 1e-3, "N=" + std::to_string(n) + " max coordinate error " + fmt("%.2e", err) + " <= 1e-3");
  }
  const double t = seconds_since(start);
  c.expect(t < 30.0, "runtime " + fmt("%.3g", t) + " s < 30 s");
  return c;
}

Criterion reduction() {
  Criterion c{7, "single-dealer spread reduces to the classic formula"};
  const auto market = io::baseline_market();
  const auto grid = time_grid(market);
  double worst = 0.0;
  for (std::size_t l = 0; l < grid.size(); ++l) {
    const double tau = grid.remaining(l);
    const quoting::QuoteContext ctx{0, 0.1, 1.0, market.k, 1, market.sigma, tau};
    const double classic = 0.1 * market.sigma * market.sigma * tau + 2.0 / 0.1 * std::log(1.0 + 0.1 / market.k);
    worst = std::max(worst, std::abs(quoting::spread(ctx) - classic));
  }
  c.expect(worst <= 1e-12, "max |spread - classic| " + fmt("%.2e", worst) + " <= 1e-12");
  return c;
}

void fold_rows(Criterion& c, const std::vector<checks::CheckRow>& rows, const std::vector<std::string>& names) {
  for (const auto& name : names)
    for (const auto& r : rows)
      if (r.name == name) c.expect(r.pass, name + " actual " + fmt("%.3g", r.actual) + " tol " + fmt("%g", r.tolerance));
}

Criterion invariants(const std::vector<checks::CheckRow>& rows) {
  Criterion c{8, "structural invariants"};
  fold_rows(c, rows,
            {"spread_independent_of_inventory", "offsets_sum_to_spread_relative", "quote_mirror_symmetry",
             "reservation_chaining", "pnl_decomposition", "inventory_conservation",
             "replication_order_determinism"});
  return c;
}

Criterion active_beats_inactive(const std::vector<checks::CheckRow>& rows) {
  Criterion c{9, "active quoting beats holding"};
  fold_rows(c, rows, {"active_utility_exceeds_inactive_zscore", "exact_dp_beats_inactive_all_cells"});
  return c;
}

}  // namespace

int main() {
  checks::CheckOptions opts;
  opts.runs = 1000;
  opts.threads = 0;
  std::vector<checks::CheckRow> rows;
  checks::add_formula_checks(rows);
  checks::add_engine_checks(rows, opts);
  checks::add_ladder_checks(rows, opts);

  const std::vector<Criterion> all = {average_spread(), single_dealer(), competition(), risk_aversion(),
                                      initial_inventory(), oracle(), reduction(), invariants(rows),
                                      active_beats_inactive(rows)};
  int failed = 0;
  for (const auto& c : all) {
    std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << "\n";
    for (const auto& d : c.details) std::cout << "    " << d << "\n";
    failed += c.pass ? 0 : 1;
  }
  std::cout << (all.size() - failed) << "/" << all.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
