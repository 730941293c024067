#pragma once

// CSV emission. Numbers use 6 significant digits ("%.6g"), '.' as decimal
// separator and '\n' line endings; every file starts with a header row.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "dealerfield/engine.hpp"
#include "dealerfield/metrics.hpp"

namespace dealerfield::io {

inline std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string agent_name(std::size_t i, std::size_t n_dealers) {
  return n_dealers == 1 ? std::string("Dealer") : "Dealer " + std::to_string(i + 1);
}

inline void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c) out << ',';
    out << cells[c];
  }
  out << '\n';
}

inline void write_stats_csv(std::ostream& out, const metrics::EnsembleStats& stats) {
  write_row(out, {"agent", "average_spread", "profit_mean", "profit_std", "qT_mean", "qT_std"});
  const auto n = stats.dealers.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = stats.dealers[i];
    write_row(out, {agent_name(i, n), format_number(d.average_spread), format_number(d.mean_profit),
                    format_number(d.std_profit), format_number(d.mean_qT), format_number(d.std_qT)});
  }
}

inline std::vector<std::string> trace_header(std::size_t n_dealers) {
  std::vector<std::string> cols = {"t", "s"};
  for (std::size_t i = 1; i <= n_dealers; ++i)
    for (const char* field : {"delta_b", "delta_a", "bid_price", "ask_price", "q", "x", "fill_a", "fill_b"})
      cols.push_back(std::string(field) + "_" + std::to_string(i));
  return cols;
}

inline void write_trace_row(std::ostream& out, const engine::StepTrace& step) {
  std::vector<std::string> cells = {format_number(step.t), format_number(step.s)};
  for (const auto& d : step.dealers) {
    cells.push_back(format_number(d.quote.delta_b));
    cells.push_back(format_number(d.quote.delta_a));
    cells.push_back(format_number(step.s - d.quote.delta_b));
    cells.push_back(format_number(step.s + d.quote.delta_a));
    cells.push_back(std::to_string(d.q));
    cells.push_back(format_number(d.x));
    cells.push_back(d.fill_a ? "1" : "0");
    cells.push_back(d.fill_b ? "1" : "0");
  }
  write_row(out, cells);
}

}  // namespace dealerfield::io
