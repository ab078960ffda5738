#pragma once

#include <optional>
#include <string>
#include <vector>

#include "assd/csv_io.hpp"
#include "assd/decimate.hpp"
#include "assd/linalg.hpp"
#include "assd/metrics.hpp"

namespace assd::plot {

enum class Kind { rank_curve, q_curve, residual_trace, sweep_lines };

std::string to_string(Kind kind);
/// Throws ConfigError for an unknown name.
Kind parse_kind(const std::string& name);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
  std::optional<double> hline;  // dashed horizontal reference line
  std::string hline_label;
};

/// Standalone SVG text. Same figure, same bytes. Throws InputError when
/// there is nothing to draw.
std::string render_svg(const Figure& figure);
void write_svg(const std::string& path, const Figure& figure);

/// ‖y′‖₁/n (or ‖y′‖₂ with use_l2) per step on a log axis, with the stop
/// level drawn across.
Figure residual_trace_figure(const std::vector<decimate::StepRecord>& trace, double stop_level,
                             bool use_l2 = false);
Figure q_curve_figure(const std::vector<metrics::QPoint>& points);
/// |γ̂| against its rank.
Figure rank_curve_figure(const linalg::GuidanceVector& guidance);
/// One line per solver of `<metric>_mean` against the sweep value of a summary table.
Figure sweep_figure(const csv::Table& summary, const std::string& metric, const std::string& sweep_name);

/// The CSV layouts the harness writes:
///   residual_trace: step,selected,l1_per_n,l2   (metric "l1" or "l2")
///   q_curve:        r,q
///   rank_curve:     rank,column,value
///   sweep_lines:    summary.csv
Figure figure_from_csv(Kind kind, const std::string& path, const std::string& metric = "re",
                       double stop_level = 1e-5);

}  // namespace assd::plot
