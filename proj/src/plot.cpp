#include "assd/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace assd::plot {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 52.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> ticks;
};

Axis linear_axis(double lo, double hi) {
  if (hi - lo <= 0.0) {
    const double pad = lo == 0.0 ? 0.5 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double step = nice_step(hi - lo);
  Axis a{std::floor(lo / step) * step, std::ceil(hi / step) * step, {}};
  for (double t = a.lo; t <= a.hi + step * 1e-9; t += step) a.ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  return a;
}

// Works in log10 units.
Axis log_axis(double lo, double hi) {
  Axis a{std::floor(std::log10(lo)), std::ceil(std::log10(hi)), {}};
  if (a.hi <= a.lo) a.hi = a.lo + 1.0;
  const double step = std::max(1.0, std::ceil((a.hi - a.lo) / 8.0));
  for (double t = a.lo; t <= a.hi + 1e-9; t += step) a.ticks.push_back(t);
  return a;
}

std::vector<double> column_values(const csv::Table& t, const std::string& name, const std::string& path) {
  const std::size_t c = t.column(name);
  std::vector<double> out;
  for (const auto& row : t.rows) {
    try {
      out.push_back(std::stod(row.at(c)));
    } catch (const std::exception&) {
      throw IoError(path + ": column '" + name + "' holds a non-numeric cell");
    }
  }
  return out;
}

}  // namespace

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::rank_curve: return "rank_curve";
    case Kind::q_curve: return "q_curve";
    case Kind::residual_trace: return "residual_trace";
    case Kind::sweep_lines: return "sweep_lines";
  }
  return "";
}

Kind parse_kind(const std::string& name) {
  for (Kind k : {Kind::rank_curve, Kind::q_curve, Kind::residual_trace, Kind::sweep_lines})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown plot kind '" + name + "' (expected rank_curve, q_curve, residual_trace or sweep_lines)");
}

std::string render_svg(const Figure& figure) {
  // Points that cannot be drawn (non-finite, or ≤ 0 on a log axis) are skipped.
  std::vector<Series> drawn;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Series& s : figure.series) {
    if (s.x.size() != s.y.size()) throw ContractError("plot series '" + s.label + "': x and y lengths differ");
    Series d{s.label, {}, {}};
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (figure.log_y && s.y[i] <= 0.0) continue;
      d.x.push_back(s.x[i]);
      d.y.push_back(s.y[i]);
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
    if (!d.x.empty()) drawn.push_back(std::move(d));
  }
  if (drawn.empty()) throw InputError("plot '" + figure.title + "': no data points to draw");
  if (figure.hline && (!figure.log_y || *figure.hline > 0.0)) {
    ymin = std::min(ymin, *figure.hline);
    ymax = std::max(ymax, *figure.hline);
  }

  const Axis ax = linear_axis(xmin, xmax);
  const Axis ay = figure.log_y ? log_axis(ymin, ymax) : linear_axis(ymin, ymax);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto X = [&](double x) { return kLeft + (x - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto Y = [&](double y) {
    const double v = figure.log_y ? std::log10(y) : y;
    return kTop + ph - (v - ay.lo) / (ay.hi - ay.lo) * ph;
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << px(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(figure.title) << "</text>\n";
  o << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\"" << px(pw) << "\" height=\"" << px(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ax.ticks) {
    o << "<line x1=\"" << px(X(t)) << "\" y1=\"" << px(kTop + ph) << "\" x2=\"" << px(X(t)) << "\" y2=\""
      << px(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << px(X(t)) << "\" y=\"" << px(kTop + ph + 18) << "\" text-anchor=\"middle\">" << num(t)
      << "</text>\n";
  }
  for (double t : ay.ticks) {
    const double yy = kTop + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
    o << "<line x1=\"" << px(kLeft - 5) << "\" y1=\"" << px(yy) << "\" x2=\"" << px(kLeft) << "\" y2=\"" << px(yy)
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(yy + 4) << "\" text-anchor=\"end\">"
      << (figure.log_y ? "1e" + num(t) : num(t)) << "</text>\n";
  }
  o << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"" << px(kHeight - 12) << "\" text-anchor=\"middle\">"
    << escape(figure.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << px(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << px(kTop + ph / 2) << ")\">" << escape(figure.y_label) << "</text>\n";

  if (figure.hline && (!figure.log_y || *figure.hline > 0.0)) {
    const double yy = Y(*figure.hline);
    o << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(yy) << "\" x2=\"" << px(kLeft + pw) << "\" y2=\"" << px(yy)
      << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
    if (!figure.hline_label.empty())
      o << "<text x=\"" << px(kLeft + pw - 4) << "\" y=\"" << px(yy - 4) << "\" text-anchor=\"end\" fill=\"gray\">"
        << escape(figure.hline_label) << "</text>\n";
  }

  for (std::size_t k = 0; k < drawn.size(); ++k) {
    const Series& s = drawn[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) o << (i ? " " : "") << px(X(s.x[i])) << ',' << px(Y(s.y[i]));
    o << "\"/>\n";
    if (s.x.size() <= 60) {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        o << "<circle cx=\"" << px(X(s.x[i])) << "\" cy=\"" << px(Y(s.y[i])) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    }
    if (!s.label.empty()) {
      const double ly = kTop + 16 + 16 * static_cast<double>(k);
      o << "<line x1=\"" << px(kLeft + pw - 110) << "\" y1=\"" << px(ly - 4) << "\" x2=\"" << px(kLeft + pw - 90)
        << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      o << "<text x=\"" << px(kLeft + pw - 84) << "\" y=\"" << px(ly) << "\">" << escape(s.label) << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const std::string& path, const Figure& figure) {
  const std::string text = render_svg(figure);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

Figure residual_trace_figure(const std::vector<decimate::StepRecord>& trace, double stop_level, bool use_l2) {
  Figure f;
  f.title = "Residual during decimation";
  f.x_label = "step";
  f.y_label = use_l2 ? "||y'||_2" : "||y'||_1 / n";
  f.log_y = true;
  Series s{use_l2 ? "l2 residual" : "l1 residual per row", {}, {}};
  for (const auto& r : trace) {
    s.x.push_back(static_cast<double>(r.step));
    s.y.push_back(use_l2 ? r.l2 : r.l1_per_n);
  }
  f.series.push_back(std::move(s));
  f.hline = stop_level;
  f.hline_label = "stop level " + num(stop_level);
  return f;
}

Figure q_curve_figure(const std::vector<metrics::QPoint>& points) {
  Figure f;
  f.title = "Share of true nonzeros among top-ranked guidance entries";
  f.x_label = "r";
  f.y_label = "q(r)";
  Series s{"", {}, {}};
  for (const auto& p : points) {
    s.x.push_back(static_cast<double>(p.r));
    s.y.push_back(p.q);
  }
  f.series.push_back(std::move(s));
  return f;
}

Figure rank_curve_figure(const linalg::GuidanceVector& guidance) {
  Figure f;
  f.title = "Guidance magnitudes by rank";
  f.x_label = "rank";
  f.y_label = "|gamma|";
  f.log_y = true;
  Series s{"", {}, {}};
  double r = 0.0;
  for (Index pos : guidance.ranking) {
    s.x.push_back(++r);
    s.y.push_back(std::abs(guidance.values[pos]));
  }
  f.series.push_back(std::move(s));
  return f;
}

Figure sweep_figure(const csv::Table& summary, const std::string& metric, const std::string& sweep_name) {
  const std::size_t c_sweep = summary.column("sweep");
  const std::size_t c_solver = summary.column("solver");
  const std::size_t c_metric = summary.column(metric + "_mean");
  std::map<std::string, std::size_t> index;
  Figure f;
  f.title = metric + " against " + sweep_name;
  f.x_label = sweep_name;
  f.y_label = metric + " (mean)";
  for (const auto& row : summary.rows) {
    if (row.at(c_sweep).empty()) continue;
    const std::string& solver = row.at(c_solver);
    auto [it, inserted] = index.emplace(solver, f.series.size());
    if (inserted) f.series.push_back({solver, {}, {}});
    try {
      f.series[it->second].x.push_back(std::stod(row.at(c_sweep)));
      f.series[it->second].y.push_back(std::stod(row.at(c_metric)));
    } catch (const std::exception&) {
      throw IoError("summary table: non-numeric sweep or " + metric + " cell");
    }
  }
  if (f.series.empty())
    throw InputError("sweep_lines: the summary has no sweep values; run an experiment with 'sweep' set");
  return f;
}

Figure figure_from_csv(Kind kind, const std::string& path, const std::string& metric, double stop_level) {
  const csv::Table t = csv::read_table(path);
  if (t.rows.empty()) throw InputError(path + ": no data rows to plot");
  switch (kind) {
    case Kind::residual_trace: {
      const bool l2 = metric == "l2";
      const auto steps = column_values(t, "step", path);
      const auto vals = column_values(t, l2 ? "l2" : "l1_per_n", path);
      std::vector<decimate::StepRecord> trace;
      for (std::size_t i = 0; i < steps.size(); ++i) {
        decimate::StepRecord r;
        r.step = static_cast<Index>(steps[i]);
        (l2 ? r.l2 : r.l1_per_n) = vals[i];
        trace.push_back(r);
      }
      return residual_trace_figure(trace, stop_level, l2);
    }
    case Kind::q_curve: {
      const auto r = column_values(t, "r", path);
      const auto q = column_values(t, "q", path);
      std::vector<metrics::QPoint> pts;
      for (std::size_t i = 0; i < r.size(); ++i) pts.push_back({static_cast<Index>(r[i]), q[i]});
      return q_curve_figure(pts);
    }
    case Kind::rank_curve: {
      const auto v = column_values(t, "value", path);
      linalg::GuidanceVector g;
      g.values = Vector(static_cast<Index>(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i) {
        g.values[static_cast<Index>(i)] = v[i];
        g.columns.push_back(static_cast<Index>(i));
        g.ranking.push_back(static_cast<Index>(i));
      }
      return rank_curve_figure(g);
    }
    case Kind::sweep_lines: return sweep_figure(t, metric, "sweep");
  }
  throw ContractError("figure_from_csv: unhandled kind");
}

}  // namespace assd::plot
