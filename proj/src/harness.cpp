#include "assd/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "assd/csv_io.hpp"
#include "assd/plot.hpp"
#include "assd/rng.hpp"

namespace assd::harness {

namespace {

constexpr std::uint64_t kFixedMatrixTag = 0xF1F1F1F1ULL;

std::string build_id() {
#ifdef ASSD_VERSION
  std::string id = "assd " ASSD_VERSION;
#else
  std::string id = "assd";
#endif
#ifdef __VERSION__
  id += " (" __VERSION__ ")";
#endif
  return id;
}

std::string sweep_cell(const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string(); }

std::string time_cell(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", t);
  return buf;
}

// Keeps error text on one CSV cell.
std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  return s;
}

Index as_index(double v, const char* what) {
  const double r = std::round(v);
  if (r != v || r < 1.0) throw ConfigError(std::string("sweep value for ") + what + " must be a positive integer");
  return static_cast<Index>(r);
}

// Diagnostics of the first trial, filled by whichever worker runs it.
struct FirstTrial {
  std::vector<decimate::StepRecord> trace;
  bool trace_is_l2 = false;
  double stop_level = 0.0;
  std::vector<threshold::BicPathEntry> bic_path;
  linalg::GuidanceVector guidance;
  Vector beta0;
  bool filled = false;
};

void write_first_trial(const std::string& dir, const FirstTrial& ft, bool plots) {
  namespace fs = std::filesystem;
  {
    csv::Table t{{"step", "selected", "l1_per_n", "l2"}, {}};
    for (const auto& s : ft.trace)
      t.rows.push_back({std::to_string(s.step), std::to_string(s.selected), csv::format_double(s.l1_per_n),
                        csv::format_double(s.l2)});
    csv::write_table((fs::path(dir) / "residual_trace.csv").string(), t);
  }
  if (!ft.bic_path.empty()) {
    csv::Table t{{"tau", "theta", "p_nz", "bic"}, {}};
    for (const auto& e : ft.bic_path)
      t.rows.push_back({csv::format_double(e.tau), csv::format_double(e.theta), std::to_string(e.p_nz),
                        csv::format_double(e.bic)});
    csv::write_table((fs::path(dir) / "bic_path.csv").string(), t);
  }
  const auto q = metrics::q_curve(ft.guidance, ft.beta0);
  {
    csv::Table t{{"r", "q"}, {}};
    for (const auto& pt : q) t.rows.push_back({std::to_string(pt.r), csv::format_double(pt.q)});
    csv::write_table((fs::path(dir) / "q_curve.csv").string(), t);
  }
  {
    csv::Table t{{"rank", "column", "value"}, {}};
    Index rank = 0;
    for (Index pos : ft.guidance.ranking)
      t.rows.push_back({std::to_string(++rank), std::to_string(ft.guidance.columns[static_cast<std::size_t>(pos)]),
                        csv::format_double(ft.guidance.values[pos])});
    csv::write_table((fs::path(dir) / "rank_curve.csv").string(), t);
  }
  if (plots) {
    plot::Figure rt = plot::residual_trace_figure(ft.trace, ft.stop_level, ft.trace_is_l2);
    plot::write_svg((fs::path(dir) / "residual_trace.svg").string(), rt);
    plot::write_svg((fs::path(dir) / "q_curve.svg").string(), plot::q_curve_figure(q));
  }
}

void write_metadata(const std::string& path, const ExperimentConfig& config, const ResultTable& table,
                    unsigned jobs) {
  nlohmann::json j;
  j["build_id"] = build_id();
  j["prng"] = kPrngName;
  j["master_seed"] = config.seed;
  j["repeats"] = config.repeats;
  j["jobs"] = jobs;
  j["sweep"] = to_string(config.sweep);
  j["sweep_values"] = config.sweep_values;
  j["fix_matrix"] = config.fix_matrix;
  j["config"] = config.echo;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json row;
    row["sweep"] = r.sweep ? nlohmann::json(*r.sweep) : nlohmann::json(nullptr);
    row["solver"] = r.solver;
    row["completed"] = r.summary.count;
    row["failures"] = r.failures;
    rows.push_back(row);
  }
  j["results"] = rows;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, Index sweep_index, Index repeat) {
  return derive_seed(master, {static_cast<std::uint64_t>(sweep_index), static_cast<std::uint64_t>(repeat)});
}

std::pair<datagen::MatrixSpec, datagen::CoeffSpec> apply_sweep(const ExperimentConfig& config,
                                                               std::optional<double> value) {
  datagen::MatrixSpec m = config.matrix;
  datagen::CoeffSpec c = config.coeffs;
  if (value) {
    switch (config.sweep) {
      case SweepVar::none: break;
      case SweepVar::n: m.n = as_index(*value, "n"); break;
      case SweepVar::p: m.p = as_index(*value, "p"); break;
      case SweepVar::s0: c.s0 = as_index(*value, "s0"); break;
      case SweepVar::pi: std::get<datagen::Ar1Gaussian>(m.family).pi = *value; break;
      case SweepVar::r: std::get<datagen::Structured>(m.family).rank = as_index(*value, "r"); break;
    }
  }
  try {
    m.validate();
    c.validate(m.p);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return {m, c};
}

SolverConfig resolve_solver(const SolverConfig& base, const ExperimentConfig& config, Index n) {
  SolverConfig s = base;
  if (config.lmax_fraction && !s.l_max_override && s.algorithm != Algorithm::ssd) {
    s.l_max_override = std::max<Index>(1, static_cast<Index>(std::floor(*config.lmax_fraction * static_cast<double>(n))));
  }
  return s;
}

unsigned default_jobs() {
  if (const char* env = std::getenv("ASSD_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

ResultTable run_experiment(const ExperimentConfig& config, unsigned jobs, bool write_files) {
  config.validate();
  if (jobs == 0) jobs = 1;

  std::vector<std::optional<double>> sweeps;
  if (config.sweep == SweepVar::none) sweeps.push_back(std::nullopt);
  for (double v : config.sweep_values) sweeps.push_back(v);

  struct Scenario {
    datagen::MatrixSpec matrix;
    datagen::CoeffSpec coeffs;
    std::shared_ptr<const DenseMatrix> fixed;
  };
  std::vector<Scenario> scenarios;
  for (std::size_t s = 0; s < sweeps.size(); ++s) {
    auto [m, c] = apply_sweep(config, sweeps[s]);
    datagen::preload(m);
    std::shared_ptr<const DenseMatrix> fixed;
    if (config.fix_matrix) {
      fixed = std::make_shared<const DenseMatrix>(
          datagen::gen_matrix(m, derive_seed(config.seed, {static_cast<std::uint64_t>(s), kFixedMatrixTag})));
    }
    scenarios.push_back({std::move(m), c, std::move(fixed)});
  }

  const std::size_t n_solvers = config.solvers.size();
  const std::size_t n_tasks = sweeps.size() * static_cast<std::size_t>(config.repeats);
  std::vector<TrialRow> rows(n_tasks * n_solvers);
  FirstTrial first;

  auto run_task = [&](std::size_t task) {
    const std::size_t s = task / static_cast<std::size_t>(config.repeats);
    const Index rep = static_cast<Index>(task % static_cast<std::size_t>(config.repeats));
    const std::uint64_t seed = trial_seed(config.seed, static_cast<Index>(s), rep);
    const Scenario& sc = scenarios[s];
    for (std::size_t k = 0; k < n_solvers; ++k) {
      TrialRow& row = rows[task * n_solvers + k];
      row.sweep = sweeps[s];
      row.sweep_index = static_cast<Index>(s);
      row.repeat = rep;
      row.solver = config.solvers[k].name;
      row.record.seed = seed;
    }
    datagen::ProblemInstance inst;
    try {
      const auto seeds = datagen::InstanceSeeds::from_master(seed);
      inst = sc.fixed ? datagen::gen_instance_with_matrix(*sc.fixed, sc.coeffs, config.sigma, seeds, seed)
                      : datagen::gen_instance(sc.matrix, sc.coeffs, config.sigma, seeds, seed);
    } catch (const std::exception& e) {
      for (std::size_t k = 0; k < n_solvers; ++k) {
        TrialRow& row = rows[task * n_solvers + k];
        row.failed = true;
        row.error = std::string("generation: ") + e.what();
      }
      return;
    }
    const Vector& beta0 = *inst.beta0;
    Vector truth = Vector::Zero(beta0.size());
    for (Index i : inst.support) truth[i] = 1.0;

    for (std::size_t k = 0; k < n_solvers; ++k) {
      TrialRow& row = rows[task * n_solvers + k];
      try {
        const SolverConfig sc_cfg = resolve_solver(config.solvers[k].config, config, inst.X.rows());
        SolveResult res = solve(inst.X, inst.y, sc_cfg);
        const double t = std::round(res.wall_time * 1000.0) / 1000.0;
        row.record = metrics::make_trial_record(seed, res.beta, beta0, truth, t, res.L_stage1,
                                                std::string(decimate::to_string(res.stop_reason)));
        if (task == 0 && write_files) {
          if (k == 0) {
            first.trace = res.residual_trace;
            first.trace_is_l2 = sc_cfg.algorithm != Algorithm::ssd;
            first.stop_level = first.trace_is_l2 ? res.eta : sc_cfg.l1_tol;
          }
          if (first.bic_path.empty() && !res.bic_path.empty()) first.bic_path = res.bic_path;
        }
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        row.record.stop_reason = "failed";
      }
    }
    if (task == 0 && write_files) {
      try {
        first.guidance = decimate::DecimationState(inst.X, inst.y).guidance(config.solvers.front().config.rank_tol);
        first.beta0 = truth;
        first.filled = !first.trace.empty();
      } catch (const std::exception&) {
        first.filled = false;
      }
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < n_tasks; t = next++) run_task(t);
  };
  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(jobs, n_tasks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ResultTable table;
  table.sweep = config.sweep;
  for (std::size_t s = 0; s < sweeps.size(); ++s) {
    for (std::size_t k = 0; k < n_solvers; ++k) {
      std::vector<metrics::TrialRecord> ok;
      ResultRow rr;
      rr.sweep = sweeps[s];
      rr.solver = config.solvers[k].name;
      for (Index rep = 0; rep < config.repeats; ++rep) {
        const TrialRow& row = rows[(s * static_cast<std::size_t>(config.repeats) + static_cast<std::size_t>(rep)) * n_solvers + k];
        if (row.failed) ++rr.failures;
        else ok.push_back(row.record);
      }
      if (!ok.empty()) rr.summary = metrics::aggregate(ok);
      table.rows.push_back(rr);
    }
  }
  table.trials = std::move(rows);

  if (write_files) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + config.output_dir + "': " + ec.message());
    write_trials_csv((fs::path(config.output_dir) / "trials.csv").string(), table);
    write_summary_csv((fs::path(config.output_dir) / "summary.csv").string(), table);
    write_metadata((fs::path(config.output_dir) / "metadata.json").string(), config, table, n_threads);
    if (first.filled) write_first_trial(config.output_dir, first, config.plots);
    if (config.plots && config.sweep != SweepVar::none) {
      const csv::Table summary = csv::read_table((fs::path(config.output_dir) / "summary.csv").string());
      for (const char* metric : {"tp", "fp", "re", "time"}) {
        plot::write_svg((fs::path(config.output_dir) / (std::string("sweep_") + metric + ".svg")).string(),
                        plot::sweep_figure(summary, metric, to_string(config.sweep)));
      }
    }
  }
  return table;
}

void write_trials_csv(const std::string& path, const ResultTable& table) {
  csv::Table t{{"sweep", "solver", "seed", "tp", "fp", "re", "time", "L", "stop_reason"}, {}};
  for (const auto& r : table.trials) {
    if (r.failed) {
      t.rows.push_back({sweep_cell(r.sweep), r.solver, std::to_string(r.record.seed), "", "", "", "", "",
                        "failed: " + sanitize(r.error)});
    } else {
      t.rows.push_back({sweep_cell(r.sweep), r.solver, std::to_string(r.record.seed), std::to_string(r.record.tp),
                        std::to_string(r.record.fp), csv::format_double(r.record.re), time_cell(r.record.wall_time),
                        std::to_string(r.record.L_stage1), r.record.stop_reason});
    }
  }
  csv::write_table(path, t);
}

void write_summary_csv(const std::string& path, const ResultTable& table) {
  csv::Table t{{"sweep", "solver", "tp_mean", "tp_sd", "fp_mean", "fp_sd", "re_mean", "re_sd", "time_mean",
                "time_sd", "recovery_prob"},
               {}};
  for (const auto& r : table.rows) {
    if (r.summary.count == 0) continue;  // every trial failed; counted in metadata
    const auto& s = r.summary;
    t.rows.push_back({sweep_cell(r.sweep), r.solver, csv::format_double(s.tp.mean), csv::format_double(s.tp.sd),
                      csv::format_double(s.fp.mean), csv::format_double(s.fp.sd), csv::format_double(s.re.mean),
                      csv::format_double(s.re.sd), csv::format_double(s.time.mean), csv::format_double(s.time.sd),
                      csv::format_double(s.recovery_prob)});
  }
  csv::write_table(path, t);
}

std::vector<TrialRow> read_trials_csv(const std::string& path) {
  const csv::Table t = csv::read_table(path);
  const std::size_t c_sweep = t.column("sweep"), c_solver = t.column("solver"), c_seed = t.column("seed"),
                    c_tp = t.column("tp"), c_fp = t.column("fp"), c_re = t.column("re"), c_time = t.column("time"),
                    c_L = t.column("L"), c_stop = t.column("stop_reason");
  std::vector<TrialRow> out;
  try {
    for (const auto& cells : t.rows) {
      TrialRow r;
      if (!cells[c_sweep].empty()) r.sweep = std::stod(cells[c_sweep]);
      r.solver = cells[c_solver];
      r.record.seed = std::stoull(cells[c_seed]);
      r.record.stop_reason = cells[c_stop];
      if (r.record.stop_reason.rfind("failed", 0) == 0) {
        r.failed = true;
        r.error = r.record.stop_reason;
      } else {
        r.record.tp = std::stoll(cells[c_tp]);
        r.record.fp = std::stoll(cells[c_fp]);
        r.record.re = std::stod(cells[c_re]);
        r.record.wall_time = std::stod(cells[c_time]);
        r.record.L_stage1 = std::stoll(cells[c_L]);
      }
      out.push_back(std::move(r));
    }
  } catch (const std::logic_error& e) {
    throw IoError(path + ": malformed trials table (" + e.what() + ")");
  }
  return out;
}

}  // namespace assd::harness
