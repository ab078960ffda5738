#include "assd/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "assd/csv_io.hpp"
#include "assd/harness.hpp"
#include "assd/plot.hpp"
#include "assd/rng.hpp"
#include "assd/solver.hpp"

namespace assd {

namespace {

struct SolveArgs {
  std::string x_path, y_path, algorithm = "assd", out = "beta.csv", trace, bic_path;
  double eta = 0.0, sigma = 0.0, R = 20.0, tau_step = 0.01, rank_tol = linalg::kDefaultRankTol, l1_tol = 1e-5;
  Index lmax = 0;
  bool sigma_hat_abs = false;
  CLI::Option* eta_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* lmax_opt = nullptr;
};

struct ExperimentArgs {
  std::string config, out;
  unsigned jobs = 1;
  bool no_plots = false;
};

struct PlotArgs {
  std::string kind, in, out, metric = "re";
  double stop_level = 1e-5;
};

struct GenArgs {
  std::string config, out = "instance";
  std::map<std::string, std::string> keys;
};

int run_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const DenseMatrix X = csv::read_matrix(a.x_path);
  const Vector y = csv::read_vector(a.y_path);
  SolverConfig cfg;
  cfg.algorithm = parse_algorithm(a.algorithm);
  if (a.eta_opt->count()) cfg.eta = a.eta;
  if (a.sigma_opt->count()) cfg.sigma_known = a.sigma;
  if (a.lmax_opt->count()) cfg.l_max_override = a.lmax;
  cfg.R = a.R;
  cfg.tau_step = a.tau_step;
  cfg.rank_tol = a.rank_tol;
  cfg.l1_tol = a.l1_tol;
  cfg.sigma_hat_on_abs = a.sigma_hat_abs;

  const SolveResult res = solve(X, y, cfg);
  csv::write_vector(a.out, res.beta);
  if (!a.trace.empty()) {
    csv::Table t{{"step", "selected", "l1_per_n", "l2"}, {}};
    for (const auto& s : res.residual_trace)
      t.rows.push_back({std::to_string(s.step), std::to_string(s.selected), csv::format_double(s.l1_per_n),
                        csv::format_double(s.l2)});
    csv::write_table(a.trace, t);
  }
  if (!a.bic_path.empty()) {
    csv::Table t{{"tau", "theta", "p_nz", "bic"}, {}};
    for (const auto& e : res.bic_path)
      t.rows.push_back({csv::format_double(e.tau), csv::format_double(e.theta), std::to_string(e.p_nz),
                        csv::format_double(e.bic)});
    csv::write_table(a.bic_path, t);
  }
  for (const auto& w : res.warnings) err << "warning: " << w << '\n';
  out << "algorithm " << to_string(cfg.algorithm) << ", nonzeros " << res.support.size() << ", L " << res.L_stage1
      << ", stop " << decimate::to_string(res.stop_reason) << ", time " << res.wall_time << " s\n";
  return 0;
}

int run_experiment_cmd(const ExperimentArgs& a, std::ostream& out) {
  harness::ExperimentConfig cfg = harness::load_config(a.config);
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (a.no_plots) cfg.plots = false;
  const harness::ResultTable table = harness::run_experiment(cfg, a.jobs, true);
  for (const auto& r : table.rows) {
    out << (r.sweep ? harness::to_string(table.sweep) + "=" + csv::format_double(*r.sweep) + " " : "") << r.solver
        << ": TP " << r.summary.tp.mean << " (" << r.summary.tp.sd << "), FP " << r.summary.fp.mean << " ("
        << r.summary.fp.sd << "), RE " << r.summary.re.mean << " (" << r.summary.re.sd << "), time "
        << r.summary.time.mean << " s";
    if (r.failures) out << ", " << r.failures << " failed";
    out << '\n';
  }
  out << "results written to " << cfg.output_dir << '\n';
  return 0;
}

int run_plot(const PlotArgs& a, std::ostream& out) {
  const plot::Kind kind = plot::parse_kind(a.kind);
  plot::write_svg(a.out, plot::figure_from_csv(kind, a.in, a.metric, a.stop_level));
  out << "wrote " << a.out << '\n';
  return 0;
}

int run_gen(const GenArgs& a, std::ostream& out) {
  harness::ExperimentConfig cfg;
  if (!a.config.empty()) {
    if (!a.keys.empty()) throw ConfigError("gen: use either --config or instance flags, not both");
    cfg = harness::load_config(a.config);
  } else {
    std::string text;
    for (const auto& [k, v] : a.keys) text += k + " = " + v + "\n";
    cfg = harness::parse_config_text(text);
  }
  std::optional<double> sweep;
  if (!cfg.sweep_values.empty()) sweep = cfg.sweep_values.front();
  auto [mspec, cspec] = harness::apply_sweep(cfg, sweep);
  // The instance the first trial of the same experiment would see.
  const std::uint64_t seed = harness::trial_seed(cfg.seed, 0, 0);
  const datagen::ProblemInstance inst = datagen::gen_instance(mspec, cspec, cfg.sigma, seed);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw IoError("cannot create '" + a.out + "': " + ec.message());
  csv::write_matrix((fs::path(a.out) / "X.csv").string(), inst.X);
  csv::write_vector((fs::path(a.out) / "y.csv").string(), inst.y);
  csv::write_vector((fs::path(a.out) / "beta0.csv").string(), *inst.beta0);

  nlohmann::json j;
  j["n"] = inst.X.rows();
  j["p"] = inst.X.cols();
  j["s0"] = inst.support.size();
  j["support"] = inst.support;
  j["sigma"] = inst.sigma;
  j["family"] = datagen::family_name(mspec.family);
  j["coeff_law"] = datagen::law_name(cspec.law);
  j["master_seed"] = cfg.seed;
  j["seed"] = seed;
  j["prng"] = kPrngName;
  std::ofstream meta((fs::path(a.out) / "instance.json").string());
  if (!meta) throw IoError("cannot write instance.json in '" + a.out + "'");
  meta << j.dump(2) << '\n';
  out << "wrote " << inst.X.rows() << "x" << inst.X.cols() << " instance to " << a.out << '\n';
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse regression by shortest-solution guided decimation", "assd"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve y = X beta + noise for a sparse beta");
  solve_cmd->add_option("X", sa.x_path, "Measurement matrix CSV (n rows, p columns)")->required();
  solve_cmd->add_option("y", sa.y_path, "Response CSV (n values)")->required();
  solve_cmd->add_option("--algorithm", sa.algorithm, "ssd, ssd1 or assd")->capture_default_str();
  sa.eta_opt = solve_cmd->add_option("--eta", sa.eta, "Early-stop level on ||y'||_2");
  sa.sigma_opt = solve_cmd->add_option("--sigma", sa.sigma, "Noise s.d.; eta defaults to sqrt(n)*sigma");
  sa.lmax_opt = solve_cmd->add_option("--lmax", sa.lmax, "Decimation step budget");
  solve_cmd->add_option("--R", sa.R, "Largest threshold multiplier")->capture_default_str();
  solve_cmd->add_option("--tau-step", sa.tau_step, "Threshold grid spacing")->capture_default_str();
  solve_cmd->add_option("--rank-tol", sa.rank_tol, "Relative singular value cutoff")->capture_default_str();
  solve_cmd->add_option("--l1-tol", sa.l1_tol, "ssd stop level on ||y'||_1/n")->capture_default_str();
  solve_cmd->add_flag("--sigma-hat-abs", sa.sigma_hat_abs, "Estimate the coefficient spread from magnitudes");
  solve_cmd->add_option("--out", sa.out, "Output coefficient CSV")->capture_default_str();
  solve_cmd->add_option("--trace", sa.trace, "Write the residual trace CSV here");
  solve_cmd->add_option("--bic-path", sa.bic_path, "Write the threshold/BIC path CSV here");

  ExperimentArgs ea;
  ea.jobs = harness::default_jobs();
  auto* exp_cmd = app.add_subcommand("experiment", "Run a Monte-Carlo experiment from a config file");
  exp_cmd->add_option("--config", ea.config, "Config file (key = value lines, or JSON)")->required();
  exp_cmd->add_option("--out", ea.out, "Output directory (overrides output_dir)");
  exp_cmd->add_option("--jobs", ea.jobs, "Worker threads (default: ASSD_JOBS or 1)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  exp_cmd->add_flag("--no-plots", ea.no_plots, "Skip SVG output");

  PlotArgs pa;
  auto* plot_cmd = app.add_subcommand("plot", "Render an SVG from a CSV written by experiment or solve");
  plot_cmd->add_option("--kind", pa.kind, "rank_curve, q_curve, residual_trace or sweep_lines")->required();
  plot_cmd->add_option("--in", pa.in, "Input CSV")->required();
  plot_cmd->add_option("--out", pa.out, "Output SVG")->required();
  plot_cmd->add_option("--metric", pa.metric, "sweep_lines: tp, fp, re, time or recovery_prob; residual_trace: l1 or l2")
      ->capture_default_str();
  plot_cmd->add_option("--stop-level", pa.stop_level, "residual_trace reference line")->capture_default_str();

  GenArgs ga;
  auto* gen_cmd = app.add_subcommand("gen", "Write one generated instance as CSV files");
  gen_cmd->add_option("--config", ga.config, "Experiment config; the first trial's instance is written");
  gen_cmd->add_option("--out", ga.out, "Output directory")->capture_default_str();
  for (const char* key : {"matrix", "n", "p", "s0", "pi", "rank", "csv_path", "standardize", "coeff_law", "coeff_lo",
                          "coeff_hi", "tail_value", "sigma", "seed"}) {
    std::string flag = std::string("--") + key;
    for (char& c : flag)
      if (c == '_') c = '-';
    gen_cmd->add_option_function<std::string>(flag, [&ga, key](const std::string& v) { ga.keys[key] = v; },
                                              std::string("Instance setting '") + key + "'");
  }

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("assd");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    err << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 1;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(sa, out, err);
    if (exp_cmd->parsed()) return run_experiment_cmd(ea, out);
    if (plot_cmd->parsed()) return run_plot(pa, out);
    if (gen_cmd->parsed()) return run_gen(ga, out);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace assd
