// Command-line front end: run the experiment described by a config file
// and emit a result table, or render charts from an emitted table.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levyrbm/experiments.hpp"
#include "svg_plot.hpp"

namespace {

using namespace levyrbm;

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::string in_path;  // plot only: result CSV, defaults to the config's out
  std::string format;
  int threads = -1;
};

ExperimentConfig load_config(const CliOptions& opts, ExperimentKind expected) {
  auto kv = KeyValueConfig::parse_file(opts.config_path);
  auto cfg = ExperimentConfig::from_kv(kv);
  if (cfg.kind != expected)
    throw std::invalid_argument("config declares experiment '" + to_string(cfg.kind) +
                                "' but the subcommand expects '" + to_string(expected) + "'");
  if (!opts.out_path.empty()) cfg.out_path = opts.out_path;
  if (!opts.format.empty()) cfg.format = parse_emit_format(opts.format);
  if (opts.threads >= 0) cfg.threads = opts.threads;
  if (cfg.out_path.empty())
    throw std::invalid_argument("no output path: set 'out' in the config or pass --out");
  for (const auto& warning : cfg.validate()) std::cerr << "warning: " << warning << "\n";
  return cfg;
}

int run_experiment_command(const CliOptions& opts, ExperimentKind kind) {
  const auto cfg = load_config(opts, kind);
  const auto output = run_experiment(cfg);
  emit(output.table, cfg.out_path, cfg.format);
  if (kind == ExperimentKind::cucker_smale) emit_traces(output.traces, cfg.out_path + ".traces.csv");
  for (const auto& line : output.summary) std::cout << line << "\n";
  std::cout << "wrote " << output.table.rows.size() << " rows to " << cfg.out_path << "\n";
  return 0;
}

plot::Series make_series(const std::string& label, const std::string& color) {
  plot::Series s;
  s.label = label;
  s.color = color;
  return s;
}

const char* kPalette[] = {"#1f6fb2", "#d1495b", "#3a7d44", "#8d5a97", "#c77d2e", "#3d8b8b"};

// Build the chart for one experiment kind from its emitted rows.
plot::ChartSpec chart_for(const ExperimentConfig& cfg, const ResultTable& table,
                          const std::string& traces_path) {
  plot::ChartSpec chart;
  switch (cfg.kind) {
    case ExperimentKind::rate_sweep: {
      chart.title = "Coupled error vs batch step (log-log)";
      chart.xlabel = "kappa";
      chart.ylabel = "mean e1(T)";
      chart.logx = chart.logy = true;
      std::map<int, std::map<double, double>> by_n;  // n -> kappa -> mean
      for (const auto& row : table.rows)
        if (row.e1_mean && row.kappa) by_n[*row.n_particles][*row.kappa] = *row.e1_mean;
      int ci = 0;
      for (const auto& [n, points] : by_n) {
        auto s = make_series("N=" + std::to_string(n), kPalette[ci++ % 6]);
        for (const auto& [kappa, mean] : points) {
          s.xs.push_back(kappa);
          s.ys.push_back(mean);
        }
        chart.series.push_back(std::move(s));
      }
      return chart;
    }
    case ExperimentKind::long_time: {
      chart.title = "Coupled error vs horizon";
      chart.xlabel = "T";
      chart.ylabel = "mean e1(T)";
      std::map<double, double> points;
      for (const auto& row : table.rows)
        if (row.e1_mean && row.horizon) points[*row.horizon] = *row.e1_mean;
      auto s = make_series("mean e1", kPalette[0]);
      for (const auto& [t, mean] : points) {
        s.xs.push_back(t);
        s.ys.push_back(mean);
      }
      chart.series.push_back(std::move(s));
      return chart;
    }
    case ExperimentKind::cost_bench: {
      chart.title = "Wall clock vs particle count (log-log)";
      chart.xlabel = "N";
      chart.ylabel = "seconds";
      chart.logx = chart.logy = true;
      for (int mi = 0; mi < 2; ++mi) {
        const std::string mode = (mi == 0) ? "full" : "rbm";
        std::map<int, std::pair<double, int>> acc;
        for (const auto& row : table.rows) {
          if (row.mode == mode && row.wall_clock_sec) {
            acc[*row.n_particles].first += *row.wall_clock_sec;
            acc[*row.n_particles].second += 1;
          }
        }
        auto s = make_series(mode, kPalette[mi]);
        for (const auto& [n, sum_count] : acc) {
          s.xs.push_back(n);
          s.ys.push_back(sum_count.first / sum_count.second);
        }
        chart.series.push_back(std::move(s));
      }
      return chart;
    }
    case ExperimentKind::cucker_smale: {
      chart.title = "Flocking diameters (first seed)";
      chart.xlabel = "t";
      chart.ylabel = "diameter";
      const auto traces = read_traces_csv(traces_path);
      if (traces.rows.empty()) throw std::runtime_error("trace file has no rows");
      const auto first_seed = traces.rows.front().seed;
      const char* labels[4] = {"D_v full", "D_x full", "D_v rbm", "D_x rbm"};
      for (int si = 0; si < 4; ++si) chart.series.push_back(make_series(labels[si], kPalette[si]));
      for (const auto& row : traces.rows) {
        if (row.seed != first_seed) continue;
        const int base = (row.mode == "full") ? 0 : 2;
        chart.series[base].xs.push_back(row.t);
        chart.series[base].ys.push_back(row.dv);
        chart.series[base + 1].xs.push_back(row.t);
        chart.series[base + 1].ys.push_back(row.dx);
      }
      return chart;
    }
  }
  throw std::logic_error("chart_for: unreachable");
}

int run_plot_command(const CliOptions& opts) {
  auto kv = KeyValueConfig::parse_file(opts.config_path);
  auto cfg = ExperimentConfig::from_kv(kv);
  const std::string in_path = opts.in_path.empty() ? cfg.out_path : opts.in_path;
  if (in_path.empty())
    throw std::invalid_argument("plot: no input table; set 'out' in the config or pass --in");
  if (opts.out_path.empty()) throw std::invalid_argument("plot: --out <svg path> is required");

  const auto table = read_result_csv(in_path);
  const auto chart = chart_for(cfg, table, in_path + ".traces.csv");
  std::filesystem::path out(opts.out_path);
  if (!out.parent_path().empty()) std::filesystem::create_directories(out.parent_path());
  std::ofstream svg(out);
  if (!svg) throw std::runtime_error("cannot write '" + opts.out_path + "'");
  svg << plot::render_svg(chart);
  std::cout << "wrote chart to " << opts.out_path << "\n";
  return 0;
}

void add_common_options(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out_path, "output path (overrides the config's 'out')");
  cmd->add_option("--format", opts.format, "csv or json (overrides the config)");
  cmd->add_option("--threads", opts.threads, "worker threads (0 = auto; overrides LEVYRBM_THREADS)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random batch simulation of interacting particle systems driven by Levy noise"};
  app.require_subcommand(1);
  CliOptions opts;

  auto* rate = app.add_subcommand("rate-sweep", "coupled error vs batch step, slope fit");
  auto* longtime = app.add_subcommand("long-time", "coupled error vs horizon");
  auto* cost = app.add_subcommand("cost-bench", "full vs random-batch cost scaling");
  auto* flock = app.add_subcommand("cucker-smale", "second-order flocking scenarios");
  auto* plotcmd = app.add_subcommand("plot", "render an SVG chart from an emitted table");
  for (auto* cmd : {rate, longtime, cost, flock, plotcmd}) add_common_options(cmd, opts);
  plotcmd->add_option("--in", opts.in_path, "result CSV to read (defaults to the config's 'out')");

  CLI11_PARSE(app, argc, argv);
  try {
    if (rate->parsed()) return run_experiment_command(opts, levyrbm::ExperimentKind::rate_sweep);
    if (longtime->parsed()) return run_experiment_command(opts, levyrbm::ExperimentKind::long_time);
    if (cost->parsed()) return run_experiment_command(opts, levyrbm::ExperimentKind::cost_bench);
    if (flock->parsed()) return run_experiment_command(opts, levyrbm::ExperimentKind::cucker_smale);
    if (plotcmd->parsed()) return run_plot_command(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
