// Experiment orchestration: the convergence-rate sweep, the long-time
// error study, the cost benchmark, and the flocking scenarios. Each runner
// expands its sweep grid into independent (config, seed) tasks, executes
// them over a worker pool, and merges rows in a fixed order so the emitted
// table is identical for any thread count.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "levyrbm/config.hpp"
#include "levyrbm/cucker_smale.hpp"
#include "levyrbm/dynamics.hpp"
#include "levyrbm/initial_states.hpp"
#include "levyrbm/result_table.hpp"
#include "levyrbm/worker_pool.hpp"

namespace levyrbm {

enum class ExperimentKind { rate_sweep, long_time, cost_bench, cucker_smale };

inline ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "rate_sweep") return ExperimentKind::rate_sweep;
  if (name == "long_time") return ExperimentKind::long_time;
  if (name == "cost_bench") return ExperimentKind::cost_bench;
  if (name == "cucker_smale") return ExperimentKind::cucker_smale;
  throw std::invalid_argument("unknown experiment '" + name +
                              "' (expected rate_sweep | long_time | cost_bench | cucker_smale)");
}

inline std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::rate_sweep: return "rate_sweep";
    case ExperimentKind::long_time: return "long_time";
    case ExperimentKind::cost_bench: return "cost_bench";
    case ExperimentKind::cucker_smale: return "cucker_smale";
  }
  return "rate_sweep";
}

inline JumpPart parse_jump_part(const std::string& name) {
  if (name == "none") return std::monostate{};
  if (name.rfind("alpha_stable:", 0) == 0) {
    AlphaStableJump jump;
    bool have_alpha = false;
    for (const auto& item : split_list(name.substr(13))) {
      if (item.rfind("alpha=", 0) == 0) {
        jump.alpha = parse_real(item.substr(6));
        have_alpha = true;
      } else if (item.rfind("scale=", 0) == 0) {
        jump.scale = parse_real(item.substr(6));
      } else {
        throw std::invalid_argument("alpha_stable jump: unknown parameter '" + item + "'");
      }
    }
    if (!have_alpha) throw std::invalid_argument("alpha_stable jump: alpha= is required");
    return jump;
  }
  if (name.rfind("compound_poisson:", 0) == 0) {
    CompoundPoissonJump jump;
    for (const auto& item : split_list(name.substr(17))) {
      if (item.rfind("lambda=", 0) == 0)
        jump.rate_lambda = parse_real(item.substr(7));
      else if (item.rfind("sdev=", 0) == 0)
        jump.jump_sdev = parse_real(item.substr(5));
      else
        throw std::invalid_argument("compound_poisson jump: unknown parameter '" + item + "'");
    }
    return jump;
  }
  throw std::invalid_argument(
      "unknown noise_jump '" + name +
      "' (expected none | alpha_stable:alpha=<r>[,scale=<r>] | compound_poisson:lambda=<r>,sdev=<r>)");
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::rate_sweep;
  SimulationConfig base;
  InitialLaw init_law = InitialLaw::semicircle(2.0);
  InitialLaw velocity_law = InitialLaw::semicircle_scaled(0.1);
  std::vector<double> kappa_list;
  std::vector<int> n_list;
  std::vector<double> t_list;
  int n_seeds = 1;
  std::string out_path;
  EmitFormat format = EmitFormat::csv;
  int threads = 0;
  // flocking scenario
  double cs_theta = 1.0;
  double cs_beta = 5.0;
  double cs_sigma = 0.0;
  double cs_lambda = 0.0;
  double flock_threshold = 0.05;  // flocking iff D_v(T) < threshold * D_v(0)

  static ExperimentConfig from_kv(KeyValueConfig& kv) {
    ExperimentConfig cfg;
    cfg.kind = parse_experiment_kind(kv.require("experiment"));
    cfg.base.n_particles = static_cast<int>(kv.get_int("n_particles", 50));
    cfg.base.dim = 1;
    cfg.base.batch_size = static_cast<int>(kv.get_int("batch_size", 2));
    cfg.base.fine_step = kv.get_real("fine_step", std::ldexp(1.0, -12));
    cfg.base.batch_step = kv.get_real("batch_step", std::ldexp(1.0, -7));
    cfg.base.horizon = kv.get_real("horizon", 0.0);
    cfg.base.potential = parse_potential(kv.get("potential", "none"));
    cfg.base.kernel = parse_kernel(kv.get("kernel", "smooth_bounded"));
    cfg.base.noise.drift_b = kv.get_real("noise_drift", 0.0);
    cfg.base.noise.gaussian_sigma = kv.get_real("noise_sigma", 0.0);
    cfg.base.noise.jump = parse_jump_part(kv.get("noise_jump", "none"));
    cfg.base.seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));
    const std::string mode = kv.get("mode", "");
    if (!mode.empty() && mode != "full" && mode != "rbm" && mode != "coupled")
      throw std::invalid_argument("unknown mode '" + mode + "'");
    cfg.init_law = parse_initial_law(kv.get("init", "semicircle:r=2"));
    cfg.velocity_law = parse_initial_law(kv.get("init_velocity", "semicircle_scaled:s=0.1"));
    if (kv.has("kappa_list")) cfg.kappa_list = parse_real_list(kv.get("kappa_list", ""));
    if (kv.has("n_list")) cfg.n_list = parse_int_list(kv.get("n_list", ""));
    if (kv.has("t_list")) cfg.t_list = parse_real_list(kv.get("t_list", ""));
    cfg.n_seeds = static_cast<int>(kv.get_int("n_seeds", 1));
    cfg.out_path = kv.get("out", "");
    cfg.format = parse_emit_format(kv.get("format", "csv"));
    cfg.threads = static_cast<int>(kv.get_int("threads", 0));
    cfg.cs_theta = kv.get_real("cs_theta", 1.0);
    cfg.cs_beta = kv.get_real("cs_beta", 5.0);
    cfg.cs_sigma = kv.get_real("cs_sigma", 0.0);
    cfg.cs_lambda = kv.get_real("cs_lambda", 0.0);
    cfg.flock_threshold = kv.get_real("flock_threshold", 0.05);
    kv.reject_unknown_keys();
    return cfg;
  }

  std::vector<std::string> validate() const {
    if (n_seeds < 1) throw std::invalid_argument("experiment: n_seeds must be >= 1");
    auto check_kappa_grid = [&](double kappa) {
      const double ratio = kappa / base.fine_step;
      if (std::abs(ratio - std::llround(ratio)) > 1e-9 * std::max(1.0, ratio) ||
          std::llround(ratio) < 1)
        throw std::invalid_argument("experiment: every kappa must be an integer multiple of fine_step");
    };
    std::vector<std::string> warnings;
    switch (kind) {
      case ExperimentKind::rate_sweep: {
        if (kappa_list.empty()) throw std::invalid_argument("rate_sweep: kappa_list is required");
        for (double k : kappa_list) check_kappa_grid(k);
        if (!(base.horizon > 0.0)) throw std::invalid_argument("rate_sweep: horizon is required");
        const auto ns = n_list.empty() ? std::vector<int>{base.n_particles} : n_list;
        for (int n : ns) {
          if (n < 2) throw std::invalid_argument("rate_sweep: n_particles must be >= 2");
          if (n % base.batch_size != 0)
            throw std::invalid_argument("rate_sweep: batch_size must divide every n in n_list");
        }
        break;
      }
      case ExperimentKind::long_time: {
        if (t_list.empty()) throw std::invalid_argument("long_time: t_list is required");
        if (!std::is_sorted(t_list.begin(), t_list.end()))
          throw std::invalid_argument("long_time: t_list must be ascending");
        check_kappa_grid(base.batch_step);
        for (double t : t_list) {
          const double ratio = t / base.batch_step;
          if (std::abs(ratio - std::llround(ratio)) > 1e-9 * std::max(1.0, ratio) ||
              std::llround(ratio) < 1)
            throw std::invalid_argument("long_time: every T must be an integer multiple of batch_step");
        }
        if (base.horizon > 0.0 && std::abs(base.horizon - t_list.back()) > 1e-12)
          throw std::invalid_argument("long_time: horizon, when given, must equal max(t_list)");
        break;
      }
      case ExperimentKind::cost_bench: {
        if (n_list.empty()) throw std::invalid_argument("cost_bench: n_list is required");
        check_kappa_grid(base.batch_step);
        if (!(base.horizon > 0.0)) throw std::invalid_argument("cost_bench: horizon is required");
        for (int n : n_list) {
          if (n < 2) throw std::invalid_argument("cost_bench: n_particles must be >= 2");
          if (n % base.batch_size != 0)
            throw std::invalid_argument("cost_bench: batch_size must divide every n in n_list");
        }
        break;
      }
      case ExperimentKind::cucker_smale: {
        CuckerSmaleConfig cs = cucker_smale_config(0);
        auto w = cs.validate();
        warnings.insert(warnings.end(), w.begin(), w.end());
        break;
      }
    }
    return warnings;
  }

  // Simulation config for one grid point of the sweep.
  SimulationConfig coupled_config(int n, double kappa, double horizon, int seed_index) const {
    SimulationConfig sim = base;
    sim.n_particles = n;
    sim.batch_step = kappa;
    sim.horizon = horizon;
    sim.seed = base.seed + static_cast<std::uint64_t>(seed_index);
    sim.mode = RunMode::coupled;
    return sim;
  }

  CuckerSmaleConfig cucker_smale_config(int seed_index, bool use_random_batch = false) const {
    CuckerSmaleConfig cs;
    cs.n_particles = base.n_particles;
    cs.theta = cs_theta;
    cs.beta = cs_beta;
    cs.sigma = cs_sigma;
    cs.lambda = cs_lambda;
    cs.batch_size = base.batch_size;
    cs.fine_step = base.fine_step;
    cs.batch_step = base.batch_step;
    cs.horizon = base.horizon;
    cs.seed = base.seed + static_cast<std::uint64_t>(seed_index);
    cs.use_random_batch = use_random_batch;
    return cs;
  }
};

struct ExperimentOutput {
  ResultTable table;
  CsTraceTable traces;               // filled by the flocking experiment
  std::vector<std::string> summary;  // one human-readable line per fit/verdict
};

namespace detail {

struct GroupStats {
  double mean = 0.0;
  double rel_se = 0.0;  // (sd / sqrt(n)) / mean; 0 when n < 2 or mean == 0
  int count = 0;
};

inline GroupStats group_stats(const std::vector<double>& values) {
  GroupStats stats;
  stats.count = static_cast<int>(values.size());
  if (values.empty()) return stats;
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / values.size();
  if (values.size() > 1 && stats.mean != 0.0) {
    double ss = 0.0;
    for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
    const double sd = std::sqrt(ss / (values.size() - 1));
    stats.rel_se = sd / std::sqrt(static_cast<double>(values.size())) / std::abs(stats.mean);
  }
  return stats;
}

inline ParticleEnsemble sample_first_order_initial(const InitialLaw& law, int n,
                                                   std::uint64_t seed) {
  ParticleEnsemble state(n, 1);
  Substream rng = StreamFamily(seed, StreamKind::initial).at(0, 0);
  state.positions = sample_initial(law, n, rng);
  return state;
}

inline ParticleEnsemble sample_second_order_initial(const InitialLaw& position_law,
                                                    const InitialLaw& velocity_law, int n,
                                                    std::uint64_t seed) {
  ParticleEnsemble state(n, 1, true);
  Substream pos_rng = StreamFamily(seed, StreamKind::initial).at(0, 0);
  Substream vel_rng = StreamFamily(seed, StreamKind::initial_velocity).at(0, 0);
  state.positions = sample_initial(position_law, n, pos_rng);
  state.velocities = sample_initial(velocity_law, n, vel_rng);
  return state;
}

inline std::string format_summary_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace detail

// Coupled error at the horizon for each (N, kappa) grid point, averaged
// over seeds, with the log-log slope of mean error against kappa fitted
// per N.
inline ExperimentOutput run_rate_sweep(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::rate_sweep)
    throw std::invalid_argument("run_rate_sweep: wrong experiment kind");
  cfg.validate();

  const auto ns = cfg.n_list.empty() ? std::vector<int>{cfg.base.n_particles} : cfg.n_list;
  struct Point {
    int n;
    double kappa;
  };
  std::vector<Point> points;
  for (int n : ns)
    for (double kappa : cfg.kappa_list) points.push_back({n, kappa});

  const std::size_t n_tasks = points.size() * static_cast<std::size_t>(cfg.n_seeds);
  ExperimentOutput out;
  out.table.rows.resize(n_tasks);

  parallel_for_tasks(n_tasks, resolve_thread_count(cfg.threads), [&](std::size_t task) {
    const auto point_idx = static_cast<int>(task / cfg.n_seeds);
    const auto seed_idx = static_cast<int>(task % cfg.n_seeds);
    const Point& pt = points[point_idx];
    const auto sim = cfg.coupled_config(pt.n, pt.kappa, cfg.base.horizon, seed_idx);
    const auto initial = detail::sample_first_order_initial(cfg.init_law, pt.n, sim.seed);
    const auto series = run_coupled(sim, initial);

    ResultRow row;
    row.experiment = "rate_sweep";
    row.config_id = point_idx;
    row.seed = sim.seed;
    row.mode = "coupled";
    row.kappa = pt.kappa;
    row.n_particles = pt.n;
    row.horizon = cfg.base.horizon;
    row.e1 = series.e1.back();
    row.e2 = series.e2.back();
    row.w1 = series.w1.back();
    row.kernel_evals = series.kernel_eval_count;
    out.table.rows[task] = std::move(row);
  });

  // Group means per grid point, then one slope per N across its kappas.
  std::vector<detail::GroupStats> stats(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<double> e1s;
    for (int s = 0; s < cfg.n_seeds; ++s)
      e1s.push_back(*out.table.rows[p * cfg.n_seeds + s].e1);
    stats[p] = detail::group_stats(e1s);
    for (int s = 0; s < cfg.n_seeds; ++s) {
      out.table.rows[p * cfg.n_seeds + s].e1_mean = stats[p].mean;
      if (stats[p].count > 1) out.table.rows[p * cfg.n_seeds + s].e1_rel_se = stats[p].rel_se;
    }
  }
  for (std::size_t ni = 0; ni < ns.size(); ++ni) {
    std::vector<double> kappas, means;
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (points[p].n == ns[ni]) {
        kappas.push_back(points[p].kappa);
        means.push_back(stats[p].mean);
      }
    }
    if (kappas.size() < 2) continue;  // slope needs at least two kappa points
    const auto fit = fit_loglog_slope(kappas, means);
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (points[p].n != ns[ni]) continue;
      for (int s = 0; s < cfg.n_seeds; ++s)
        out.table.rows[p * cfg.n_seeds + s].slope = fit.slope;
    }
    out.summary.push_back("rate_sweep: N=" + std::to_string(ns[ni]) + " fitted slope " +
                          detail::format_summary_real(fit.slope) + " over " +
                          std::to_string(kappas.size()) + " kappa points");
  }
  return out;
}

// Coupled error recorded at every T in t_list from one run per seed to
// max(T).
inline ExperimentOutput run_long_time(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::long_time)
    throw std::invalid_argument("run_long_time: wrong experiment kind");
  cfg.validate();

  const double horizon = cfg.t_list.back();
  const int n_ts = static_cast<int>(cfg.t_list.size());
  ExperimentOutput out;
  out.table.rows.resize(static_cast<std::size_t>(n_ts) * cfg.n_seeds);

  parallel_for_tasks(static_cast<std::size_t>(cfg.n_seeds), resolve_thread_count(cfg.threads),
                     [&](std::size_t seed_idx) {
    const auto sim = cfg.coupled_config(cfg.base.n_particles, cfg.base.batch_step, horizon,
                                        static_cast<int>(seed_idx));
    const auto initial =
        detail::sample_first_order_initial(cfg.init_law, cfg.base.n_particles, sim.seed);
    const auto series = run_coupled(sim, initial);
    for (int ti = 0; ti < n_ts; ++ti) {
      const auto boundary =
          static_cast<std::size_t>(std::llround(cfg.t_list[ti] / cfg.base.batch_step)) - 1;
      ResultRow row;
      row.experiment = "long_time";
      row.config_id = ti;
      row.seed = sim.seed;
      row.mode = "coupled";
      row.kappa = cfg.base.batch_step;
      row.n_particles = cfg.base.n_particles;
      row.horizon = cfg.t_list[ti];
      row.e1 = series.e1[boundary];
      row.e2 = series.e2[boundary];
      row.w1 = series.w1[boundary];
      row.kernel_evals = series.kernel_eval_count;
      out.table.rows[static_cast<std::size_t>(ti) * cfg.n_seeds + seed_idx] = std::move(row);
    }
  });

  for (int ti = 0; ti < n_ts; ++ti) {
    std::vector<double> e1s;
    for (int s = 0; s < cfg.n_seeds; ++s)
      e1s.push_back(*out.table.rows[static_cast<std::size_t>(ti) * cfg.n_seeds + s].e1);
    const auto stats = detail::group_stats(e1s);
    for (int s = 0; s < cfg.n_seeds; ++s) {
      auto& row = out.table.rows[static_cast<std::size_t>(ti) * cfg.n_seeds + s];
      row.e1_mean = stats.mean;
      if (stats.count > 1) row.e1_rel_se = stats.rel_se;
    }
    out.summary.push_back("long_time: T=" + detail::format_summary_real(cfg.t_list[ti]) +
                          " mean e1 " + detail::format_summary_real(stats.mean));
  }
  return out;
}

// Wall clock and exact kernel-evaluation counts of full vs random-batch
// runs across n_list, with fitted log-log cost exponents per mode. Runs
// sequentially regardless of the thread setting: these rows are timings.
inline ExperimentOutput run_cost_bench(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::cost_bench)
    throw std::invalid_argument("run_cost_bench: wrong experiment kind");
  cfg.validate();

  ExperimentOutput out;
  const char* mode_names[2] = {"full", "rbm"};
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    const int n = cfg.n_list[ni];
    for (int mi = 0; mi < 2; ++mi) {
      for (int s = 0; s < cfg.n_seeds; ++s) {
        SimulationConfig sim = cfg.base;
        sim.n_particles = n;
        sim.seed = cfg.base.seed + static_cast<std::uint64_t>(s);
        sim.mode = (mi == 0) ? RunMode::full : RunMode::rbm;
        auto initial = detail::sample_first_order_initial(cfg.init_law, n, sim.seed);
        const auto record = run(sim, std::move(initial));

        ResultRow row;
        row.experiment = "cost_bench";
        row.config_id = static_cast<int>(ni);
        row.seed = sim.seed;
        row.mode = mode_names[mi];
        row.kappa = cfg.base.batch_step;
        row.n_particles = n;
        row.horizon = cfg.base.horizon;
        row.kernel_evals = record.kernel_evals;
        row.wall_clock_sec = record.wall_seconds;
        out.table.rows.push_back(std::move(row));
      }
    }
  }

  // Cost exponent per mode from per-N mean wall clock.
  for (int mi = 0; mi < 2; ++mi) {
    std::vector<double> ns_real, means;
    for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
      std::vector<double> times;
      for (auto& row : out.table.rows) {
        if (row.config_id == static_cast<int>(ni) && row.mode == mode_names[mi])
          times.push_back(*row.wall_clock_sec);
      }
      ns_real.push_back(cfg.n_list[ni]);
      means.push_back(detail::group_stats(times).mean);
    }
    if (ns_real.size() < 2) continue;
    const auto fit = fit_loglog_slope(ns_real, means);
    for (auto& row : out.table.rows)
      if (row.mode == mode_names[mi]) row.slope = fit.slope;
    out.summary.push_back(std::string("cost_bench: ") + mode_names[mi] + " wall-clock exponent " +
                          detail::format_summary_real(fit.slope));
  }
  return out;
}

// Full and random-batch flocking runs for one noise scenario, with the
// diameter traces and per-run flocking verdicts.
inline ExperimentOutput run_cucker_smale(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::cucker_smale)
    throw std::invalid_argument("run_cucker_smale: wrong experiment kind");
  cfg.validate();

  ExperimentOutput out;
  const int n = cfg.base.n_particles;
  out.table.rows.resize(static_cast<std::size_t>(cfg.n_seeds) * 2);
  out.traces.n_particles = n;
  std::vector<std::vector<CsTraceRow>> trace_slots(static_cast<std::size_t>(cfg.n_seeds) * 2);

  parallel_for_tasks(static_cast<std::size_t>(cfg.n_seeds), resolve_thread_count(cfg.threads),
                     [&](std::size_t seed_idx) {
    const auto initial = detail::sample_second_order_initial(
        cfg.init_law, cfg.velocity_law, n, cfg.base.seed + seed_idx);
    for (int mi = 0; mi < 2; ++mi) {
      const bool rbm = (mi == 1);
      const auto cs = cfg.cucker_smale_config(static_cast<int>(seed_idx), rbm);
      const auto [dx0, dv0] = flocking_diameters(initial);
      auto& traces = trace_slots[seed_idx * 2 + mi];
      CsTraceRow origin{0, cs.seed, rbm ? "rbm" : "full", 0.0, dx0, dv0, initial.velocities};
      traces.push_back(std::move(origin));

      std::vector<Observer> observers;
      observers.push_back([&](const StepEvent& ev) {
        const auto [dx, dv] = flocking_diameters(ev.state);
        traces.push_back(
            CsTraceRow{0, cs.seed, rbm ? "rbm" : "full", ev.t, dx, dv, ev.state.velocities});
      });
      const auto record = run_cucker_smale_dynamics(cs, initial, observers);
      const auto [dx1, dv1] = flocking_diameters(record.final_state);

      ResultRow row;
      row.experiment = "cucker_smale";
      row.config_id = 0;
      row.seed = cs.seed;
      row.mode = rbm ? "rbm" : "full";
      row.kappa = cfg.base.batch_step;
      row.n_particles = n;
      row.horizon = cfg.base.horizon;
      row.kernel_evals = record.kernel_evals;
      row.dx_initial = dx0;
      row.dx_final = dx1;
      row.dv_initial = dv0;
      row.dv_final = dv1;
      row.flocking = (dv1 < cfg.flock_threshold * dv0) ? 1 : 0;
      out.table.rows[seed_idx * 2 + mi] = std::move(row);
    }
  });

  for (auto& slot : trace_slots)
    for (auto& row : slot) out.traces.rows.push_back(std::move(row));

  for (int mi = 0; mi < 2; ++mi) {
    int votes = 0;
    for (int s = 0; s < cfg.n_seeds; ++s)
      votes += *out.table.rows[static_cast<std::size_t>(s) * 2 + mi].flocking;
    out.summary.push_back(std::string("cucker_smale: ") + (mi == 1 ? "rbm" : "full") + " " +
                          std::to_string(votes) + "/" + std::to_string(cfg.n_seeds) +
                          " runs flocked (sigma=" + detail::format_summary_real(cfg.cs_sigma) +
                          ", lambda=" + detail::format_summary_real(cfg.cs_lambda) + ")");
  }
  return out;
}

inline ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::rate_sweep: return run_rate_sweep(cfg);
    case ExperimentKind::long_time: return run_long_time(cfg);
    case ExperimentKind::cost_bench: return run_cost_bench(cfg);
    case ExperimentKind::cucker_smale: return run_cucker_smale(cfg);
  }
  throw std::logic_error("run_experiment: unreachable");
}

}  // namespace levyrbm
