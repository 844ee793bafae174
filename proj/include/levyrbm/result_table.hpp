// Result rows shared by every experiment kind. The column set is fixed so
// downstream readers and plotting stay experiment-agnostic; fields that do
// not apply to a given experiment are left empty.

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace levyrbm {

struct ResultRow {
  std::string experiment;
  int config_id = 0;
  std::uint64_t seed = 0;
  std::string mode;  // full | rbm | coupled
  std::optional<double> kappa;
  std::optional<int> n_particles;
  std::optional<double> horizon;
  std::optional<double> e1;
  std::optional<double> e2;
  std::optional<double> w1;
  std::optional<double> e1_mean;    // group mean over seeds, repeated per row
  std::optional<double> e1_rel_se;  // relative standard error of that mean
  std::optional<double> slope;      // fitted log-log slope, where applicable
  std::optional<std::uint64_t> kernel_evals;
  std::optional<double> wall_clock_sec;
  std::optional<double> dx_initial;
  std::optional<double> dx_final;
  std::optional<double> dv_initial;
  std::optional<double> dv_final;
  std::optional<int> flocking;  // 1 = velocity diameter collapsed below threshold
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

enum class EmitFormat { csv, json };

inline EmitFormat parse_emit_format(const std::string& name) {
  if (name == "csv") return EmitFormat::csv;
  if (name == "json") return EmitFormat::json;
  throw std::invalid_argument("unknown output format '" + name + "' (expected csv | json)");
}

inline const char* result_csv_header() {
  return "experiment,config_id,seed,mode,kappa,n_particles,horizon,e1,e2,w1,"
         "e1_mean,e1_rel_se,slope,kernel_evals,wall_clock_sec,"
         "dx_initial,dx_final,dv_initial,dv_final,flocking";
}

namespace detail {

// 17 significant digits: enough to round-trip an IEEE double exactly.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string cell(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}
inline std::string cell(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}
inline std::string cell(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

inline void ensure_parent_dir(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

}  // namespace detail

inline std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  out << result_csv_header() << '\n';
  for (const auto& r : table.rows) {
    out << r.experiment << ',' << r.config_id << ',' << r.seed << ',' << r.mode << ','
        << detail::cell(r.kappa) << ',' << detail::cell(r.n_particles) << ','
        << detail::cell(r.horizon) << ',' << detail::cell(r.e1) << ',' << detail::cell(r.e2)
        << ',' << detail::cell(r.w1) << ',' << detail::cell(r.e1_mean) << ','
        << detail::cell(r.e1_rel_se) << ',' << detail::cell(r.slope) << ','
        << detail::cell(r.kernel_evals) << ',' << detail::cell(r.wall_clock_sec) << ','
        << detail::cell(r.dx_initial) << ',' << detail::cell(r.dx_final) << ','
        << detail::cell(r.dv_initial) << ',' << detail::cell(r.dv_final) << ','
        << detail::cell(r.flocking) << '\n';
  }
  return out.str();
}

inline nlohmann::json to_json(const ResultTable& table) {
  nlohmann::json arr = nlohmann::json::array();
  auto put = [](nlohmann::json& obj, const char* key, const auto& opt) {
    if (opt)
      obj[key] = *opt;
    else
      obj[key] = nullptr;
  };
  for (const auto& r : table.rows) {
    nlohmann::json obj;
    obj["experiment"] = r.experiment;
    obj["config_id"] = r.config_id;
    obj["seed"] = r.seed;
    obj["mode"] = r.mode;
    put(obj, "kappa", r.kappa);
    put(obj, "n_particles", r.n_particles);
    put(obj, "horizon", r.horizon);
    put(obj, "e1", r.e1);
    put(obj, "e2", r.e2);
    put(obj, "w1", r.w1);
    put(obj, "e1_mean", r.e1_mean);
    put(obj, "e1_rel_se", r.e1_rel_se);
    put(obj, "slope", r.slope);
    put(obj, "kernel_evals", r.kernel_evals);
    put(obj, "wall_clock_sec", r.wall_clock_sec);
    put(obj, "dx_initial", r.dx_initial);
    put(obj, "dx_final", r.dx_final);
    put(obj, "dv_initial", r.dv_initial);
    put(obj, "dv_final", r.dv_final);
    put(obj, "flocking", r.flocking);
    arr.push_back(std::move(obj));
  }
  return arr;
}

inline void emit(const ResultTable& table, const std::string& path, EmitFormat format) {
  detail::ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
  if (format == EmitFormat::csv) {
    out << to_csv(table);
  } else {
    out << to_json(table).dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for output file '" + path + "'");
}

// Reader for the CSV emitted above (round-trip tests, plotting).
inline ResultTable read_result_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open result file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty result file '" + path + "'");
  if (line != result_csv_header())
    throw std::runtime_error("unexpected result header in '" + path + "'");

  ResultTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(20);
    auto opt_real = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return std::stod(s);
    };
    auto opt_int = [](const std::string& s) -> std::optional<int> {
      if (s.empty()) return std::nullopt;
      return std::stoi(s);
    };
    ResultRow r;
    r.experiment = cells[0];
    r.config_id = std::stoi(cells[1]);
    r.seed = std::stoull(cells[2]);
    r.mode = cells[3];
    r.kappa = opt_real(cells[4]);
    r.n_particles = opt_int(cells[5]);
    r.horizon = opt_real(cells[6]);
    r.e1 = opt_real(cells[7]);
    r.e2 = opt_real(cells[8]);
    r.w1 = opt_real(cells[9]);
    r.e1_mean = opt_real(cells[10]);
    r.e1_rel_se = opt_real(cells[11]);
    r.slope = opt_real(cells[12]);
    if (!cells[13].empty()) r.kernel_evals = std::stoull(cells[13]);
    r.wall_clock_sec = opt_real(cells[14]);
    r.dx_initial = opt_real(cells[15]);
    r.dx_final = opt_real(cells[16]);
    r.dv_initial = opt_real(cells[17]);
    r.dv_final = opt_real(cells[18]);
    r.flocking = opt_int(cells[19]);
    table.rows.push_back(std::move(r));
  }
  return table;
}

// Per-boundary flocking traces (one file per cucker-smale experiment).
struct CsTraceRow {
  int config_id = 0;
  std::uint64_t seed = 0;
  std::string mode;
  double t = 0.0;
  double dx = 0.0;
  double dv = 0.0;
  std::vector<double> velocities;
};

struct CsTraceTable {
  int n_particles = 0;
  std::vector<CsTraceRow> rows;
};

inline void emit_traces(const CsTraceTable& traces, const std::string& path) {
  detail::ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace file '" + path + "'");
  out << "config_id,seed,mode,t,dx,dv";
  for (int i = 0; i < traces.n_particles; ++i) out << ",v" << i;
  out << '\n';
  for (const auto& r : traces.rows) {
    out << r.config_id << ',' << r.seed << ',' << r.mode << ',' << detail::format_real(r.t)
        << ',' << detail::format_real(r.dx) << ',' << detail::format_real(r.dv);
    for (double v : r.velocities) out << ',' << detail::format_real(v);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for trace file '" + path + "'");
}

inline CsTraceTable read_traces_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace file '" + path + "'");
  CsTraceTable traces;
  {
    std::stringstream ss(line);
    std::string cell;
    int count = 0;
    while (std::getline(ss, cell, ',')) ++count;
    traces.n_particles = count - 6;
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    CsTraceRow r;
    r.config_id = std::stoi(cells[0]);
    r.seed = std::stoull(cells[1]);
    r.mode = cells[2];
    r.t = std::stod(cells[3]);
    r.dx = std::stod(cells[4]);
    r.dv = std::stod(cells[5]);
    for (std::size_t k = 6; k < cells.size(); ++k) r.velocities.push_back(std::stod(cells[k]));
    traces.rows.push_back(std::move(r));
  }
  return traces;
}

}  // namespace levyrbm
