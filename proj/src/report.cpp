#include "gbq/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gbq/error.hpp"

namespace gbq {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::array<double, 17> row_values(const TrajectoryRow& r) {
  return {r.t,       r.E,       r.Q,      r.lambda, r.y,   r.eta_H1L2, r.F1,     r.F2,          r.tube_dist,
          r.I1_rate, r.I2_rate, r.I_rate, r.Itilde, r.rho, r.h_lambda, r.Rtilde, r.crosscheck_gap};
}

TrajectoryRow row_from_values(const std::array<double, 17>& v) {
  TrajectoryRow r;
  r.t = v[0];
  r.E = v[1];
  r.Q = v[2];
  r.lambda = v[3];
  r.y = v[4];
  r.eta_H1L2 = v[5];
  r.F1 = v[6];
  r.F2 = v[7];
  r.tube_dist = v[8];
  r.I1_rate = v[9];
  r.I2_rate = v[10];
  r.I_rate = v[11];
  r.Itilde = v[12];
  r.rho = v[13];
  r.h_lambda = v[14];
  r.Rtilde = v[15];
  r.crosscheck_gap = v[16];
  return r;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::size_t column_index(const char* name) {
  for (std::size_t i = 0; i < kTrajectoryColumns.size(); ++i)
    if (std::string(kTrajectoryColumns[i]) == name) return i + 1;
  throw PreconditionError(std::string("no trajectory column ") + name);
}

}  // namespace

std::string trajectory_csv(const ExperimentReport& r) {
  std::string out;
  for (std::size_t i = 0; i < kTrajectoryColumns.size(); ++i) out += (i ? "," : "") + std::string(kTrajectoryColumns[i]);
  out += '\n';
  for (const auto& row : r.rows) {
    const auto v = row_values(row);
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + num(v[i]);
    out += '\n';
  }
  return out;
}

std::string report_to_json(const ExperimentReport& r) {
  json j;
  j["version"] = r.version;
  j["verdict"] = to_string(r.verdict);
  j["exit_time"] = optional_number(r.exit_time);
  j["blowup_time"] = optional_number(r.blowup_time);
  j["modulation_lost_time"] = optional_number(r.modulation_lost_time);
  j["final_time"] = number(r.final_time);
  j["p"] = number(r.p);
  j["omega"] = number(r.omega);
  j["a"] = number(r.a);
  j["epsilon_exit"] = number(r.epsilon_exit);
  j["epsilon_valid"] = number(r.epsilon_valid);
  j["cutoff_R"] = number(r.cutoff_R);
  j["eta0"] = number(r.eta0);
  j["max_eta"] = number(r.max_eta);
  j["max_tube"] = number(r.max_tube);
  j["window_end"] = number(r.window_end);
  j["min_I_rate"] = number(r.min_I_rate);
  j["rho_leading"] = number(r.rho_leading);
  j["itilde_increasing"] = r.itilde_increasing;
  j["virial_bound_holds"] = r.virial_bound_holds;
  j["max_ledger_gap"] = number(r.max_ledger_gap);
  j["max_crosscheck_gap"] = number(r.max_crosscheck_gap);
  j["warnings"] = r.warnings;
  j["message"] = r.message;
  j["spectral_report"] = r.spectral_report;
  j["note"] = "exit times and thresholds are regression values defined by this tool";
  j["config"] = r.config;
  j["columns"] = kTrajectoryColumns;
  json rows = json::array();
  for (const auto& row : r.rows) {
    json a = json::array();
    for (double v : row_values(row)) a.push_back(number(v));
    rows.push_back(std::move(a));
  }
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  ExperimentReport r;
  try {
    const json j = json::parse(text);
    r.version = j.at("version").get<std::string>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.exit_time = optional_from(j.at("exit_time"));
    r.blowup_time = optional_from(j.at("blowup_time"));
    r.modulation_lost_time = optional_from(j.at("modulation_lost_time"));
    r.final_time = number_from(j.at("final_time"));
    r.p = number_from(j.at("p"));
    r.omega = number_from(j.at("omega"));
    r.a = number_from(j.at("a"));
    r.epsilon_exit = number_from(j.at("epsilon_exit"));
    r.epsilon_valid = number_from(j.at("epsilon_valid"));
    r.cutoff_R = number_from(j.at("cutoff_R"));
    r.eta0 = number_from(j.at("eta0"));
    r.max_eta = number_from(j.at("max_eta"));
    r.max_tube = number_from(j.at("max_tube"));
    r.window_end = number_from(j.at("window_end"));
    r.min_I_rate = number_from(j.at("min_I_rate"));
    r.rho_leading = number_from(j.at("rho_leading"));
    r.itilde_increasing = j.at("itilde_increasing").get<bool>();
    r.virial_bound_holds = j.at("virial_bound_holds").get<bool>();
    r.max_ledger_gap = number_from(j.at("max_ledger_gap"));
    r.max_crosscheck_gap = number_from(j.at("max_crosscheck_gap"));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.message = j.at("message").get<std::string>();
    r.spectral_report = j.at("spectral_report").get<std::string>();
    r.config = j.at("config").get<ConfigMap>();
    const auto cols = j.at("columns").get<std::vector<std::string>>();
    if (cols.size() != kTrajectoryColumns.size()) throw ConfigError("report has an unexpected column set");
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] != kTrajectoryColumns[i]) throw ConfigError("report column mismatch at " + cols[i]);
    for (const auto& a : j.at("rows")) {
      std::array<double, 17> v{};
      if (a.size() != v.size()) throw ConfigError("report row has the wrong width");
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = number_from(a[i]);
      r.rows.push_back(row_from_values(v));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report JSON: ") + e.what());
  }
  return r;
}

std::string plotscript(const ExperimentReport& r, const std::string& csv_path) {
  std::ostringstream os;
  os << "# gnuplot script for " << csv_path << "\n"
     << "set datafile separator ','\n"
     << "set xlabel 't'\n"
     << "set multiplot layout 3,1 title 'p = " << r.p << ", omega = " << r.omega << ", a = " << r.a
     << ", verdict " << to_string(r.verdict) << "'\n"
     << "plot '" << csv_path << "' using " << column_index("t") << ":" << column_index("lambda")
     << " every ::1 with lines title 'lambda(t)'\n"
     << "plot '" << csv_path << "' using " << column_index("t") << ":" << column_index("eta_H1L2")
     << " every ::1 with lines title '||eta||_{H1 x L2}(t)'\n"
     << "plot '" << csv_path << "' using " << column_index("t") << ":" << column_index("Itilde")
     << " every ::1 with lines title 'Itilde(t)'\n"
     << "unset multiplot\n";
  return os.str();
}

std::string sweep_csv(const SweepResult& s) {
  std::string out = "p,omega,L,N,verdict,exit_time,max_tube,error\n";
  for (const auto& c : s.cells) {
    std::string err = c.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    out += num(c.p) + "," + num(c.omega) + "," + num(c.L) + "," + std::to_string(c.N) + "," + to_string(c.verdict) +
           "," + num(c.exit_time) + "," + num(c.max_tube) + "," + err + "\n";
  }
  return out;
}

std::string sweep_summary_csv(const SweepResult& s) {
  std::string out = "p,omega_c,last_unstable,first_stable,single_transition,brackets\n";
  for (const auto& r : s.rows)
    out += num(r.p) + "," + num(r.omega_c) + "," + num(r.last_unstable) + "," + num(r.first_stable) + "," +
           (r.single_transition ? "true" : "false") + "," + (r.brackets ? "true" : "false") + "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string emit_report(const ExperimentReport& r, ReportFormat format, const std::string& dir,
                        const std::string& prefix) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const std::filesystem::path base = std::filesystem::path(dir) / prefix;
  switch (format) {
    case ReportFormat::Csv: {
      const std::string path = base.string() + ".csv";
      write_text_file(path, trajectory_csv(r));
      return path;
    }
    case ReportFormat::Json: {
      const std::string path = base.string() + ".json";
      write_text_file(path, report_to_json(r));
      return path;
    }
    case ReportFormat::Plotscript: {
      const std::string path = base.string() + ".gp";
      write_text_file(path, plotscript(r, prefix + ".csv"));
      return path;
    }
  }
  throw PreconditionError("unknown report format");
}

}  // namespace gbq
