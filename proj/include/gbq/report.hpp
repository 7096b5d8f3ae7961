#pragma once

// Serialization of experiment and sweep results: trajectory CSV with a fixed
// column order, JSON report, gnuplot script.

#include <array>
#include <string>

#include "gbq/harness.hpp"

namespace gbq {

inline constexpr std::array<const char*, 17> kTrajectoryColumns{
    "t",      "E",       "Q",       "lambda", "y",        "eta_H1L2", "F1",     "F2",           "tube_dist",
    "I1_rate", "I2_rate", "I_rate", "Itilde", "rho",      "h_lambda", "Rtilde", "crosscheck_gap"};

std::string trajectory_csv(const ExperimentReport& r);

/// Everything except the in-memory diagnostics.
std::string report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const std::string& text);

/// gnuplot script plotting lambda, ||eta|| and Itilde against t from csv_path.
std::string plotscript(const ExperimentReport& r, const std::string& csv_path);

std::string sweep_csv(const SweepResult& s);
std::string sweep_summary_csv(const SweepResult& s);

enum class ReportFormat { Csv, Json, Plotscript };

/// Writes <dir>/<prefix>.{csv,json,gp}; returns the path written. Throws IoError.
std::string emit_report(const ExperimentReport& r, ReportFormat format, const std::string& dir,
                        const std::string& prefix);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace gbq
