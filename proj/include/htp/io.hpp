// JSON config and CSV/JSON result serialization backing the command-line
// tool and the Monte Carlo artifact writer.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "htp/experiments.hpp"
#include "htp/fisher.hpp"
#include "htp/filter.hpp"
#include "htp/mle.hpp"
#include "htp/model.hpp"
#include "htp/telegraph.hpp"

namespace htp {

inline constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimSection {
  double horizon = 1000.0;
  double step = 0.01;
  std::uint64_t seed = 20260809;
  bool store_hidden = false;

  bool operator==(const SimSection&) const = default;
};

struct EstimationSection {
  EstimationConfig one_step{0.6, {0.25, 0.5, 0.75, 1.0}};
  EstimationConfig two_step{0.4, {0.25, 0.5, 0.75, 1.0}};

  bool operator==(const EstimationSection&) const = default;
};

struct McSection {
  std::vector<double> horizons = {250.0, 1000.0, 4000.0};
  int replications = 400;
  std::uint64_t base_seed = 20260809;
  std::vector<EstimatorMethod> methods = {EstimatorMethod::moments, EstimatorMethod::one_step,
                                          EstimatorMethod::two_step};
  int threads = 0;

  bool operator==(const McSection&) const = default;
};

struct AppConfig {
  ModelValues model;
  SimSection sim;
  EstimationSection estimation;
  McSection mc;

  bool operator==(const AppConfig&) const = default;
};

std::optional<EstimatorMethod> parse_method(const std::string& name);

// Round-trip-safe text form of a double (17 significant digits).
std::string format_double(double v);

std::string to_json_string(const AppConfig& config);
AppConfig config_from_json_string(const std::string& text);
AppConfig load_config(const std::filesystem::path& file);

ExperimentConfig to_experiment_config(const AppConfig& config);

// FNV-1a of the canonical JSON dump, 16 hex digits.
std::string config_hash(const AppConfig& config);

// "mc-<hash8>-<UTC timestamp>"; pass the time explicitly for reproducible
// tests.
std::string run_dir_name(const AppConfig& config, std::time_t now);

// CSV writers; headers are part of the documented file contract.
void write_path_csv(const std::filesystem::path& file, const ObservationPath& path);
ObservationPath read_path_csv(const std::filesystem::path& file, double step);
void write_filter_csv(const std::filesystem::path& file, const FilterTrajectory& traj);
void write_moments_csv(const std::filesystem::path& file, const MomentEstimate& estimate,
                       double horizon, double step);
void write_process_csv(const std::filesystem::path& file, const EstimatorProcess& process,
                       const std::vector<StandardizedPoint>& standardized);
void write_density_csv(const std::filesystem::path& file, const InvariantDensity& density,
                       int points);
void write_fisher_json(const std::filesystem::path& file, const SymMat2& fisher);

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const AppConfig& config, std::uint64_t seed);

// records.csv + report.json + qq_data.csv in `dir` (created if needed).
void write_mc_artifacts(const MCReport& report, const std::filesystem::path& dir);

// The records.csv payload as a string (used by the determinism tests).
std::string records_csv_string(const MCReport& report);
std::string report_json_string(const MCReport& report);

// Inverse standard normal CDF (Acklam's rational approximation, |rel err|
// < 1.2e-9); feeds the QQ-plot columns.
double normal_quantile(double p);

}  // namespace htp
