#include "htp/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace htp {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* section, const char* name, const T& fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field ") + section + "." + name +
                      " has the wrong type");
  }
}

json model_to_json(const ModelValues& m) {
  return json{{"lambda", m.lambda}, {"mu", m.mu},   {"y1", m.y1},
              {"y2", m.y2},         {"c0", m.c0},   {"c1", m.c1}};
}

ModelValues model_from_json(const json& j) {
  ModelValues m;
  m.lambda = field(j, "model", "lambda", m.lambda);
  m.mu = field(j, "model", "mu", m.mu);
  m.y1 = field(j, "model", "y1", m.y1);
  m.y2 = field(j, "model", "y2", m.y2);
  m.c0 = field(j, "model", "c0", m.c0);
  m.c1 = field(j, "model", "c1", m.c1);
  return m;
}

json methods_to_json(const std::vector<EstimatorMethod>& methods) {
  json arr = json::array();
  for (auto m : methods) arr.push_back(method_name(m));
  return arr;
}

std::vector<EstimatorMethod> methods_from_json(const json& arr) {
  std::vector<EstimatorMethod> out;
  for (const auto& item : arr) {
    if (!item.is_string())
      throw ConfigError("config field mc.methods must be an array of strings");
    const auto parsed = parse_method(item.get<std::string>());
    if (!parsed)
      throw ConfigError("config field mc.methods: unknown method '" +
                        item.get<std::string>() + "' (expected moments|one-step|two-step)");
    out.push_back(*parsed);
  }
  return out;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  return out;
}

}  // namespace

std::optional<EstimatorMethod> parse_method(const std::string& name) {
  if (name == "moments") return EstimatorMethod::moments;
  if (name == "one-step") return EstimatorMethod::one_step;
  if (name == "two-step") return EstimatorMethod::two_step;
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_json_string(const AppConfig& c) {
  json j;
  j["model"] = model_to_json(c.model);
  j["sim"] = {{"horizon", c.sim.horizon},
              {"step", c.sim.step},
              {"seed", c.sim.seed},
              {"store_hidden", c.sim.store_hidden}};
  j["estimation"] = {{"one_step", {{"delta", c.estimation.one_step.delta},
                                   {"output_taus", c.estimation.one_step.output_taus}}},
                     {"two_step", {{"delta", c.estimation.two_step.delta},
                                   {"output_taus", c.estimation.two_step.output_taus}}}};
  j["mc"] = {{"horizons", c.mc.horizons},
             {"replications", c.mc.replications},
             {"base_seed", c.mc.base_seed},
             {"methods", methods_to_json(c.mc.methods)},
             {"threads", c.mc.threads}};
  return j.dump(2) + "\n";
}

AppConfig config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  AppConfig c;
  if (j.contains("model")) c.model = model_from_json(j.at("model"));
  if (j.contains("sim")) {
    const json& s = j.at("sim");
    c.sim.horizon = field(s, "sim", "horizon", c.sim.horizon);
    c.sim.step = field(s, "sim", "step", c.sim.step);
    c.sim.seed = field(s, "sim", "seed", c.sim.seed);
    c.sim.store_hidden = field(s, "sim", "store_hidden", c.sim.store_hidden);
  }
  if (j.contains("estimation")) {
    const json& e = j.at("estimation");
    if (e.contains("one_step")) {
      c.estimation.one_step.delta =
          field(e.at("one_step"), "estimation.one_step", "delta", c.estimation.one_step.delta);
      c.estimation.one_step.output_taus = field(e.at("one_step"), "estimation.one_step",
                                                "output_taus", c.estimation.one_step.output_taus);
    }
    if (e.contains("two_step")) {
      c.estimation.two_step.delta =
          field(e.at("two_step"), "estimation.two_step", "delta", c.estimation.two_step.delta);
      c.estimation.two_step.output_taus = field(e.at("two_step"), "estimation.two_step",
                                                "output_taus", c.estimation.two_step.output_taus);
    }
  }
  if (j.contains("mc")) {
    const json& m = j.at("mc");
    c.mc.horizons = field(m, "mc", "horizons", c.mc.horizons);
    c.mc.replications = field(m, "mc", "replications", c.mc.replications);
    c.mc.base_seed = field(m, "mc", "base_seed", c.mc.base_seed);
    if (m.contains("methods")) c.mc.methods = methods_from_json(m.at("methods"));
    c.mc.threads = field(m, "mc", "threads", c.mc.threads);
  }

  const ValidationReport report = validate_model(c.model);
  if (!report.ok()) throw ConfigError("config field model: " + report.errors.front());
  if (!(c.sim.step > 0.0)) throw ConfigError("config field sim.step must be > 0");
  if (!(c.sim.horizon > 0.0)) throw ConfigError("config field sim.horizon must be > 0");
  return c;
}

AppConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config file not found: " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_string(buffer.str());
}

ExperimentConfig to_experiment_config(const AppConfig& c) {
  ExperimentConfig e;
  e.model = c.model;
  e.horizons = c.mc.horizons;
  e.step = c.sim.step;
  e.replications = c.mc.replications;
  e.base_seed = c.mc.base_seed;
  e.methods = c.mc.methods;
  e.one_step = c.estimation.one_step;
  e.two_step = c.estimation.two_step;
  e.threads = c.mc.threads;
  return e;
}

std::string config_hash(const AppConfig& config) {
  const std::string dump = to_json_string(config);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string run_dir_name(const AppConfig& config, std::time_t now) {
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm_utc);
  return "mc-" + config_hash(config).substr(0, 8) + "-" + stamp;
}

void write_path_csv(const std::filesystem::path& file, const ObservationPath& path) {
  auto out = open_out(file);
  const bool hidden = !path.hidden_integrals.empty();
  out << (hidden ? "k,t,delta_x,hidden_integral\n" : "k,t,delta_x\n");
  for (std::size_t k = 0; k < path.n_steps(); ++k) {
    out << k << ',' << format_double(static_cast<double>(k) * path.step) << ','
        << format_double(path.increments[k]);
    if (hidden) out << ',' << format_double(path.hidden_integrals[k]);
    out << '\n';
  }
}

ObservationPath read_path_csv(const std::filesystem::path& file, double step) {
  std::ifstream in(file);
  if (!in) throw ConfigError("path file not found: " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("path file is empty: " + file.string());
  const bool hidden = line.find("hidden_integral") != std::string::npos;
  if (line.rfind("k,t,delta_x", 0) != 0)
    throw ConfigError("path file has an unexpected header: " + line);

  ObservationPath path;
  path.step = step;
  std::size_t expect_k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    if (static_cast<std::size_t>(std::stoull(cell)) != expect_k)
      throw ConfigError("path file rows are not consecutive at k = " + cell);
    std::getline(row, cell, ',');
    const double t = std::stod(cell);
    if (std::abs(t - static_cast<double>(expect_k) * step) > 1e-9 * std::max(1.0, t))
      throw ConfigError("path file time column disagrees with the configured step at k = " +
                        std::to_string(expect_k));
    std::getline(row, cell, ',');
    path.increments.push_back(std::stod(cell));
    if (hidden && std::getline(row, cell, ','))
      path.hidden_integrals.push_back(std::stod(cell));
    ++expect_k;
  }
  if (path.increments.empty()) throw ConfigError("path file has no rows: " + file.string());
  path.horizon = static_cast<double>(path.increments.size()) * step;
  return path;
}

void write_filter_csv(const std::filesystem::path& file, const FilterTrajectory& traj) {
  auto out = open_out(file);
  out << "t,pi,dpi_dlambda,dpi_dmu\n";
  const bool sens = traj.has_sensitivities();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.time(k)) << ',' << format_double(traj.pi[k]) << ','
        << format_double(sens ? traj.dpi_dlambda[k] : 0.0) << ','
        << format_double(sens ? traj.dpi_dmu[k] : 0.0) << '\n';
  }
}

void write_moments_csv(const std::filesystem::path& file, const MomentEstimate& estimate,
                       double horizon, double step) {
  auto out = open_out(file);
  out << "T,h,lambda_hat,mu_hat,beta,zeta,eta,eta_clamped,solvable\n";
  const MomentStatistics& s = estimate.stats;
  out << format_double(horizon) << ',' << format_double(step) << ','
      << format_double(estimate.lambda_hat) << ',' << format_double(estimate.mu_hat) << ','
      << format_double(s.beta) << ',' << format_double(s.zeta) << ',' << format_double(s.eta)
      << ',' << format_double(s.eta_clamped) << ',' << (s.solvable ? 1 : 0) << '\n';
}

void write_process_csv(const std::filesystem::path& file, const EstimatorProcess& process,
                       const std::vector<StandardizedPoint>& standardized) {
  auto out = open_out(file);
  out << "tau,t,lambda_star,mu_star,i11,i12,i22,eta1,eta2\n";
  for (std::size_t i = 0; i < process.records.size(); ++i) {
    const ProcessRecord& r = process.records[i];
    out << format_double(r.tau) << ',' << format_double(r.t) << ','
        << format_double(r.estimate.x) << ',' << format_double(r.estimate.y) << ','
        << format_double(r.fisher.a11) << ',' << format_double(r.fisher.a12) << ','
        << format_double(r.fisher.a22);
    if (i < standardized.size())
      out << ',' << format_double(standardized[i].eta.x) << ','
          << format_double(standardized[i].eta.y);
    else
      out << ",,";
    out << '\n';
  }
}

void write_density_csv(const std::filesystem::path& file, const InvariantDensity& density,
                       int points) {
  if (points < 2) throw std::invalid_argument("write_density_csv: points must be >= 2");
  auto out = open_out(file);
  out << "x,f\n";
  for (int i = 0; i < points; ++i) {
    const double x = (i + 0.5) / points;
    out << format_double(x) << ',' << format_double(density(x)) << '\n';
  }
}

void write_fisher_json(const std::filesystem::path& file, const SymMat2& fisher) {
  const auto [lo, hi] = fisher.eigenvalues();
  json j{{"i11", fisher.a11},
         {"i12", fisher.a12},
         {"i22", fisher.a22},
         {"eigenvalues", {lo, hi}}};
  auto out = open_out(file);
  out << j.dump(2) << '\n';
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const AppConfig& config, std::uint64_t seed) {
  json j;
  j["version"] = kVersion;
  j["command"] = command;
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char stamp[40];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  j["timestamp"] = stamp;
  j["seed"] = seed;
  j["config"] = json::parse(to_json_string(config));
  auto out = open_out(dir / "manifest.json");
  out << j.dump(2) << '\n';
}

// Timing is deliberately excluded: records.csv is bit-identical across runs
// of the same config.
std::string records_csv_string(const MCReport& report) {
  std::ostringstream out;
  out << "rep,seed,horizon,method,ok,error,lambda_hat,mu_hat,solvable,beta,zeta,eta,"
         "eta_clamped,i11,i12,i22,q1,q2,covered\n";
  for (const auto& rec : report.records) {
    for (const auto& r : rec.results) {
      out << rec.index << ',' << rec.seed << ',' << format_double(r.horizon) << ','
          << method_name(r.method) << ',' << (r.ok ? 1 : 0) << ',' << csv_quote(r.error) << ',';
      if (r.ok) {
        out << format_double(r.lambda_hat) << ',' << format_double(r.mu_hat) << ','
            << (r.solvable ? 1 : 0) << ',' << format_double(r.beta) << ','
            << format_double(r.zeta) << ',' << format_double(r.eta) << ','
            << format_double(r.eta_clamped) << ',';
        if (r.has_fisher)
          out << format_double(r.fisher.a11) << ',' << format_double(r.fisher.a12) << ','
              << format_double(r.fisher.a22) << ',';
        else
          out << ",,,";
        out << format_double(r.standardized.x) << ',' << format_double(r.standardized.y) << ',';
        if (r.has_coverage) out << (r.covered ? 1 : 0);
      } else {
        out << ",,,,,,,,,,,,";
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string report_json_string(const MCReport& report) {
  json j;
  j["version"] = kVersion;
  j["model"] = model_to_json(report.config.model);
  j["step"] = report.config.step;
  j["replications"] = report.config.replications;
  j["base_seed"] = report.config.base_seed;
  json summaries = json::array();
  for (const auto& s : report.summaries) {
    json item{{"method", method_name(s.method)},
              {"horizon", s.horizon},
              {"n_total", s.n_total},
              {"n_ok", s.n_ok},
              {"bias", {s.bias.x, s.bias.y}},
              {"mse", {s.mse.x, s.mse.y}},
              {"t_mse_sum", s.t_mse_sum},
              {"sqrt_t_err_cov",
               {{s.sqrt_t_err_cov.a11, s.sqrt_t_err_cov.a12},
                {s.sqrt_t_err_cov.a12, s.sqrt_t_err_cov.a22}}},
              {"frac_unsolvable", s.frac_unsolvable},
              {"standardized_mean", {s.standardized_mean.x, s.standardized_mean.y}},
              {"standardized_var", {s.standardized_var.x, s.standardized_var.y}}};
    if (s.coverage)
      item["coverage"] = *s.coverage;
    else
      item["coverage"] = nullptr;
    summaries.push_back(item);
  }
  j["summaries"] = summaries;
  return j.dump(2) + "\n";
}

void write_mc_artifacts(const MCReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "records.csv");
    out << records_csv_string(report);
  }
  {
    auto out = open_out(dir / "report.json");
    out << report_json_string(report);
  }
  auto out = open_out(dir / "qq_data.csv");
  out << "method,horizon,coord,p,sample_q,normal_q\n";
  for (double horizon : report.config.horizons) {
    for (EstimatorMethod method : report.config.methods) {
      for (int coord = 1; coord <= 2; ++coord) {
        std::vector<double> values;
        for (const auto& rec : report.records) {
          for (const auto& r : rec.results) {
            if (r.method != method || r.horizon != horizon || !r.ok) continue;
            values.push_back(coord == 1 ? r.standardized.x : r.standardized.y);
          }
        }
        std::sort(values.begin(), values.end());
        const double n = static_cast<double>(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
          const double p = (static_cast<double>(i) + 0.5) / n;
          out << method_name(method) << ',' << format_double(horizon) << ',' << coord << ','
              << format_double(p) << ',' << format_double(values[i]) << ','
              << format_double(normal_quantile(p)) << '\n';
        }
      }
    }
  }
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  // Acklam's rational approximation with the standard coefficients.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace htp
