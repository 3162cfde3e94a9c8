// Python bindings for the hidden telegraph process toolkit. Trajectory-sized
// data crosses the boundary as numpy arrays; the rate parameter pair is
// exposed as (lam, mu) because `lambda` is a Python keyword.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "htp/experiments.hpp"
#include "htp/fisher.hpp"
#include "htp/filter.hpp"
#include "htp/io.hpp"
#include "htp/mle.hpp"
#include "htp/model.hpp"
#include "htp/moments.hpp"
#include "htp/rng.hpp"
#include "htp/telegraph.hpp"

namespace py = pybind11;
using namespace htp;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> as_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulation and estimation toolkit for a two-state telegraph signal "
            "observed in white Gaussian noise";
  m.attr("__version__") = kVersion;

  // ---- model ----
  py::class_<Theta>(m, "Theta")
      .def(py::init<double, double>(), py::arg("lam"), py::arg("mu"))
      .def_readonly("lam", &Theta::lambda)
      .def_readonly("mu", &Theta::mu)
      .def("sum", &Theta::sum)
      .def("__repr__", [](const Theta& t) {
        return "Theta(lam=" + format_double(t.lambda) + ", mu=" + format_double(t.mu) + ")";
      });

  py::class_<StateSpace>(m, "StateSpace")
      .def(py::init<double, double>(), py::arg("y1"), py::arg("y2"))
      .def_readonly("y1", &StateSpace::y1)
      .def_readonly("y2", &StateSpace::y2)
      .def("span", &StateSpace::span);

  py::class_<ParameterDomain>(m, "ParameterDomain")
      .def(py::init<double, double>(), py::arg("c0"), py::arg("c1"))
      .def_readonly("c0", &ParameterDomain::c0)
      .def_readonly("c1", &ParameterDomain::c1)
      .def("contains", &ParameterDomain::contains);

  py::class_<StationaryMoments>(m, "StationaryMoments")
      .def_readonly("y_bar", &StationaryMoments::y_bar)
      .def_readonly("d_var", &StationaryMoments::d_var);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init<Theta, StateSpace, ParameterDomain>(), py::arg("theta"),
           py::arg("states"), py::arg("domain"))
      .def_readonly("theta", &ModelSpec::theta)
      .def_readonly("states", &ModelSpec::states)
      .def_readonly("domain", &ModelSpec::domain);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("errors", &ValidationReport::errors)
      .def_readonly("warnings", &ValidationReport::warnings)
      .def("ok", &ValidationReport::ok);

  py::class_<TransitionMatrix>(m, "TransitionMatrix")
      .def_readonly("p11", &TransitionMatrix::p11)
      .def_readonly("p12", &TransitionMatrix::p12)
      .def_readonly("p21", &TransitionMatrix::p21)
      .def_readonly("p22", &TransitionMatrix::p22);

  m.def("stationary_distribution", &stationary_distribution, py::arg("theta"));
  m.def("transition_probabilities", &transition_probabilities, py::arg("theta"), py::arg("t"));
  m.def("stationary_moments", &stationary_moments, py::arg("theta"), py::arg("states"));
  m.def("covariance", &covariance, py::arg("theta"), py::arg("states"), py::arg("lag"));
  m.def("check_condition_m", &check_condition_m, py::arg("domain"), py::arg("states"),
        py::arg("n"));
  m.def(
      "validate_model",
      [](double lam, double mu, double y1, double y2, double c0, double c1) {
        return validate_model(ModelValues{lam, mu, y1, y2, c0, c1});
      },
      py::arg("lam"), py::arg("mu"), py::arg("y1"), py::arg("y2"), py::arg("c0"),
      py::arg("c1"));

  // ---- rng / simulation ----
  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &Rng::uniform)
      .def("normal", &Rng::normal)
      .def("exponential", &Rng::exponential, py::arg("rate"));

  m.def("derive_seed", &derive_seed, py::arg("base_seed"), py::arg("index"));

  py::class_<EventPath>(m, "EventPath")
      .def_readonly("initial_state", &EventPath::initial_state)
      .def_readonly("horizon", &EventPath::horizon)
      .def_property_readonly(
          "jump_times", [](const EventPath& p) { return as_array(p.jump_times); })
      .def("state_after", &EventPath::state_after, py::arg("jumps"));

  py::class_<ObservationPath>(m, "ObservationPath")
      .def(py::init([](double step, double horizon,
                       const py::array_t<double, py::array::c_style | py::array::forcecast>&
                           increments,
                       double x0) {
             ObservationPath p;
             p.step = step;
             p.horizon = horizon;
             p.x0 = x0;
             p.increments = as_vector(increments);
             if (grid_steps(horizon, step) != p.increments.size())
               throw std::invalid_argument("ObservationPath: horizon/step/increments mismatch");
             return p;
           }),
           py::arg("step"), py::arg("horizon"), py::arg("increments"), py::arg("x0") = 0.0)
      .def_readonly("step", &ObservationPath::step)
      .def_readonly("horizon", &ObservationPath::horizon)
      .def_readonly("x0", &ObservationPath::x0)
      .def_property_readonly(
          "increments", [](const ObservationPath& p) { return as_array(p.increments); })
      .def_property_readonly(
          "hidden_integrals",
          [](const ObservationPath& p) { return as_array(p.hidden_integrals); })
      .def("n_steps", &ObservationPath::n_steps)
      .def("terminal_average", &ObservationPath::terminal_average)
      .def("prefix", &ObservationPath::prefix, py::arg("t"));

  m.def("simulate_telegraph",
        py::overload_cast<const Theta&, double, Rng&>(&simulate_telegraph), py::arg("theta"),
        py::arg("horizon"), py::arg("rng"));
  m.def("integrate_hidden", &integrate_hidden, py::arg("path"), py::arg("states"),
        py::arg("step"));
  m.def("simulate_observations", &simulate_observations, py::arg("path"), py::arg("states"),
        py::arg("step"), py::arg("rng"), py::arg("store_hidden") = false);

  // ---- filter ----
  py::class_<FilterTrajectory>(m, "FilterTrajectory")
      .def_readonly("step", &FilterTrajectory::step)
      .def_readonly("clamp_count", &FilterTrajectory::clamp_count)
      .def_property_readonly("pi",
                             [](const FilterTrajectory& t) { return as_array(t.pi); })
      .def_property_readonly(
          "dpi_dlambda", [](const FilterTrajectory& t) { return as_array(t.dpi_dlambda); })
      .def_property_readonly(
          "dpi_dmu", [](const FilterTrajectory& t) { return as_array(t.dpi_dmu); })
      .def("has_sensitivities", &FilterTrajectory::has_sensitivities);

  py::class_<SymMat2>(m, "SymMat2")
      .def(py::init([](double a11, double a12, double a22) {
             return SymMat2{a11, a12, a22};
           }),
           py::arg("a11"), py::arg("a12"), py::arg("a22"))
      .def_readonly("a11", &SymMat2::a11)
      .def_readonly("a12", &SymMat2::a12)
      .def_readonly("a22", &SymMat2::a22)
      .def("trace", &SymMat2::trace)
      .def("det", &SymMat2::det)
      .def("eigenvalues", &SymMat2::eigenvalues)
      .def("inverse", &SymMat2::inverse)
      .def("sqrt_pd", &SymMat2::sqrt_pd)
      .def_property_readonly("array", [](const SymMat2& s) {
        py::array_t<double> out({2, 2});
        auto r = out.mutable_unchecked<2>();
        r(0, 0) = s.a11;
        r(0, 1) = s.a12;
        r(1, 0) = s.a12;
        r(1, 1) = s.a22;
        return out;
      });

  m.def("conditional_mean", &conditional_mean, py::arg("pi"), py::arg("states"));
  m.def("run_filter", &run_filter, py::arg("theta"), py::arg("states"), py::arg("path"),
        py::arg("pi0") = py::none());
  m.def("run_filter_with_sensitivities", &run_filter_with_sensitivities, py::arg("theta"),
        py::arg("states"), py::arg("path"));
  m.def("empirical_fisher", &empirical_fisher, py::arg("trajectory"), py::arg("states"),
        py::arg("t0"), py::arg("t"));
  m.def(
      "score_integral",
      [](const FilterTrajectory& traj, const ObservationPath& path, const StateSpace& states,
         double t0, double t) {
        const Vec2 s = score_integral(traj, path, states, t0, t);
        return std::make_pair(s.x, s.y);
      },
      py::arg("trajectory"), py::arg("path"), py::arg("states"), py::arg("t0"), py::arg("t"));
  m.def("log_likelihood", &log_likelihood, py::arg("theta"), py::arg("states"),
        py::arg("path"), py::arg("t"));

  // ---- moments ----
  py::class_<MomentStatistics>(m, "MomentStatistics")
      .def_readonly("terminal_average", &MomentStatistics::terminal_average)
      .def_readonly("zeta", &MomentStatistics::zeta)
      .def_readonly("eta", &MomentStatistics::eta)
      .def_readonly("eta_clamped", &MomentStatistics::eta_clamped)
      .def_readonly("alpha", &MomentStatistics::alpha)
      .def_readonly("beta", &MomentStatistics::beta)
      .def_readonly("solvable", &MomentStatistics::solvable);

  py::class_<MomentEstimate>(m, "MomentEstimate")
      .def_readonly("lambda_hat", &MomentEstimate::lambda_hat)
      .def_readonly("mu_hat", &MomentEstimate::mu_hat)
      .def_readonly("stats", &MomentEstimate::stats);

  m.def("phi", &phi, py::arg("x"));
  m.def("zeta", &zeta_statistic, py::arg("path"));
  m.def("eta", &eta_statistic, py::arg("path"), py::arg("states"), py::arg("domain"));
  m.def("solve_alpha", &solve_alpha, py::arg("zeta"), py::arg("eta_clamped"),
        py::arg("terminal_average"), py::arg("domain"));
  m.def("estimate_moments", &estimate_moments, py::arg("path"), py::arg("states"),
        py::arg("domain"));

  // ---- mle processes ----
  py::enum_<EstimatorMethod>(m, "EstimatorMethod")
      .value("moments", EstimatorMethod::moments)
      .value("one_step", EstimatorMethod::one_step)
      .value("two_step", EstimatorMethod::two_step);

  py::class_<EstimationConfig>(m, "EstimationConfig")
      .def(py::init([](double delta, std::vector<double> taus) {
             EstimationConfig c;
             c.delta = delta;
             c.output_taus = std::move(taus);
             return c;
           }),
           py::arg("delta") = 0.6,
           py::arg("output_taus") = std::vector<double>{0.25, 0.5, 0.75, 1.0})
      .def_readwrite("delta", &EstimationConfig::delta)
      .def_readwrite("output_taus", &EstimationConfig::output_taus);

  py::class_<ProcessRecord>(m, "ProcessRecord")
      .def_readonly("tau", &ProcessRecord::tau)
      .def_readonly("t", &ProcessRecord::t)
      .def_property_readonly("lambda_star",
                             [](const ProcessRecord& r) { return r.estimate.x; })
      .def_property_readonly("mu_star", [](const ProcessRecord& r) { return r.estimate.y; })
      .def_readonly("fisher", &ProcessRecord::fisher);

  py::class_<EstimatorProcess>(m, "EstimatorProcess")
      .def_readonly("horizon", &EstimatorProcess::horizon)
      .def_readonly("delta", &EstimatorProcess::delta)
      .def_readonly("learning_horizon", &EstimatorProcess::learning_horizon)
      .def_readonly("preliminary", &EstimatorProcess::preliminary)
      .def_readonly("records", &EstimatorProcess::records)
      .def_property_readonly("method", [](const EstimatorProcess& p) { return p.method; });

  m.def("one_step_process", &one_step_process, py::arg("path"), py::arg("states"),
        py::arg("domain"), py::arg("config"));
  m.def("two_step_process", &two_step_process, py::arg("path"), py::arg("states"),
        py::arg("domain"), py::arg("config"));
  m.def(
      "standardized_process",
      [](const EstimatorProcess& proc, const Theta& theta0, const SymMat2& fisher_ref) {
        std::vector<std::tuple<double, double, double>> out;
        for (const auto& p : standardized_process(proc, theta0, fisher_ref))
          out.emplace_back(p.tau, p.eta.x, p.eta.y);
        return out;
      },
      py::arg("process"), py::arg("theta0"), py::arg("fisher_ref"));

  // ---- invariant density / fisher ----
  py::class_<InvariantDensity>(m, "InvariantDensity")
      .def(py::init<const Theta&, const StateSpace&, int>(), py::arg("theta0"),
           py::arg("states"), py::arg("max_refinements") = 15)
      .def("__call__", &InvariantDensity::operator(), py::arg("x"))
      .def("log_unnormalized", &InvariantDensity::log_unnormalized, py::arg("x"))
      .def_property_readonly("gamma", &InvariantDensity::gamma)
      .def_property_readonly("log_normalizer", &InvariantDensity::log_normalizer)
      .def_property_readonly("normalizer", &InvariantDensity::normalizer)
      .def("mean", &InvariantDensity::mean)
      .def("bin_mass", &InvariantDensity::bin_mass, py::arg("a"), py::arg("b"));

  m.def("normalizing_constant", &normalizing_constant, py::arg("theta0"), py::arg("states"));
  m.def("fisher_by_ergodic_average", &fisher_by_ergodic_average, py::arg("theta0"),
        py::arg("states"), py::arg("sim_horizon"), py::arg("step"), py::arg("rng"),
        py::arg("burn_in_fraction") = 0.1);

  // ---- experiments ----
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init([](double lam, double mu, double y1, double y2, double c0, double c1,
                       std::vector<double> horizons, double step, int replications,
                       std::uint64_t base_seed, std::vector<EstimatorMethod> methods,
                       const EstimationConfig& one_step, const EstimationConfig& two_step,
                       int threads) {
             ExperimentConfig c;
             c.model = ModelValues{lam, mu, y1, y2, c0, c1};
             c.horizons = std::move(horizons);
             c.step = step;
             c.replications = replications;
             c.base_seed = base_seed;
             c.methods = std::move(methods);
             c.one_step = one_step;
             c.two_step = two_step;
             c.threads = threads;
             return c;
           }),
           py::arg("lam") = 1.0, py::arg("mu") = 1.0, py::arg("y1") = 0.0,
           py::arg("y2") = 1.0, py::arg("c0") = 0.1, py::arg("c1") = 5.0,
           py::arg("horizons") = std::vector<double>{250.0, 1000.0, 4000.0},
           py::arg("step") = 0.01, py::arg("replications") = 400,
           py::arg("base_seed") = 20260809,
           py::arg("methods") =
               std::vector<EstimatorMethod>{EstimatorMethod::moments,
                                            EstimatorMethod::one_step},
           py::arg("one_step") = EstimationConfig{0.6, {0.25, 0.5, 0.75, 1.0}},
           py::arg("two_step") = EstimationConfig{0.4, {0.25, 0.5, 0.75, 1.0}},
           py::arg("threads") = 0)
      .def_readwrite("horizons", &ExperimentConfig::horizons)
      .def_readwrite("step", &ExperimentConfig::step)
      .def_readwrite("replications", &ExperimentConfig::replications)
      .def_readwrite("base_seed", &ExperimentConfig::base_seed)
      .def_readwrite("threads", &ExperimentConfig::threads);

  py::class_<MethodResult>(m, "MethodResult")
      .def_readonly("method", &MethodResult::method)
      .def_readonly("horizon", &MethodResult::horizon)
      .def_readonly("ok", &MethodResult::ok)
      .def_readonly("error", &MethodResult::error)
      .def_readonly("lambda_hat", &MethodResult::lambda_hat)
      .def_readonly("mu_hat", &MethodResult::mu_hat)
      .def_readonly("solvable", &MethodResult::solvable)
      .def_readonly("covered", &MethodResult::covered)
      .def_property_readonly("standardized", [](const MethodResult& r) {
        return std::make_pair(r.standardized.x, r.standardized.y);
      });

  py::class_<ReplicationRecord>(m, "ReplicationRecord")
      .def_readonly("index", &ReplicationRecord::index)
      .def_readonly("seed", &ReplicationRecord::seed)
      .def_readonly("results", &ReplicationRecord::results)
      .def_readonly("elapsed_ms", &ReplicationRecord::elapsed_ms);

  py::class_<MethodHorizonSummary>(m, "MethodHorizonSummary")
      .def_readonly("method", &MethodHorizonSummary::method)
      .def_readonly("horizon", &MethodHorizonSummary::horizon)
      .def_readonly("n_total", &MethodHorizonSummary::n_total)
      .def_readonly("n_ok", &MethodHorizonSummary::n_ok)
      .def_property_readonly("bias",
                             [](const MethodHorizonSummary& s) {
                               return std::make_pair(s.bias.x, s.bias.y);
                             })
      .def_property_readonly("mse",
                             [](const MethodHorizonSummary& s) {
                               return std::make_pair(s.mse.x, s.mse.y);
                             })
      .def_readonly("t_mse_sum", &MethodHorizonSummary::t_mse_sum)
      .def_readonly("frac_unsolvable", &MethodHorizonSummary::frac_unsolvable)
      .def_readonly("coverage", &MethodHorizonSummary::coverage)
      .def_property_readonly("standardized_var", [](const MethodHorizonSummary& s) {
        return std::make_pair(s.standardized_var.x, s.standardized_var.y);
      });

  py::class_<MCReport>(m, "MCReport")
      .def_readonly("records", &MCReport::records)
      .def_readonly("summaries", &MCReport::summaries);

  m.def("run_replication", &run_replication, py::arg("config"), py::arg("index"));
  m.def("run_monte_carlo", &run_monte_carlo, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("write_mc_artifacts", &write_mc_artifacts, py::arg("report"), py::arg("directory"));
  m.def("grid_mle_oracle", &grid_mle_oracle, py::arg("path"), py::arg("states"),
        py::arg("domain"), py::arg("grid_n"));
}
