// One-step and two-step MLE-processes: Newton-scoring corrections of the
// moment-based preliminary estimator computed on the learning interval
// [0, T^delta], plus the standardized error process used as the Wiener-limit
// diagnostic.
#pragma once

#include <stdexcept>
#include <vector>

#include "htp/mat2.hpp"
#include "htp/model.hpp"
#include "htp/moments.hpp"
#include "htp/telegraph.hpp"

namespace htp {

enum class EstimatorMethod { moments, one_step, two_step };

const char* method_name(EstimatorMethod m);

struct EstimationConfig {
  // Learning-interval exponent; one-step needs delta in (1/2, 1), two-step in
  // (1/4, 1/2].
  double delta = 0.6;
  // Requested output times as fractions of the horizon, strictly increasing
  // in (0, 1]; times inside the learning interval are dropped.
  std::vector<double> output_taus = {0.25, 0.5, 0.75, 1.0};

  bool operator==(const EstimationConfig&) const = default;
};

struct EstimationError : std::runtime_error {
  double t;
  EstimationError(const std::string& msg, double t_in) : std::runtime_error(msg), t(t_in) {}
};

struct ProcessRecord {
  double tau = 0.0;
  double t = 0.0;
  Vec2 estimate;    // (lambda, mu); raw, not projected onto the domain
  SymMat2 fisher;   // empirical Fisher at t (1/t normalization)
};

struct EstimatorProcess {
  EstimatorMethod method = EstimatorMethod::one_step;
  double horizon = 0.0;
  double step = 0.0;
  double delta = 0.0;
  double learning_horizon = 0.0;  // floor(T^delta)
  MomentEstimate preliminary;
  std::vector<ProcessRecord> records;
};

struct StandardizedPoint {
  double tau = 0.0;
  Vec2 eta;
};

// theta*_t = theta_hat + Gram^{-1} score over [T^delta, t); one sensitivity
// filter pass at theta_hat serves every output time.
EstimatorProcess one_step_process(const ObservationPath& path, const StateSpace& states,
                                  const ParameterDomain& domain, const EstimationConfig& config);

// theta**_t adds a second scoring correction whose residual is taken against
// m(theta*_t); one extra plain filter pass per output time.
EstimatorProcess two_step_process(const ObservationPath& path, const StateSpace& states,
                                  const ParameterDomain& domain, const EstimationConfig& config);

// eta_T(tau) = tau sqrt(T) fisher_ref^{1/2} (theta*(tau) - theta0), the
// process that approaches a standard planar Wiener process in tau.
std::vector<StandardizedPoint> standardized_process(const EstimatorProcess& process,
                                                    const Theta& theta0,
                                                    const SymMat2& fisher_ref);

}  // namespace htp
