#pragma once

#include <string>
#include <utility>
#include <vector>

namespace conelab {

enum class FitModel { PurePower, PowerTimesLog };

std::string model_name(FitModel m);

/// log v = slope log delta + intercept (pure power), or
/// log(v / log(1/delta)) = slope log delta + intercept (power times log).
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double ssr = 0.0;
  FitModel model = FitModel::PurePower;
  int points = 0;
};

/// points are (delta, value) pairs; needs >= 4 points and positive values.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points, FitModel model);

struct ModelChoice {
  ScalingFit power;
  ScalingFit power_log;
  FitModel preferred = FitModel::PurePower;
  const ScalingFit& best() const { return preferred == FitModel::PurePower ? power : power_log; }
};

/// Fits both models and prefers the one with the smaller residual.
ModelChoice select_model(const std::vector<std::pair<double, double>>& points);

/// Ordinary least squares y = a + b x; returns {b, a, r2, ssr}.
struct LineFit {
  double slope, intercept, r2, ssr;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Kendall tau-b rank correlation.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace conelab
