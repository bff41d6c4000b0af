#include "conelab/scaling_fit.hpp"

#include <cmath>

#include "conelab/errors.hpp"

namespace conelab {

std::string model_name(FitModel m) { return m == FitModel::PurePower ? "pure-power" : "power-times-log"; }

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ArgumentError("fit_line: need >= 2 matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ArgumentError("fit_line: abscissae are all equal");
  LineFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.ssr += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - f.ssr / syy : 1.0;
  return f;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points, FitModel model) {
  if (points.size() < 4) throw ArgumentError("fit_scaling: need at least 4 points");
  std::vector<double> x, y;
  for (const auto& [d, v] : points) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError("fit_scaling: values must be positive");
    if (!(d > 0.0)) throw ArgumentError("fit_scaling: delta must be positive");
    x.push_back(std::log(d));
    double t = std::log(v);
    if (model == FitModel::PowerTimesLog) {
      if (!(d < 1.0)) throw ArgumentError("fit_scaling: log model needs delta < 1");
      t -= std::log(std::log(1.0 / d));
    }
    y.push_back(t);
  }
  const LineFit lf = fit_line(x, y);
  ScalingFit f;
  f.slope = lf.slope;
  f.intercept = lf.intercept;
  f.r2 = lf.r2;
  f.ssr = lf.ssr;
  f.model = model;
  f.points = int(points.size());
  return f;
}

ModelChoice select_model(const std::vector<std::pair<double, double>>& points) {
  ModelChoice c;
  c.power = fit_scaling(points, FitModel::PurePower);
  c.power_log = fit_scaling(points, FitModel::PowerTimesLog);
  c.preferred = c.power_log.ssr < c.power.ssr ? FitModel::PowerTimesLog : FitModel::PurePower;
  return c;
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ArgumentError("kendall_tau: need >= 2 matching points");
  double conc = 0.0, disc = 0.0, tx = 0.0, ty = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = x[i] - x[j], b = y[i] - y[j];
      if (a == 0.0 && b == 0.0) continue;
      if (a == 0.0) {
        tx += 1.0;
      } else if (b == 0.0) {
        ty += 1.0;
      } else if ((a > 0) == (b > 0)) {
        conc += 1.0;
      } else {
        disc += 1.0;
      }
    }
  const double denom = std::sqrt((conc + disc + tx) * (conc + disc + ty));
  return denom > 0.0 ? (conc - disc) / denom : 0.0;
}

}  // namespace conelab
