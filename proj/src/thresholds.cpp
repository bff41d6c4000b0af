#include "conelab/thresholds.hpp"

#include <cmath>
#include <sstream>

#include "conelab/errors.hpp"

namespace conelab {

bool Threshold::passes(double v) const {
  if (!std::isfinite(v)) return false;
  switch (cmp) {
    case Cmp::Le: return v <= hi;
    case Cmp::Ge: return v >= lo;
    case Cmp::In: return v >= lo && v <= hi;
  }
  return false;
}

std::string Threshold::describe() const {
  std::ostringstream s;
  s.precision(6);
  switch (cmp) {
    case Cmp::Le: s << "<= " << hi; break;
    case Cmp::Ge: s << ">= " << lo; break;
    case Cmp::In: s << "in [" << lo << ", " << hi << "]"; break;
  }
  return s.str();
}

const std::string& threshold_table_version() {
  static const std::string v = "thresholds-v4";
  return v;
}

const std::vector<Threshold>& threshold_table() {
  static const std::vector<Threshold> t = {
      {"C1.residual", 1, "reconstruct", "max_residual", Cmp::Le, 0, 1e-12, "symbol-level reconstruction"},
      {"C1.runtime", 1, "reconstruct", "runtime_ms", Cmp::Le, 0, 10e3, "budget 10 s"},

      {"C2.t_integral", 2, "square-bound", "t_integral_over_log_bound", Cmp::Le, 0, 1.0,
       "t-integral <= log(1/(1-delta))"},
      {"C2.log_bound", 2, "square-bound", "log_bound_over_1.2delta", Cmp::Le, 0, 1.0, "log(1/(1-delta)) <= 1.2 delta"},
      {"C2.ratio", 2, "square-bound", "g_ratio_over_bound", Cmp::Le, 0, 1.0, "||G f||/||f|| <= (1.2 delta)^(1/2)"},
      {"C2.runtime", 2, "square-bound", "runtime_ms", Cmp::Le, 0, 120e3, "budget 2 min"},

      {"C3.n3.slope", 3, "trace-sweep", "slope_error", Cmp::In, -0.15, 0.15, "fitted minus regime exponent, n = 3"},
      {"C3.n3.log_preferred", 3, "trace-sweep", "log_model_preferred", Cmp::Ge, 1, 0, "critical line, n = 3"},
      {"C3.n3.log_power", 3, "trace-sweep", "log_model_power", Cmp::In, 0.85, 1.05, "critical line, n = 3"},
      {"C3.n4.slope", 3, "trace-sweep", "slope_error", Cmp::In, -0.2, 0.2, "fitted minus regime exponent, n = 4"},
      {"C3.n4.log_preferred", 3, "trace-sweep", "log_model_preferred", Cmp::Ge, 1, 0, "critical line, n = 4"},
      {"C3.n4.log_power", 3, "trace-sweep", "log_model_power", Cmp::In, 0.8, 1.2, "critical line, n = 4"},
      {"C3.runtime", 3, "trace-sweep", "runtime_ms", Cmp::Le, 0, 900e3, "budget 15 min per dimension"},

      {"C4.slope", 4, "sphere-sweep", "slope_error", Cmp::In, -0.15, 0.15, "fitted minus regime exponent"},
      {"C4.log_preferred", 4, "sphere-sweep", "log_model_preferred", Cmp::Ge, 1, 0, "alpha = 1"},
      {"C4.log_power", 4, "sphere-sweep", "log_model_power", Cmp::In, 0.85, 1.15, "alpha = 1"},
      {"C4.runtime", 4, "sphere-sweep", "runtime_ms", Cmp::Le, 0, 600e3, "budget 10 min"},

      {"C5.rel_error", 5, "interval-trace", "max_rel_error", Cmp::Le, 0, 5e-3, "quadrature vs (2/beta) delta^beta"},
      {"C5.monotone", 5, "interval-trace", "monotone_in_delta", Cmp::Ge, 1, 0, "sup increases with delta"},
      {"C5.runtime", 5, "interval-trace", "runtime_ms", Cmp::Le, 0, 10e3, "budget 10 s"},

      {"C6.tau", 6, "slice-volume", "kendall_tau", Cmp::In, -0.3, 0.3, "no trend of max_k ratio in l"},
      {"C6.constant", 6, "slice-volume", "max_ratio", Cmp::Le, 0, 64, "measured constant"},
      {"C6.runtime", 6, "slice-volume", "runtime_ms", Cmp::Le, 0, 600e3, "budget 10 min"},

      {"C7.slope_i", 7, "offcone-decay", "slope_i", Cmp::Le, 0, -3, "decay in 2^j delta"},
      {"C7.slope_ii", 7, "offcone-decay", "slope_ii", Cmp::Le, 0, -3, "decay in 2^l"},
      {"C7.runtime", 7, "offcone-decay", "runtime_ms", Cmp::Le, 0, 300e3, "budget 5 min"},
      {"S7.slope_i", 0, "offcone-decay", "supp_slope_i", Cmp::Le, 0, -3, "reduced-scale sweep (i)"},
      {"S7.slope_ii", 0, "offcone-decay", "supp_slope_ii", Cmp::Le, 0, -3, "reduced-scale sweep (ii)"},
      {"S7.j0_bound", 0, "offcone-decay", "j0_sup_over_bound", Cmp::Le, 0, 1.1, "||m||_inf ||Psi^_j0||_1 + 10%"},

      {"C8.exponent", 8, "kernel-decay", "decay_exponent_margin", Cmp::Ge, 0, 0,
       "fitted exponent minus (n/2 + lambda - 0.3)"},
      {"K8.doubling", 0, "kernel-decay", "quadrature_doubling_change", Cmp::Le, 0, 0.01,
       "relative change when the node counts double"},
      {"C8.runtime", 8, "kernel-decay", "runtime_ms", Cmp::Le, 0, 1200e3, "budget 20 min"},

      {"C9.ratio", 9, "converge", "error_ratio", Cmp::In, 1.0 / 6.0, 1.0 / 2.5, "t^-2 law for t >= 8"},
      {"C9.final", 9, "converge", "final_error_rel", Cmp::Le, 0, 1e-3, "error(2^10) / ||f||_inf"},
      {"C9.runtime", 9, "converge", "runtime_ms", Cmp::Le, 0, 300e3, "budget 5 min"},

      {"C10.sum", 10, "decompose-check", "sum_identity", Cmp::Le, 0, 1e-13, "f = f1 + f2 + f3 + f4"},
      {"C10.leak", 10, "decompose-check", "band_leakage", Cmp::Le, 0, 1e-6, "energy outside 1/10 < xi_n < 10"},
      {"C10.spread", 10, "decompose-check", "dilation_spread", Cmp::Le, 0, 3, "max/min over the dilation family"},
      {"C10.runtime", 10, "decompose-check", "runtime_ms", Cmp::Le, 0, 300e3, "budget 5 min"},

      {"C11.finite", 11, "ortho-check", "finite", Cmp::Ge, 1, 0, "ratios finite"},
      {"C11.stability", 11, "ortho-check", "refinement_change", Cmp::Le, 0, 0.5, "relative change under N -> 2N"},
      {"C11.runtime", 11, "ortho-check", "runtime_ms", Cmp::Le, 0, 600e3, "budget 10 min"},

      {"C12.slope", 12, "g0-weighted", "slope_margin", Cmp::Ge, -0.2, 0, "fitted minus regime exponent"},
      {"C12.runtime", 12, "g0-weighted", "runtime_ms", Cmp::Le, 0, 1800e3, "budget 30 min"},

      {"A2.unweighted", 0, "a2-check", "max_deviation_from_1", Cmp::Le, 0, 1e-12, "alpha = beta = 0"},
      {"A2.stable", 0, "a2-check", "last_level_ratio", Cmp::Le, 0, 1.05, "admissible sweep stabilizes"},
      {"A2.growth", 0, "a2-check", "growth_over_predicted", Cmp::In, 0.95, 1.05,
       "per-level growth 2^(alpha-(n-1)) or 2^(beta-1)"},
  };
  return t;
}

const Threshold& threshold(const std::string& id) {
  for (const auto& t : threshold_table())
    if (t.id == id) return t;
  throw ArgumentError("threshold: unknown id " + id);
}

}  // namespace conelab
