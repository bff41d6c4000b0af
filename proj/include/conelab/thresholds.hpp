#pragma once

#include <string>
#include <vector>

namespace conelab {

enum class Cmp { Le, Ge, In };

struct Threshold {
  std::string id;
  int criterion = 0;  // 0: property check outside the numbered criteria
  std::string scenario;
  std::string quantity;
  Cmp cmp = Cmp::Le;
  double lo = 0.0;
  double hi = 0.0;
  std::string basis;

  bool passes(double v) const;
  /// "<= 1e-12", ">= 3.2", "in [0.85, 1.15]".
  std::string describe() const;
};

/// Version tag of the shipped table; every verdict cites it with the entry id.
const std::string& threshold_table_version();
const std::vector<Threshold>& threshold_table();
/// Throws ArgumentError for an unknown id.
const Threshold& threshold(const std::string& id);

}  // namespace conelab
