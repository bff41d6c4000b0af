#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace conelab {

enum class ParamType { Int, Real, RealList, PairList, Bool, Text };

/// One schema entry.  Numeric values (and list elements) must lie in [lo, hi].
struct ParamSpec {
  std::string key;
  ParamType type;
  std::string fallback;
  double lo = -1e300;
  double hi = 1e300;
  std::string doc;
};

/// Known scenarios in CLI order.
const std::vector<std::string>& scenario_names();
bool is_scenario(const std::string& name);

/// Schema of a scenario (generic keys seed/out/threads/deterministic included).
const std::vector<ParamSpec>& scenario_schema(const std::string& scenario);

/// Flat key = value file; '#' starts a comment.  Lists are comma separated and
/// pairs are written a:b.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Resolved, validated configuration.  Precedence: cli > file > schema defaults.
class ExperimentConfig {
 public:
  static ExperimentConfig resolve(const std::string& scenario, const std::map<std::string, std::string>& file,
                                  const std::map<std::string, std::string>& cli);

  const std::string& scenario() const { return scenario_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& text(const std::string& key) const;
  long integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::pair<double, double>> pairs(const std::string& key) const;
  std::uint64_t seed() const { return static_cast<std::uint64_t>(integer("seed")); }

  /// Resolved values in schema order, for the JSON echo.
  const std::vector<std::pair<std::string, std::string>>& entries() const { return ordered_; }

 private:
  std::string scenario_;
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, std::string>> ordered_;
};

}  // namespace conelab
