#include "conelab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "conelab/errors.hpp"
#include "conelab/grid.hpp"

namespace conelab {

namespace {

using P = ParamType;

const std::vector<ParamSpec>& common() {
  static const std::vector<ParamSpec> c = {
      {"seed", P::Int, "20261017", 0, 9.0e15, "master seed"},
      {"out", P::Text, "conelab_store", 0, 0, "run store directory"},
      {"threads", P::Int, "1", 1, 256, "worker threads"},
      {"deterministic", P::Bool, "false", 0, 0, "write runtime_ms = 0"},
  };
  return c;
}

const std::string kDyadic3to7 = "0.125,0.0625,0.03125,0.015625,0.0078125";
const std::string kDyadic8to16 =
    "0.00390625,0.001953125,0.0009765625,0.00048828125,0.000244140625,0.0001220703125,6.103515625e-05,3.0517578125e-05,1.52587890625e-05";

std::map<std::string, std::vector<ParamSpec>> build() {
  std::map<std::string, std::vector<ParamSpec>> s;
  s["reconstruct"] = {
      {"n", P::Int, "3", 2, 8, "dimension"},
      {"lambda", P::Real, "1", 0, 20, "Bochner-Riesz order"},
      {"gamma_max", P::Int, "12", 1, 40, "largest dyadic index"},
      {"samples", P::Int, "100000", 100, 1e9, "random frequencies"},
      {"u_min", P::Real, "0.0001220703125", 1e-12, 1, "smallest aperture 1-|xi'|^2/xi_n^2"},
  };
  s["square-bound"] = {
      {"n", P::Int, "2", 2, 3, "dimension"},
      {"N", P::Int, "512", 8, 8192, "points per axis"},
      {"L", P::Real, "64", 1, 1e6, "box length"},
      {"delta", P::RealList, kDyadic3to7, 1e-6, 0.25, "collar widths"},
      {"fields", P::Int, "20", 1, 1000, "random fields"},
      {"seed_stream", P::Int, "2", 0, 1e9, "stream offset for fields"},
  };
  s["trace-sweep"] = {
      {"n", P::Int, "3", 2, 6, "dimension"},
      {"delta", P::RealList, kDyadic3to7, 1e-6, 0.25, "collar widths"},
      {"regimes", P::PairList, "0.25:0.25,0.4:0.4,0.5:0.5,0.65:0.65,0.8:0.8", 0, 10, "alpha:beta pairs"},
      {"critical_delta", P::RealList, kDyadic8to16, 1e-8, 0.25, "collar widths on the line alpha + beta = 1"},
      {"alpha", P::Real, "", 0, 10, "single regime alpha (with beta)"},
      {"beta", P::Real, "", 0, 1, "single regime beta (with alpha)"},
      {"samples", P::Int, "1000000", 1000, 1e10, "samples per probe point"},
  };
  s["sphere-sweep"] = {
      {"n", P::Int, "3", 2, 6, "dimension (sphere S^{n-2} in R^{n-1})"},
      {"delta", P::RealList, kDyadic8to16, 1e-8, 0.25, "collar widths"},
      {"alpha", P::RealList, "0.5,1,1.5", 1e-6, 10, "weight exponents"},
      {"samples", P::Int, "1000000", 1000, 1e10, "directions per probe point"},
  };
  s["interval-trace"] = {
      {"beta", P::RealList, "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9", 1e-6, 0.999999, "exponents"},
      {"delta", P::RealList,
       "0.0625,0.03125,0.015625,0.0078125,0.00390625,0.001953125,0.0009765625,0.00048828125,0.000244140625", 1e-12,
       1, "half-lengths"},
      {"offsets", P::Int, "41", 3, 100001, "quadrature offsets per interval"},
  };
  s["slice-volume"] = {
      {"n", P::Int, "3", 3, 6, "dimension"},
      {"delta", P::RealList, "1.52587890625e-05", 1e-9, 0.25, "collar width (first entry used)"},
      {"l_max", P::Int, "64", 1, 100000, "largest stratum index"},
      {"x_n", P::Real, "1.5", 1, 2, "height of the base point on the cone"},
      {"samples", P::Int, "20000", 100, 1e9, "samples per (l, k)"},
      {"band_pos", P::Real, "0.5", 0, 1, "position of z_n inside its band"},
  };
  s["kernel-decay"] = {
      {"n", P::Int, "3", 3, 3, "dimension (reduced path)"},
      {"lambda", P::Real, "2", 0, 10, "Bochner-Riesz order"},
      {"r_min", P::Real, "4", 0.1, 1e4, "smallest |x|"},
      {"r_max", P::Real, "64", 0.2, 1e4, "largest |x|"},
      {"radii", P::Int, "17", 4, 1000, "geometric radii"},
      {"angles", P::RealList, "0.6154797086703874,0.7853981633974483", 0, 3.15, "ray angles from the x_n axis"},
  };
  s["offcone-decay"] = {
      {"n", P::Int, "2", 2, 2, "dimension"},
      {"N", P::Int, "1024", 64, 8192, "points per axis"},
      {"L", P::Real, "256", 8, 1e5, "box length"},
      {"delta", P::RealList, "0.03125", 1e-4, 0.25, "collar width (first entry used)"},
      {"j_steps", P::Int, "4", 1, 10, "sweep (i) covers j0 .. j0 + j_steps"},
      {"l_probe", P::RealList, "2,3,4,5,6", 0, 30, "shells of sweep (ii)"},
      {"supplement", P::Bool, "true", 0, 0, "also run the reduced-scale sweeps"},
      {"supp_delta", P::Real, "0.25", 1e-4, 0.25, "reduced-scale collar width"},
      {"supp_N", P::Int, "2048", 64, 8192, "reduced-scale points per axis"},
      {"supp_L_i", P::Real, "512", 8, 1e5, "box for sweep (i)"},
      {"supp_L_ii", P::Real, "128", 8, 1e5, "box for sweep (ii)"},
      {"supp_l_probe", P::RealList, "1,2,3,4", 0, 30, "shells of reduced sweep (ii)"},
  };
  s["g0-weighted"] = {
      {"n", P::Int, "3", 2, 3, "dimension"},
      {"N", P::Int, "128", 8, 1024, "points per axis"},
      {"L", P::Real, "16", 1, 1e5, "box length"},
      {"delta", P::RealList, "0.125,0.0625,0.03125,0.015625", 1e-5, 0.25, "collar widths"},
      {"regimes", P::PairList, "0.5:0.3,1.2:0.6", -10, 10, "alpha:beta pairs"},
      {"alpha", P::Real, "", -10, 10, "single regime alpha (with beta)"},
      {"beta", P::Real, "", -1, 1, "single regime beta (with alpha)"},
      {"fields", P::Int, "20", 1, 1000, "random fields"},
      {"band", P::PairList, "0.7:1.8", 0, 100, "xi_n range of the fields"},
      {"ratio", P::PairList, "1.1:1.8", 0, 100, "|xi'|/xi_n range of the fields"},
  };
  s["converge"] = {
      {"n", P::Int, "3", 2, 4, "dimension"},
      {"N", P::Int, "128", 8, 2048, "points per axis"},
      {"L", P::Real, "32", 1, 1e5, "box length"},
      {"lambda", P::Real, "1", 0, 20, "Bochner-Riesz order"},
      {"t_exp_max", P::Int, "10", 4, 30, "t runs over 2^0 .. 2^t_exp_max"},
      {"fields", P::Int, "3", 1, 100, "random band-limited fields"},
      {"ratio_max", P::Real, "1.5", 0, 100, "largest |xi'|/xi_n of the fields"},
  };
  s["decompose-check"] = {
      {"n", P::Int, "3", 2, 3, "dimension of the sum and leakage checks"},
      {"N", P::Int, "128", 8, 1024, "points per axis"},
      {"L", P::Real, "32", 1, 1e5, "box length"},
      {"rho", P::Real, "0.00390625", 1e-9, 0.015625, "cap radius of the leakage check"},
      {"fields", P::Int, "20", 1, 1000, "spectral-bump fields"},
      {"p", P::Real, "4", 2, 1e6, "Lebesgue exponent"},
      {"eps", P::Real, "0.25", 1e-12, 0.5, "exponent slack"},
      {"dil_N", P::Int, "2048", 8, 8192, "points per axis of the 2-D dilation study"},
      {"dil_L", P::Real, "16384", 1, 1e7, "box of the dilation study"},
      {"dil_rho", P::Real, "0.015625", 1e-9, 0.015625, "cap radius of the dilation study"},
      {"sigma", P::Real, "1024", 1e-3, 1e7, "Gaussian width of the dilation study"},
      {"scales", P::RealList, "0.25,0.5,1,2,4", 1e-3, 1e3, "dilations s"},
  };
  s["ortho-check"] = {
      {"n", P::Int, "2", 2, 3, "dimension"},
      {"N", P::Int, "128", 8, 2048, "points per axis (doubled for the refinement)"},
      {"L", P::Real, "16", 1, 1e5, "box length"},
      {"regimes", P::PairList, "0:0,0:0.5,0:0.9,0.5:0,0.5:0.5,0.5:0.9,0.9:0,0.9:0.5,0.9:0.9", -10, 10,
       "alpha:beta pairs"},
      {"alpha", P::Real, "", -10, 10, "single regime alpha (with beta)"},
      {"beta", P::Real, "", -1, 1, "single regime beta (with alpha)"},
      {"fields", P::Int, "10", 1, 1000, "random band-limited fields"},
  };
  s["a2-check"] = {
      {"n", P::Int, "3", 2, 8, "dimension"},
      {"levels", P::Int, "20", 4, 60, "dyadic levels toward the singular planes"},
      {"regimes", P::PairList, "0:0,1.9:0,0.5:0.5,1:-0.5,2.1:0,0:1.2", -10, 10, "alpha:beta pairs"},
      {"alpha", P::Real, "", -10, 10, "single regime alpha (with beta)"},
      {"beta", P::Real, "", -10, 10, "single regime beta (with alpha)"},
  };
  for (auto& [name, v] : s) v.insert(v.end(), common().begin(), common().end());
  return s;
}

const std::map<std::string, std::vector<ParamSpec>>& schemas() {
  static const auto s = build();
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& path, const std::string& v) {
  std::size_t used = 0;
  double d;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config." + path + ": '" + v + "' is not a number");
  }
  if (used != v.size() || !std::isfinite(d)) throw ConfigError("config." + path + ": '" + v + "' is not a number");
  return d;
}

void check_range(const ParamSpec& p, const std::string& path, double d) {
  if (d < p.lo || d > p.hi) {
    std::ostringstream m;
    m << "config." << path << ": " << d << " outside [" << p.lo << ", " << p.hi << "]";
    throw ConfigError(m.str());
  }
}

void validate(const ParamSpec& p, const std::string& v) {
  switch (p.type) {
    case P::Int: {
      const double d = parse_real(p.key, v);
      if (d != std::floor(d)) throw ConfigError("config." + p.key + ": '" + v + "' is not an integer");
      check_range(p, p.key, d);
      break;
    }
    case P::Real:
      check_range(p, p.key, parse_real(p.key, v));
      break;
    case P::RealList: {
      const auto items = split(v, ',');
      if (items.empty()) throw ConfigError("config." + p.key + ": empty list");
      for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string path = p.key + "[" + std::to_string(i) + "]";
        check_range(p, path, parse_real(path, items[i]));
      }
      break;
    }
    case P::PairList: {
      const auto items = split(v, ',');
      if (items.empty()) throw ConfigError("config." + p.key + ": empty list");
      for (std::size_t i = 0; i < items.size(); ++i) {
        const auto ab = split(items[i], ':');
        const std::string path = p.key + "[" + std::to_string(i) + "]";
        if (ab.size() != 2) throw ConfigError("config." + path + ": expected a:b, got '" + items[i] + "'");
        check_range(p, path + ".a", parse_real(path + ".a", ab[0]));
        check_range(p, path + ".b", parse_real(path + ".b", ab[1]));
      }
      break;
    }
    case P::Bool:
      if (v != "true" && v != "false" && v != "1" && v != "0")
        throw ConfigError("config." + p.key + ": expected true or false, got '" + v + "'");
      break;
    case P::Text:
      if (v.empty()) throw ConfigError("config." + p.key + ": empty value");
      break;
  }
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "reconstruct",     "square-bound", "trace-sweep", "sphere-sweep", "interval-trace",
      "slice-volume",    "kernel-decay", "offcone-decay", "g0-weighted", "converge",
      "decompose-check", "ortho-check",  "a2-check"};
  return names;
}

bool is_scenario(const std::string& name) { return schemas().count(name) != 0; }

const std::vector<ParamSpec>& scenario_schema(const std::string& scenario) {
  const auto it = schemas().find(scenario);
  if (it == schemas().end()) throw ConfigError("config.scenario: unknown scenario '" + scenario + "'");
  return it->second;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: " + path + ":" + std::to_string(no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config: " + path + ":" + std::to_string(no) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

ExperimentConfig ExperimentConfig::resolve(const std::string& scenario,
                                           const std::map<std::string, std::string>& file,
                                           const std::map<std::string, std::string>& cli) {
  const auto& schema = scenario_schema(scenario);
  auto known = [&](const std::string& k) {
    return k == "scenario" ||
           std::any_of(schema.begin(), schema.end(), [&](const ParamSpec& p) { return p.key == k; });
  };
  for (const auto* src : {&file, &cli})
    for (const auto& [k, v] : *src) {
      if (!known(k)) throw ConfigError("config." + k + ": not a parameter of scenario " + scenario);
      if (k == "scenario" && v != scenario)
        throw ConfigError("config.scenario: file names '" + v + "' but the command runs " + scenario);
    }

  ExperimentConfig c;
  c.scenario_ = scenario;
  for (const auto& p : schema) {
    std::string v = p.fallback;
    if (auto it = file.find(p.key); it != file.end()) v = it->second;
    if (auto it = cli.find(p.key); it != cli.end()) v = it->second;
    if (v.empty() && p.fallback.empty() && !file.count(p.key) && !cli.count(p.key)) continue;
    validate(p, v);
    c.values_[p.key] = v;
    c.ordered_.emplace_back(p.key, v);
  }
  if (c.has("alpha") != c.has("beta") && c.has("regimes"))
    throw ConfigError("config.alpha: alpha and beta must be given together");

  // refuse oversize grids before anything is allocated
  auto check_grid = [&](const char* nkey, const char* key, int dim) {
    if (!c.has(key)) return;
    const double n = double(c.integer(key));
    const int d = dim > 0 ? dim : (c.has(nkey) ? int(c.integer(nkey)) : 1);
    const double bytes = std::pow(n, d) * 16.0;
    if (bytes > double(memory_cap()))
      throw ResourceError("config." + std::string(key) + ": a " + std::to_string(d) + "-D grid of " +
                          std::to_string(long(n)) + " points per axis needs " + std::to_string(long(bytes)) +
                          " bytes, above the cap of " + std::to_string(memory_cap()));
    const long m = long(n);
    if (m < 8 || (m & (m - 1)) != 0) throw ConfigError("config." + std::string(key) + ": must be a power of two >= 8");
  };
  check_grid("n", "N", 0);
  check_grid("n", "dil_N", 2);
  check_grid("n", "supp_N", 2);
  return c;
}

const std::string& ExperimentConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config." + key + ": not set for scenario " + scenario_);
  return it->second;
}

long ExperimentConfig::integer(const std::string& key) const { return std::lround(parse_real(key, text(key))); }

double ExperimentConfig::real(const std::string& key) const { return parse_real(key, text(key)); }

bool ExperimentConfig::flag(const std::string& key) const {
  const auto& v = text(key);
  return v == "true" || v == "1";
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : split(text(key), ',')) out.push_back(parse_real(key, s));
  return out;
}

std::vector<std::pair<double, double>> ExperimentConfig::pairs(const std::string& key) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : split(text(key), ',')) {
    const auto ab = split(s, ':');
    out.emplace_back(parse_real(key, ab[0]), parse_real(key, ab[1]));
  }
  return out;
}

}  // namespace conelab
