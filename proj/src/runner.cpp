#include "conelab/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "conelab/errors.hpp"
#include "conelab/parallel.hpp"
#include "conelab/thresholds.hpp"

namespace conelab {

namespace fs = std::filesystem;

Row& judge(Row& r, const std::string& threshold_id) {
  const Threshold& t = threshold(threshold_id);
  r.threshold_id = t.id;
  r.verdict = t.passes(r.value) ? "pass" : "fail";
  return r;
}

bool RunRecord::passed() const {
  for (const auto& r : rows)
    if (r.verdict == "fail") return false;
  return true;
}

namespace {

const Threshold* runtime_threshold(const std::string& scenario) {
  for (const auto& t : threshold_table())
    if (t.scenario == scenario && t.quantity == "runtime_ms") return &t;
  return nullptr;
}

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cfg_num(const ExperimentConfig& c, const char* key) {
  if (!c.has(key)) return "";
  // lists keep only their first entry in the flat column
  const auto v = c.reals(key);
  return v.size() == 1 ? num(v.front()) : "";
}

std::string field(double v, const ExperimentConfig& c, const char* key) {
  return std::isnan(v) ? cfg_num(c, key) : num(v);
}

std::string ifield(int v, const ExperimentConfig& c, const char* key) {
  return v < 0 ? cfg_num(c, key) : std::to_string(v);
}

nlohmann::json row_json(const Row& r) {
  auto opt = [](double v) { return std::isnan(v) ? nlohmann::json() : nlohmann::json(v); };
  nlohmann::json j = {{"quantity", r.quantity}, {"value", opt(r.value)},   {"stderr", opt(r.stderr_)},
                      {"slope", opt(r.slope)},   {"r2", opt(r.r2)},         {"verdict", r.verdict}};
  for (auto [k, v] : {std::pair{"delta", r.delta}, {"alpha", r.alpha}, {"beta", r.beta}, {"lambda", r.lambda},
                      {"p", r.p}, {"L", r.L}})
    if (!std::isnan(v)) j[k] = v;
  if (r.n >= 0) j["n"] = r.n;
  if (r.N >= 0) j["N"] = r.N;
  if (!r.note.empty()) j["note"] = r.note;
  if (!r.threshold_id.empty()) {
    const Threshold& t = threshold(r.threshold_id);
    j["threshold"] = {{"id", t.id},       {"criterion", t.criterion}, {"test", t.describe()},
                      {"basis", t.basis}, {"table", threshold_table_version()}};
  }
  return j;
}

}  // namespace

RunRecord run(const ExperimentConfig& cfg) {
  set_thread_count(int(cfg.integer("threads")));
  RunRecord rec{cfg, {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  rec.rows = run_scenario(cfg);
  rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (const Threshold* t = runtime_threshold(cfg.scenario())) {
    Row r;
    r.quantity = "runtime_ms";
    r.value = rec.runtime_ms;
    judge(r, t->id);
    rec.rows.push_back(r);
  }
  return rec;
}

std::vector<std::string> csv_lines(const RunRecord& rec, bool deterministic) {
  const auto& c = rec.config;
  std::vector<std::string> out;
  const std::string runtime = deterministic ? "0" : num(std::round(rec.runtime_ms));
  for (const auto& r : rec.rows) {
    // the runtime row itself is not reproducible
    const double value = (deterministic && r.quantity == "runtime_ms") ? 0.0 : r.value;
    std::string s = c.scenario();
    s += "," + ifield(r.n, c, "n");
    s += "," + ifield(r.N, c, "N");
    s += "," + field(r.L, c, "L");
    s += "," + field(r.delta, c, "delta");
    s += "," + field(r.alpha, c, "alpha");
    s += "," + field(r.beta, c, "beta");
    s += "," + field(r.lambda, c, "lambda");
    s += "," + field(r.p, c, "p");
    s += "," + r.quantity;
    s += "," + num(value);
    s += "," + num(r.stderr_);
    s += "," + num(r.slope);
    s += "," + num(r.r2);
    s += "," + std::to_string(c.seed());
    s += "," + runtime;
    s += "," + r.verdict;
    out.push_back(std::move(s));
  }
  return out;
}

std::string append_to_store(const std::string& dir, const RunRecord& rec) {
  const bool det = rec.config.flag("deterministic");
  const fs::path root(dir), runs = root / "runs";
  fs::create_directories(runs);

  int seq = 1;
  for (const auto& e : fs::directory_iterator(runs))
    if (e.path().extension() == ".json") ++seq;
  char stem[64];
  std::snprintf(stem, sizeof stem, "%04d-%s", seq, rec.config.scenario().c_str());

  const auto lines = csv_lines(rec, det);
  const fs::path all = root / "results.csv";
  const bool fresh = !fs::exists(all);
  {
    std::ofstream out(all, std::ios::app);
    if (!out) throw Error("store: cannot write " + all.string());
    if (fresh) out << kCsvHeader << "\n";
    for (const auto& l : lines) out << l << "\n";
  }
  {
    std::ofstream out(runs / (std::string(stem) + ".csv"));
    out << kCsvHeader << "\n";
    for (const auto& l : lines) out << l << "\n";
  }

  nlohmann::json j;
  j["scenario"] = rec.config.scenario();
  j["seed"] = rec.config.seed();
  j["version"] = CONELAB_VERSION;
  j["threshold_table"] = threshold_table_version();
  j["runtime_ms"] = det ? 0.0 : rec.runtime_ms;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : rec.config.entries()) cfg[k] = v;
  j["config"] = cfg;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rec.rows) {
    auto rj = row_json(r);
    if (det && r.quantity == "runtime_ms") rj["value"] = 0.0;
    j["rows"].push_back(rj);
  }
  j["passed"] = rec.passed();
  const fs::path jp = runs / (std::string(stem) + ".json");
  std::ofstream(jp) << j.dump(2) << "\n";
  return jp.string();
}

}  // namespace conelab
