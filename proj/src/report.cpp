#include "conelab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "conelab/errors.hpp"

namespace conelab {

namespace fs = std::filesystem;

Report build_report(const std::string& dir, const std::optional<std::string>& scenario) {
  Report rep;
  rep.store = dir;
  rep.scenario = scenario;
  const fs::path runs = fs::path(dir) / "runs";
  std::vector<fs::path> files;
  if (fs::is_directory(runs))
    for (const auto& e : fs::directory_iterator(runs))
      if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  for (const auto& p : files) {
    std::ifstream in(p);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw Error("report: cannot parse " + p.string() + ": " + e.what());
    }
    const std::string sc = j.value("scenario", "");
    if (scenario && sc != *scenario) continue;
    ++rep.runs;
    for (const auto& r : j["rows"]) {
      const std::string verdict = r.value("verdict", "info");
      const bool judged = r.contains("threshold");
      if (!judged && verdict != "fail") continue;
      ReportLine l;
      l.run = p.filename().string();
      l.scenario = sc;
      l.quantity = r.value("quantity", "");
      l.value = r["value"].is_number() ? r["value"].get<double>() : NAN;
      l.verdict = verdict;
      l.note = r.value("note", "");
      if (judged) {
        const auto& t = r["threshold"];
        l.threshold_id = t.value("id", "");
        l.criterion = t.value("criterion", 0);
        l.test = t.value("test", "");
      }
      if (verdict == "fail") ++rep.failures;
      rep.lines.push_back(std::move(l));
    }
  }
  if (rep.runs == 0)
    throw ArgumentError("report: no runs in " + dir + (scenario ? " for scenario " + *scenario : std::string()));
  return rep;
}

std::string render_table(const Report& r) {
  std::ostringstream s;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-4s %-20s %-16s %-28s %14s  %-22s %s\n", "crit", "threshold", "scenario",
                "quantity", "measured", "test", "verdict");
  s << buf;
  for (const auto& l : r.lines) {
    std::snprintf(buf, sizeof buf, "%-4s %-20s %-16s %-28s %14.6g  %-22s %s%s\n",
                  l.criterion > 0 ? std::to_string(l.criterion).c_str() : "-",
                  l.threshold_id.empty() ? "(fault)" : l.threshold_id.c_str(), l.scenario.c_str(),
                  l.quantity.c_str(), l.value, l.test.c_str(), l.verdict.c_str(),
                  l.verdict == "fail" ? "  <-- FAIL" : "");
    s << buf;
    if (l.verdict == "fail" && !l.note.empty()) s << "     note: " << l.note << "\n";
  }
  s << r.runs << " run(s), " << r.lines.size() << " judged row(s), " << r.failures << " failing\n";
  return s.str();
}

std::string write_summary(const Report& r) {
  nlohmann::json j;
  j["store"] = r.store;
  j["scenario"] = r.scenario ? nlohmann::json(*r.scenario) : nlohmann::json();
  j["runs"] = r.runs;
  j["failures"] = r.failures;
  j["passed"] = r.failures == 0;
  j["rows"] = nlohmann::json::array();
  for (const auto& l : r.lines)
    j["rows"].push_back({{"run", l.run},
                         {"scenario", l.scenario},
                         {"quantity", l.quantity},
                         {"value", std::isnan(l.value) ? nlohmann::json() : nlohmann::json(l.value)},
                         {"threshold", l.threshold_id},
                         {"criterion", l.criterion},
                         {"test", l.test},
                         {"verdict", l.verdict},
                         {"note", l.note}});
  const fs::path p = fs::path(r.store) / (r.scenario ? "summary-" + *r.scenario + ".json" : "summary.json");
  std::ofstream(p) << j.dump(2) << "\n";
  return p.string();
}

}  // namespace conelab
