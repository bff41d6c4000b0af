// conelab: run one scenario into a store, or report over a store.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "conelab/config.hpp"
#include "conelab/errors.hpp"
#include "conelab/report.hpp"
#include "conelab/runner.hpp"
#include "conelab/thresholds.hpp"

namespace {

using namespace conelab;

struct ScenarioArgs {
  std::string config;
  std::map<std::string, std::string> flags;  // long option name -> value
  std::vector<std::string> sets;
  bool deterministic = false;
};

const std::vector<std::pair<std::string, std::string>> kOverrides = {
    {"n", "dimension"},
    {"N", "points per axis"},
    {"L", "box length"},
    {"delta", "collar width or comma-separated list"},
    {"lambda", "Bochner-Riesz order"},
    {"alpha", "weight exponent on |x'| (list for sphere-sweep)"},
    {"beta", "weight exponent on |x_n| (list for interval-trace)"},
    {"p", "Lebesgue exponent"},
    {"seed", "master seed"},
    {"out", "store directory"},
    {"threads", "worker threads"},
};

int run_one(const std::string& scenario, const ScenarioArgs& a) {
  std::map<std::string, std::string> file;
  if (!a.config.empty()) file = read_config_file(a.config);
  std::map<std::string, std::string> cli = a.flags;
  for (const auto& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("config: --set expects key=value, got '" + kv + "'");
    cli[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (a.deterministic) cli["deterministic"] = "true";
  const auto cfg = ExperimentConfig::resolve(scenario, file, cli);

  const auto rec = run(cfg);
  const auto path = append_to_store(cfg.text("out"), rec);
  for (const auto& r : rec.rows) {
    if (r.verdict == "info") continue;
    std::cout << (r.verdict == "pass" ? "PASS " : "FAIL ") << r.quantity << " = " << r.value;
    if (!r.threshold_id.empty()) std::cout << "  [" << r.threshold_id << " " << threshold(r.threshold_id).describe() << "]";
    if (!r.note.empty()) std::cout << "  (" << r.note << ")";
    std::cout << "\n";
  }
  std::cout << scenario << ": " << (rec.passed() ? "pass" : "fail") << ", record " << path << "\n";
  return rec.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conelab: cone multiplier experiments"};
  app.require_subcommand(1);

  std::vector<std::pair<std::string, ScenarioArgs>> args;
  args.reserve(scenario_names().size());
  for (const auto& name : scenario_names()) {
    args.emplace_back(name, ScenarioArgs{});
    auto& a = args.back().second;
    auto* sub = app.add_subcommand(name, "run scenario " + name);
    sub->add_option("--config", a.config, "key = value file")->check(CLI::ExistingFile);
    for (const auto& [flag, doc] : kOverrides)
      sub->add_option_function<std::string>(
          "--" + flag, [&a, flag = flag](const std::string& v) { a.flags[flag] = v; }, doc);
    sub->add_option("--set", a.sets, "any parameter as key=value (repeatable)");
    sub->add_flag("--deterministic", a.deterministic, "write runtime_ms = 0 for byte-identical output");
  }

  std::string store = "conelab_store";
  std::string only;
  auto* rep = app.add_subcommand("report", "aggregate verdicts of a run store");
  rep->add_option("--store", store, "store directory");
  rep->add_option("--scenario", only, "keep one scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (rep->parsed()) {
      const auto r = build_report(store, only.empty() ? std::nullopt : std::optional<std::string>(only));
      std::cout << render_table(r);
      std::cout << "summary: " << write_summary(r) << "\n";
      return r.exit_code();
    }
    for (const auto& [name, a] : args)
      if (app.got_subcommand(name)) return run_one(name, a);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
