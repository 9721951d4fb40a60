// Batch verification runner: verify <suite>, report --in <file>, list-checks.
//
// Exit code 0 when every record passes, 1 when one fails, 2 for usage or input errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "loopnet/checks.hpp"

namespace {

using namespace loopnet;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw checks::ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

checks::ScenarioConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
  checks::ScenarioConfig cfg;
  if (!path.empty()) {
    io::Json j;
    try {
      j = io::Json::parse(read_file(path));
    } catch (const io::Json::exception& e) {
      throw checks::ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    cfg = checks::ScenarioConfig::from_json(j);
  }
  if (seed) cfg.seed = *seed;
  return cfg;
}

int exit_code(const checks::Report& r) { return r.summary().failed == 0 ? kPass : kFail; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification runner for loop nets and their electromagnetic representation"};
  app.require_subcommand(1);

  std::string format = "json";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
  };

  auto* verify = app.add_subcommand("verify", "run a check suite and print its report");
  std::string suite;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  verify->add_option("suite", suite, "all, simplex, loopgroup, holonomy or emfield")->required();
  verify->add_option("--config", config_path, "scenario config (JSON)");
  verify->add_option("--seed", seed, "overrides the config seed");
  add_format(verify);

  auto* report = app.add_subcommand("report", "validate a saved JSON report and re-emit it");
  std::string in_path;
  report->add_option("--in", in_path, "report file")->required();
  add_format(report);

  auto* list = app.add_subcommand("list-checks", "list registered checks");
  add_format(list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const auto fmt = format == "text" ? checks::Format::Text : checks::Format::Json;

  try {
    if (*verify) {
      const auto cfg = load_config(config_path, seed);
      const auto r = checks::run(suite, cfg);
      std::cout << checks::emit(r, fmt);
      if (fmt == checks::Format::Json) std::cout << '\n';
      return exit_code(r);
    }
    if (*report) {
      const auto r = checks::parse_report(read_file(in_path));
      std::cout << checks::emit(r, fmt);
      if (fmt == checks::Format::Json) std::cout << '\n';
      return exit_code(r);
    }
    if (*list) {
      if (fmt == checks::Format::Json) {
        io::Json out = io::Json::array();
        for (const auto& c : checks::registry())
          out.push_back({{"name", c.name}, {"suite", c.suite}, {"description", c.description}});
        std::cout << out.dump() << '\n';
      } else {
        for (const auto& c : checks::registry()) std::cout << c.suite << '\t' << c.name << '\t' << c.description << '\n';
      }
      return kPass;
    }
  } catch (const checks::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const io::FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
