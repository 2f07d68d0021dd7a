// omsim: steady states, trajectories, Floquet stability and parameter sweeps
// of the linearized three-mode optomechanical model.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omsim/commands.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw omsim::ValidationError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearized three-mode optomechanics: entanglement, purity and stability"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string optimum_path;
  std::string mode;
  std::vector<std::string> overrides;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "output file (default: standard output)");
  app.add_option("--mode", mode, "drift model")->check(CLI::IsMember({"full", "rwa"}));
  app.add_option("--set", overrides, "override a config key, key=value (repeatable)");

  auto* steady = app.add_subcommand("steady", "RWA steady state: E_N, purity, covariance (JSON)");
  auto* evolve = app.add_subcommand("evolve", "time evolution from thermal initial state (CSV)");
  auto* floquet = app.add_subcommand("floquet", "Floquet multipliers over one modulation period (JSON)");
  auto* sweep = app.add_subcommand("sweep", "coupling-ratio or detuning sweep (CSV + optimum JSON)");
  sweep->add_option("--optimum-out", optimum_path, "optimum record path (default: <out>.optimum.json)");
  for (auto* sub : {steady, evolve, floquet, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(omsim::ExitCode::InvalidConfig);
  }

  try {
    nlohmann::json object =
        config_path.empty() ? nlohmann::json::object() : omsim::parse_config_object(read_file(config_path));
    if (!mode.empty()) object["mode"] = mode;
    for (const auto& o : overrides) omsim::apply_override(object, o);
    const omsim::RunConfig cfg = omsim::config_from_json(object);

    omsim::CommandOutput result;
    if (*steady)
      result = omsim::cmd_steady(cfg);
    else if (*evolve)
      result = omsim::cmd_evolve(cfg);
    else if (*floquet)
      result = omsim::cmd_floquet(cfg);
    else
      result = omsim::cmd_sweep(cfg);

    if (!result.warning.empty()) std::cerr << "warning: " << result.warning << '\n';

    if (out_path.empty())
      std::cout << result.data;
    else
      write_file(out_path, result.data);

    if (result.optimum) {
      if (!optimum_path.empty())
        write_file(optimum_path, *result.optimum);
      else if (!out_path.empty())
        write_file(out_path + ".optimum.json", *result.optimum);
      else
        std::cout << '\n' << *result.optimum;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(omsim::exit_code_for(e));
  }
}
