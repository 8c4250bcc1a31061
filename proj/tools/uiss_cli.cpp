// uiss: command-line front end.
//
//   uiss synth --seed 3 --out data
//   uiss fit   --x data/X.txt --edges data/edges.txt --out fit
//   uiss rank  --p fit/P.txt --q fit/Q.txt --edges data/edges.txt --out rank
//   uiss eval  --mode grid --x data/X.txt --labels data/labels.txt --p fit/P.txt --q fit/Q.txt
//   uiss embed --x data/X.txt --p fit/P.txt --dim 2
//
// Every config key is also a --flag. Values come from the flag, else from
// --config FILE, else the built-in default.

#include "uiss/commands.hpp"
#include "uiss/config.hpp"
#include "uiss/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised feature and instance co-selection on a feature network"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  const char* commands[][2] = {
      {"synth", "Generate a synthetic dataset with a planted subgraph"},
      {"fit", "Fit the feature selector P and instance selector Q"},
      {"rank", "Rank features and instances and extract selected subgraphs"},
      {"eval", "ROC/AUC and cross-validated accuracy of a selection"},
      {"embed", "Project the data through P and report its principal components"},
  };

  std::string config_path;
  std::map<std::string, std::string> overrides;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", config_path, "Config file of 'key = value' lines");
    for (const auto& k : uiss::config::keys()) {
      std::string help = k.help;
      if (!k.default_value.empty()) help += " [default: " + k.default_value + "]";
      sub->add_option_function<std::string>(
          "--" + k.name, [&overrides, name = k.name](const std::string& v) { overrides[name] = v; }, help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    uiss::config::RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& [key, value] : overrides) cfg.set(key, value);
    const auto written = uiss::cli::run_command(app.get_subcommands().front()->get_name(), cfg);
    for (const auto& path : written) std::cout << path << '\n';
  } catch (const uiss::Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
