#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bilayer/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"two-layer thin-film simulator"};
  std::string scenario_path;
  bool validate_only = false;
  app.add_option("scenario", scenario_path, "scenario config file")
      ->required();
  app.add_flag("--validate", validate_only,
               "parse and validate the scenario, then exit");
  CLI11_PARSE(app, argc, argv);

  try {
    const bilayer::Scenario scenario = bilayer::parse_scenario(scenario_path);
    if (validate_only) {
      std::cout << "ok\n";
      return 0;
    }
    return bilayer::run(scenario);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
