#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "rfso/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mixed RF/FSO relaying: outage, BEP and capacity sweeps"};
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON experiment config")->required();
  app.add_option("--override", overrides, "KEY=VALUE with dotted keys (repeatable)");
  auto* out_opt = app.add_option("--out", out, "CSV output path");
  auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
  CLI11_PARSE(app, argc, argv);

  if (const char* t = std::getenv("RFSO_THREADS")) {
    const int n = std::atoi(t);
    if (n > 0) omp_set_num_threads(n);
  }
  try {
    if (*out_opt) overrides.push_back("output=" + nlohmann::json(out).dump());
    if (*seed_opt) overrides.push_back("mc.seed=" + std::to_string(seed));
    const auto cfg = rfso::cli::load_config(config_path, overrides);
    const auto path = rfso::cli::run(cfg);
    std::cout << path << "\n";
  } catch (const rfso::cli::ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: run: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
