#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "echolab/experiment.hpp"

namespace {

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string closest_target(const std::string& name) {
  std::string best;
  int best_d = 1 << 30;
  auto consider = [&](const std::string& cand) {
    const int d = edit_distance(name, cand);
    if (d < best_d) {
      best_d = d;
      best = cand;
    }
  };
  for (const auto& r : echolab::recipes()) consider(r.name);
  for (const auto& k : echolab::experiment_kinds()) consider(k);
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"echo-lab: kicked-spin echo experiments -> CSV"};
  app.allow_extras(false);

  std::string target;
  std::string config_path;
  std::vector<std::string> set_pairs;
  std::string out_path;
  int workers = -1;
  long long seed = -1;
  bool have_workers = false, have_seed = false;

  app.add_option("target", target, "experiment kind or recipe name");
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--set", set_pairs, "override a single key (key=value); repeatable")
      ->take_all();
  app.add_option("--out", out_path, "output CSV path");
  app.add_option("--workers", workers, "worker thread count")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  if (target.empty()) {
    std::cout << echolab::list_recipes();
    std::cout << "kinds: ";
    bool first = true;
    for (const auto& k : echolab::experiment_kinds()) {
      if (!first) std::cout << ", ";
      std::cout << k;
      first = false;
    }
    std::cout << "\nusage: echo-lab <kind|recipe> [--config FILE] [--set key=value]..."
                 " [--out PATH] [--workers N] [--seed S]\n";
    return 0;
  }
  have_workers = app.count("--workers") > 0;
  have_seed = app.count("--seed") > 0;

  try {
    echolab::KeyValueMap merged;
    if (const echolab::Recipe* recipe = echolab::find_recipe(target)) {
      merged = recipe->settings;
    } else {
      const auto kinds = echolab::experiment_kinds();
      if (std::find(kinds.begin(), kinds.end(), target) == kinds.end()) {
        std::cerr << "config error: unknown experiment or recipe '" << target
                  << "'; did you mean '" << closest_target(target) << "'?\n";
        return 1;
      }
      merged["kind"] = target;
    }

    if (!config_path.empty()) {
      for (const auto& [key, value] : echolab::parse_config_file(config_path)) {
        merged[key] = value;
      }
    }
    for (const std::string& pair : set_pairs) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw echolab::ConfigError("--set expects key=value, got '" + pair + "'");
      }
      merged[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
    if (!out_path.empty()) merged["out"] = out_path;
    if (have_workers) merged["workers"] = std::to_string(workers);
    if (have_seed) merged["seed"] = std::to_string(seed);

    const auto config = echolab::ExperimentConfig::resolve(merged);
    const auto result = echolab::run_experiment(config);

    const std::string path = echolab::output_path(config);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw echolab::ConfigError("cannot open output file '" + path + "'");
    out << result.text();
    out.close();
    if (!out) throw echolab::ConfigError("failed writing output file '" + path + "'");
    std::cout << "wrote " << path << "\n";
    return 0;
  } catch (const echolab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const echolab::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
