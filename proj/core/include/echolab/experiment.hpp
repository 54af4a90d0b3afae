#pragma once

#include <map>
#include <string>
#include <vector>

#include "echolab/common.hpp"

namespace echolab {

inline constexpr const char* kToolVersion = "0.1.0";

using KeyValueMap = std::map<std::string, std::string>;

// A named, fully bound parameter set for one of the experiment kinds.
struct Recipe {
  std::string name;
  KeyValueMap settings;  // includes "kind" and "out"
};

// The 11 built-in recipes (fig1..fig7, peaktrack, identity, interference).
const std::vector<Recipe>& recipes();
const Recipe* find_recipe(const std::string& name);

// The valid experiment kinds, sorted.
std::vector<std::string> experiment_kinds();

// One-line-per-recipe description of every built-in recipe.
std::string list_recipes();

// Flat `key = value` UTF-8 config file; '#' starts a comment. Returns the
// parsed pairs; malformed lines throw ConfigError.
KeyValueMap parse_config_file(const std::string& path);

// Merged settings validated and resolved against per-kind defaults.
// `kind` must be one of: fidelity-curve, fidelity-vs-k, echo-matrix,
// peak-track, sk-cumulative, coherent-overlap, identity-check,
// interference-demo. Unknown keys for the kind are rejected (ConfigError
// names the key).
struct ExperimentConfig {
  std::string kind;
  KeyValueMap values;  // fully resolved, echoed into the CSV header

  static ExperimentConfig resolve(const KeyValueMap& settings);

  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  long get_long(const std::string& key) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
};

// CSV output: '#'-prefixed header (tool version + resolved config), then the
// column header line and data rows. Bodies are byte-identical for identical
// config + seed regardless of worker count.
struct ExperimentOutput {
  std::string header;  // every line starts with '#'
  std::string body;    // column header + rows (+ trailing summary sections)
  std::string text() const { return header + body; }
};

ExperimentOutput run_experiment(const ExperimentConfig& config);

// Default output filename for a config ("out" value).
std::string output_path(const ExperimentConfig& config);

}  // namespace echolab
