#include "echolab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "echolab/coherent.hpp"
#include "echolab/fidelity.hpp"
#include "echolab/interference.hpp"
#include "echolab/parallel.hpp"
#include "echolab/peaks.hpp"

namespace echolab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, delim)) parts.push_back(item);
  return parts;
}

const std::map<std::string, KeyValueMap>& kind_defaults() {
  static const std::map<std::string, KeyValueMap> defaults = {
      {"fidelity-curve",
       {{"n_atoms", "200"}, {"mu", "1"}, {"g_c", "0.2"}, {"K", "1"}, {"T", "1"},
        {"sigma", "0.1"}, {"k_set", "-100,-75,0,75,100"}, {"n_max", "2000"},
        {"seed", "1"}, {"workers", "1"}, {"out", "fidelity-curve.csv"}}},
      {"fidelity-vs-k",
       {{"n_atoms", "200"}, {"mu", "1"}, {"g_c", "0.2"}, {"T", "1"}, {"sigma", "0.01"},
        {"K_min", "0"}, {"K_max", "4"}, {"K_step", "0.01"}, {"t_fixed", "1000"},
        {"k_set", "-100,-50,0,50,100"}, {"seed", "1"}, {"workers", "1"},
        {"out", "fidelity-vs-k.csv"}}},
      {"echo-matrix",
       {{"n_atoms", "200"}, {"mu", "1"}, {"g_c", "0.17"}, {"K", "2"}, {"T", "1"},
        {"sigma", "0.5"}, {"l", "-100"}, {"k_min", "-100"}, {"k_max", "100"},
        {"n_max", "2000"}, {"seed", "1"}, {"workers", "1"}, {"out", "echo-matrix.csv"}}},
      {"peak-track",
       {{"n_atoms", "200"}, {"mu", "1"}, {"g_c", "0.17"}, {"K", "2"}, {"T", "1"},
        {"sigma", "0.5"}, {"l", "-100"}, {"k_min", "-100"}, {"k_max", "100"},
        {"n_max", "2000"}, {"threshold_frac", "0.1"}, {"min_gap", "20"},
        {"seed", "1"}, {"workers", "1"}, {"out", "peak-track.csv"}}},
      {"sk-cumulative",
       {{"n_atoms", "200"}, {"mu", "1"}, {"g_c", "0.17"}, {"K", "2"}, {"T", "1"},
        {"sigma", "0.5"}, {"l", "-100"}, {"t_set", "100,500,1000,1450"},
        {"seed", "1"}, {"workers", "1"}, {"out", "sk-cumulative.csv"}}},
      {"coherent-overlap",
       {{"n_atoms", "200"}, {"l_set", "100,99,98,-100,-99,-98"}, {"theta_steps", "721"},
        {"seed", "1"}, {"workers", "1"}, {"out", "coherent-overlap.csv"}}},
      {"identity-check",
       {{"n_atoms", "16"}, {"mu", "1"}, {"g_c", "0.2"}, {"K", "1"}, {"T", "1"},
        {"sigma", "0.3"}, {"k", "0"}, {"n_max", "50"}, {"seed", "7"}, {"workers", "1"},
        {"out", "identity-check.csv"}}},
      {"interference-demo",
       {{"n_atoms", "200"}, {"mu", "1"}, {"g_c", "0.2"}, {"K", "1"}, {"T", "1"},
        {"delta_K", "0.001"}, {"k", "100"}, {"n_periods", "150"}, {"noise_rel", "0.01"},
        {"packet_separation", "2"}, {"packet_width", "1"}, {"packet_wavevector", "16"},
        {"grid_points", "2048"}, {"seed", "42"}, {"workers", "1"},
        {"out", "interference-demo.csv"}}},
  };
  return defaults;
}

std::vector<Recipe> build_recipes() {
  auto with = [](const std::string& kind, KeyValueMap extra) {
    extra["kind"] = kind;
    return extra;
  };
  return {
      {"fig1", with("fidelity-curve",
                    {{"k_set", "-100,-75,0,75,100"}, {"n_max", "2000"}, {"out", "fig1.csv"}})},
      {"fig2", with("fidelity-curve",
                    {{"k_set", "100,99,98,97"}, {"n_max", "1000"}, {"out", "fig2.csv"}})},
      {"fig3a", with("fidelity-vs-k", {{"sigma", "0.01"}, {"out", "fig3a.csv"}})},
      {"fig3b", with("fidelity-vs-k", {{"sigma", "0.04"}, {"out", "fig3b.csv"}})},
      {"fig4", with("coherent-overlap", {{"out", "fig4.csv"}})},
      {"fig5", with("echo-matrix", {{"l", "-31"}, {"out", "fig5.csv"}})},
      {"fig6", with("echo-matrix", {{"l", "-100"}, {"out", "fig6.csv"}})},
      {"fig7", with("sk-cumulative", {{"out", "fig7.csv"}})},
      {"peaktrack", with("peak-track", {{"out", "peaktrack.csv"}})},
      {"identity", with("identity-check", {{"out", "identity.csv"}})},
      {"interference", with("interference-demo", {{"out", "interference.csv"}})},
  };
}

}  // namespace

const std::vector<Recipe>& recipes() {
  static const std::vector<Recipe> list = build_recipes();
  return list;
}

const Recipe* find_recipe(const std::string& name) {
  for (const Recipe& r : recipes()) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::vector<std::string> experiment_kinds() {
  std::vector<std::string> kinds;
  for (const auto& [kind, unused] : kind_defaults()) kinds.push_back(kind);
  return kinds;
}

std::string list_recipes() {
  std::ostringstream os;
  os << "built-in recipes:\n";
  for (const Recipe& r : recipes()) {
    const ExperimentConfig resolved = ExperimentConfig::resolve(r.settings);
    os << "  " << r.name << ": " << resolved.kind << " (";
    bool first = true;
    for (const auto& [key, value] : resolved.values) {
      if (!first) os << ", ";
      os << key << "=" << value;
      first = false;
    }
    os << ")\n";
  }
  return os.str();
}

KeyValueMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  KeyValueMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

ExperimentConfig ExperimentConfig::resolve(const KeyValueMap& settings) {
  const auto kind_it = settings.find("kind");
  if (kind_it == settings.end()) throw ConfigError("missing key 'kind'");
  const auto& defaults = kind_defaults();
  const auto def_it = defaults.find(kind_it->second);
  if (def_it == defaults.end()) {
    throw ConfigError("unknown experiment kind '" + kind_it->second + "'");
  }
  ExperimentConfig config;
  config.kind = kind_it->second;
  config.values = def_it->second;
  for (const auto& [key, value] : settings) {
    if (key == "kind") continue;
    if (config.values.find(key) == config.values.end()) {
      throw ConfigError("unknown key '" + key + "' for kind '" + config.kind + "'");
    }
    config.values[key] = value;
  }
  return config;
}

namespace {

double parse_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': cannot parse '" + raw + "' as a number");
  }
  return v;
}

long parse_long(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("key '" + key + "': cannot parse '" + raw + "' as an integer");
  }
  return v;
}

}  // namespace

const std::string& ExperimentConfig::get_string(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

double ExperimentConfig::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

int ExperimentConfig::get_int(const std::string& key) const {
  return static_cast<int>(parse_long(key, get_string(key)));
}

long ExperimentConfig::get_long(const std::string& key) const {
  return parse_long(key, get_string(key));
}

std::vector<double> ExperimentConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& part : split(get_string(key), ',')) {
    out.push_back(parse_double(key, part));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<int> ExperimentConfig::get_int_list(const std::string& key) const {
  std::vector<int> out;
  for (const std::string& part : split(get_string(key), ',')) {
    out.push_back(static_cast<int>(parse_long(key, part)));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::string output_path(const ExperimentConfig& config) { return config.get_string("out"); }

namespace {

std::string make_header(const ExperimentConfig& config) {
  std::ostringstream os;
  os << "# echo-lab " << kToolVersion << "\n";
  os << "# kind = " << config.kind << "\n";
  for (const auto& [key, value] : config.values) {
    os << "# " << key << " = " << value << "\n";
  }
  return os.str();
}

void check_probability_column(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0 + 1e-10)) {
    throw NumericalError(what + " value " + fmt_g(p) + " outside [0, 1]");
  }
}

ModelParams params_from(const ExperimentConfig& c) {
  ModelParams p;
  p.mu = c.get_double("mu");
  p.g_c = c.get_double("g_c");
  p.T = c.get_double("T");
  if (c.values.count("K")) p.K = c.get_double("K");
  if (c.values.count("sigma")) p.sigma = c.get_double("sigma");
  p.validate();
  return p;
}

SpinBasis basis_from(const ExperimentConfig& c) { return SpinBasis(c.get_int("n_atoms")); }

std::string run_fidelity_curve(const ExperimentConfig& c) {
  const SpinBasis basis = basis_from(c);
  const ModelParams params = params_from(c);
  const std::vector<double> k_set = c.get_list("k_set");
  const int n_max = c.get_int("n_max");
  if (n_max < 0) throw ConfigError("key 'n_max': must be >= 0");
  const int workers = c.get_int("workers");
  for (double k : k_set) basis.row_of(k);

  std::vector<std::string> chunks(k_set.size());
  parallel_for(static_cast<int>(k_set.size()), workers, [&](int j) {
    const EchoCurve curve = fidelity_curve(basis, params, k_set[j], n_max);
    std::string rows;
    rows.reserve(curve.samples.size() * 24);
    for (const EchoSample& s : curve.samples) {
      check_probability_column(s.probability, "M");
      rows += std::to_string(s.n);
      rows += ',';
      rows += fmt_g(k_set[j]);
      rows += ',';
      rows += fmt_g(s.probability);
      rows += '\n';
    }
    chunks[j] = std::move(rows);
  });

  std::string body = "n,k,M\n";
  for (const std::string& chunk : chunks) body += chunk;
  return body;
}

std::string run_fidelity_vs_k(const ExperimentConfig& c) {
  const SpinBasis basis = basis_from(c);
  ModelParams params = params_from(c);
  const double k_lo = c.get_double("K_min");
  const double k_hi = c.get_double("K_max");
  const double step = c.get_double("K_step");
  if (!(step > 0.0)) throw ConfigError("key 'K_step': must be > 0");
  if (k_hi < k_lo) throw ConfigError("key 'K_max': must be >= K_min");
  const int t_fixed = c.get_int("t_fixed");
  if (t_fixed < 0) throw ConfigError("key 't_fixed': must be >= 0");
  std::vector<double> K_values;
  for (int i = 0;; ++i) {
    const double K = k_lo + i * step;
    if (K > k_hi + 1e-9 * std::max(1.0, std::abs(k_hi))) break;
    K_values.push_back(K);
  }
  const std::vector<double> k_set = c.get_list("k_set");
  const CouplingSweep sweep = fidelity_at_time_vs_K(basis, params, K_values, k_set,
                                                    t_fixed, c.get_int("workers"));

  std::string body = "K,k,M\n";
  for (size_t i = 0; i < K_values.size(); ++i) {
    for (size_t j = 0; j < k_set.size(); ++j) {
      const double p = sweep.probability(static_cast<int>(i), static_cast<int>(j));
      check_probability_column(p, "M");
      body += fmt_g(K_values[i]);
      body += ',';
      body += fmt_g(k_set[j]);
      body += ',';
      body += fmt_g(p);
      body += '\n';
    }
  }
  return body;
}

std::string run_echo_matrix(const ExperimentConfig& c) {
  const SpinBasis basis = basis_from(c);
  const ModelParams params = params_from(c);
  const double l = c.get_double("l");
  const int n_max = c.get_int("n_max");
  if (n_max < 0) throw ConfigError("key 'n_max': must be >= 0");
  const EchoMatrix em = echo_matrix(basis, params, l, c.get_double("k_min"),
                                    c.get_double("k_max"), n_max, c.get_int("workers"));

  std::string body = "n,k,l,Mlk\n";
  body.reserve(static_cast<size_t>(em.probability.size()) * 28);
  const std::string l_str = fmt_g(l);
  for (size_t j = 0; j < em.k_values.size(); ++j) {
    const std::string k_str = fmt_g(em.k_values[j]);
    for (int n = 0; n <= em.n_max(); ++n) {
      const double p = em.probability(n, static_cast<int>(j));
      check_probability_column(p, "Mlk");
      body += std::to_string(n);
      body += ',';
      body += k_str;
      body += ',';
      body += l_str;
      body += ',';
      body += fmt_g(p);
      body += '\n';
    }
  }
  return body;
}

std::string run_peak_track(const ExperimentConfig& c) {
  const SpinBasis basis = basis_from(c);
  const ModelParams params = params_from(c);
  const int n_max = c.get_int("n_max");
  if (n_max < 0) throw ConfigError("key 'n_max': must be >= 0");
  const double threshold_frac = c.get_double("threshold_frac");
  const int min_gap = c.get_int("min_gap");
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0)) {
    throw ConfigError("key 'threshold_frac': must lie in (0, 1)");
  }
  if (min_gap < 0) throw ConfigError("key 'min_gap': must be >= 0");
  const EchoMatrix em = echo_matrix(basis, params, c.get_double("l"), c.get_double("k_min"),
                                    c.get_double("k_max"), n_max, c.get_int("workers"));
  const PeakTrack track = track_peak_centers(em, threshold_frac, min_gap);

  std::string body = "k,peak_index,center_n,height\n";
  for (size_t j = 0; j < track.k_values.size(); ++j) {
    for (size_t p = 0; p < track.peaks[j].size(); ++p) {
      const PeakRecord& peak = track.peaks[j][p];
      body += fmt_g(track.k_values[j]);
      body += ',';
      body += std::to_string(p + 1);  // 1 = first peak
      body += ',';
      body += std::to_string(peak.center_n);
      body += ',';
      body += fmt_g(peak.height);
      body += '\n';
    }
  }
  body += "# merge_k = ";
  body += track.merge_k ? fmt_g(*track.merge_k) : "none";
  body += '\n';
  return body;
}

std::string run_sk_cumulative(const ExperimentConfig& c) {
  const SpinBasis basis = basis_from(c);
  const ModelParams params = params_from(c);
  const std::vector<int> t_set = c.get_int_list("t_set");
  for (int t : t_set) {
    if (t < 0) throw ConfigError("key 't_set': entries must be >= 0");
  }
  const int n_max = *std::max_element(t_set.begin(), t_set.end());
  const double L = basis.spin();
  const EchoMatrix em =
      echo_matrix(basis, params, c.get_double("l"), -L, L, n_max, c.get_int("workers"));

  std::string body = "k,t,S\n";
  for (int t : t_set) {
    const std::vector<double> s = cumulative_sk(em, t);
    for (size_t j = 0; j < s.size(); ++j) {
      check_probability_column(s[j], "S");
      body += fmt_g(em.k_values[j]);
      body += ',';
      body += std::to_string(t);
      body += ',';
      body += fmt_g(s[j]);
      body += '\n';
    }
  }
  return body;
}

std::string run_coherent_overlap(const ExperimentConfig& c) {
  const SpinBasis basis = basis_from(c);
  const std::vector<double> l_set = c.get_list("l_set");
  for (double l : l_set) basis.row_of(l);
  const int steps = c.get_int("theta_steps");
  if (steps < 2) throw ConfigError("key 'theta_steps': must be >= 2");

  std::string body = "theta,l,overlap\n";
  for (int i = 0; i < steps; ++i) {
    const double theta = kPi * i / (steps - 1);
    const SphereAngle angle(std::min(theta, kPi), 0.0);
    for (double l : l_set) {
      const double p = overlap_probability(basis, angle, l);
      check_probability_column(p, "overlap");
      body += fmt_g(theta);
      body += ',';
      body += fmt_g(l);
      body += ',';
      body += fmt_g(p);
      body += '\n';
    }
  }
  return body;
}

std::string run_identity_check(const ExperimentConfig& c) {
  const SpinBasis basis = basis_from(c);
  const ModelParams params = params_from(c);
  const double k = c.get_double("k");
  basis.row_of(k);
  const int n_max = c.get_int("n_max");
  if (n_max < 0) throw ConfigError("key 'n_max': must be >= 0");
  const HermitianOperator a = random_hermitian(basis, static_cast<uint64_t>(c.get_long("seed")));

  std::string body = "n,lhs,rhs,absdiff\n";
  for (int n = 1; n <= n_max; ++n) {
    const IdentityCheck res = observable_difference_check(basis, params, a, k, n);
    body += std::to_string(n);
    body += ',';
    body += fmt_g(res.lhs);
    body += ',';
    body += fmt_g(res.rhs);
    body += ',';
    body += fmt_g(res.abs_diff);
    body += '\n';
  }
  return body;
}

std::string run_interference_demo(const ExperimentConfig& c) {
  const SpinBasis basis = basis_from(c);
  ModelParams params = params_from(c);
  const double delta_K = c.get_double("delta_K");
  const int n_periods = c.get_int("n_periods");
  if (n_periods < 0) throw ConfigError("key 'n_periods': must be >= 0");
  const double noise_rel = c.get_double("noise_rel");
  if (noise_rel < 0.0) throw ConfigError("key 'noise_rel': must be >= 0");
  const double sep = c.get_double("packet_separation");
  const double width = c.get_double("packet_width");
  const double wavevector = c.get_double("packet_wavevector");
  const int grid_points = c.get_int("grid_points");
  if (grid_points < 16) throw ConfigError("key 'grid_points': must be >= 16");
  const uint64_t seed = static_cast<uint64_t>(c.get_long("seed"));

  const Complex f_true =
      two_well_fidelity(basis, params, delta_K, fock_state(basis, c.get_double("k")),
                        n_periods);

  const SampleGrid grid{-10.0 * width, 10.0 * width, grid_points};
  const WavePacket chi1(grid, -0.5 * sep, width, 0.5 * wavevector);
  const WavePacket chi2(grid, 0.5 * sep, width, -0.5 * wavevector);
  const InterferencePattern pattern = synthesize_pattern(chi1, chi2, f_true, noise_rel, seed);
  const FringeFit fit = extract_fidelity(pattern, chi1, chi2);

  std::string body = "x,P\n";
  for (int i = 0; i < grid.n_points; ++i) {
    body += fmt_g(grid.x(i));
    body += ',';
    body += fmt_g(pattern.intensity(i));
    body += '\n';
  }
  body += "f_mag_true,f_mag_est,f_phase_true,f_phase_est\n";
  body += fmt_g(std::abs(f_true));
  body += ',';
  body += fmt_g(fit.magnitude);
  body += ',';
  body += fmt_g(std::arg(f_true));
  body += ',';
  body += fmt_g(fit.phase);
  body += '\n';
  return body;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  ExperimentOutput out;
  out.header = make_header(config);
  if (config.kind == "fidelity-curve") {
    out.body = run_fidelity_curve(config);
  } else if (config.kind == "fidelity-vs-k") {
    out.body = run_fidelity_vs_k(config);
  } else if (config.kind == "echo-matrix") {
    out.body = run_echo_matrix(config);
  } else if (config.kind == "peak-track") {
    out.body = run_peak_track(config);
  } else if (config.kind == "sk-cumulative") {
    out.body = run_sk_cumulative(config);
  } else if (config.kind == "coherent-overlap") {
    out.body = run_coherent_overlap(config);
  } else if (config.kind == "identity-check") {
    out.body = run_identity_check(config);
  } else if (config.kind == "interference-demo") {
    out.body = run_interference_demo(config);
  } else {
    throw ConfigError("unknown experiment kind '" + config.kind + "'");
  }
  return out;
}

}  // namespace echolab
