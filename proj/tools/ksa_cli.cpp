// Copyright 2026 The ksapprox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ksa_cli: povm, errors, ks-check and experiment subcommands over the C API.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ksa/ksa.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

// Expansion columns are emitted only for angles at most this large.
constexpr double kSmallAngle = 0.1;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(ksa_status s) {
  switch (s) {
    case KSA_ERR_INVALID_ARGUMENT:
    case KSA_ERR_INDEX_OUT_OF_RANGE:
    case KSA_ERR_NON_UNIT_VECTOR:
    case KSA_ERR_LEFT_HANDED:
    case KSA_ERR_NOT_NORMALIZED:
    case KSA_ERR_PARSE:
    case KSA_ERR_IO:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

void check(ksa_status s) {
  if (s != KSA_OK) throw Failure{exit_code_for(s), std::string(ksa_status_string(s)) + ": " + ksa_last_error()};
}

/// Calls f(buf, cap, &needed) twice: once to size, once to fill.
template <typename F>
std::string fetch_string(F&& f) {
  std::size_t needed = 0;
  const ksa_status first = f(nullptr, 0, &needed);
  if (first != KSA_ERR_BUFFER_TOO_SMALL) check(first);
  std::string s(needed, '\0');
  check(f(s.data(), s.size(), &needed));
  s.resize(needed - 1);
  return s;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_list(const std::string& text, const std::string& name) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Failure{kExitUsage, name + ": empty list entry"};
    item = item.substr(b, e - b + 1);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size() || !std::isfinite(v)) {
      throw Failure{kExitUsage, name + ": not a number: '" + item + "'"};
    }
    out.push_back(v);
  }
  if (out.empty()) throw Failure{kExitUsage, name + ": empty list"};
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitUsage, "cannot open output file " + path};
  out << text;
  if (!out) throw Failure{kExitUsage, "cannot write output file " + path};
}

// Config files ---------------------------------------------------------------------

/// Reads flat `key = value` lines ('#' comments) into `--key value` arguments.
std::vector<std::string> config_args(const std::string& path, const CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitUsage, "cannot read config file " + path};
  std::vector<std::string> args;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw Failure{kExitUsage, where + ": expected key = value"};
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config" || sub.get_option_no_throw("--" + key) == nullptr) {
      throw Failure{kExitUsage, where + ": unknown key '" + key + "' for " + sub.get_name()};
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

/// Inserts config-file arguments right after the subcommand name so that later
/// command-line flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& argv, CLI::App& app) {
  if (argv.size() < 2) return argv;
  CLI::App* sub = nullptr;
  for (CLI::App* s : app.get_subcommands({})) {
    if (s->check_name(argv[1])) sub = s;
  }
  if (sub == nullptr) return argv;
  std::vector<std::string> rest;
  std::optional<std::string> config;
  for (std::size_t i = 2; i < argv.size(); ++i) {
    const std::string& a = argv[i];
    if (a == "--config") {
      if (i + 1 >= argv.size()) throw Failure{kExitUsage, "--config needs a path"};
      config = argv[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config = a.substr(9);
    } else {
      rest.push_back(a);
    }
  }
  std::vector<std::string> out{argv[0], argv[1]};
  if (config) {
    const std::vector<std::string> extra = config_args(*config, *sub);
    out.insert(out.end(), extra.begin(), extra.end());
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

// Subcommands ----------------------------------------------------------------------

const std::map<std::string, ksa_model> kModels{{"sequential", KSA_MODEL_SEQUENTIAL},
                                               {"contemporaneous", KSA_MODEL_CONTEMPORANEOUS}};
const std::map<std::string, ksa_alignment_mode> kModes{{"independent", KSA_MODE_INDEPENDENT},
                                                       {"correlated", KSA_MODE_CORRELATED}};

struct PovmArgs {
  double psi = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  ksa_model model = KSA_MODEL_SEQUENTIAL;
  std::string format = "json";
  std::string output;
};

struct ErrorsArgs {
  std::string angles = "0.03,0.01,0.003";
  std::string phis = "0,0.7853981633974483,1.5707963267948966,2";
  ksa_model model = KSA_MODEL_SEQUENTIAL;
  std::string output;
};

struct KsArgs {
  std::string set;
  std::string file;
  double tol = 1e-9;
  std::string output;
};

struct ExperimentArgs {
  ksa_experiment_config cfg{};
  std::string state = "1,1,1";
  std::string output;
  std::string summary;
};

using Handle = std::unique_ptr<ksa_povm, decltype(&ksa_povm_free)>;

int run_povm(const PovmArgs& a) {
  ksa_povm* raw = nullptr;
  check(ksa_povm_create(a.psi, a.theta, a.phi, a.model, &raw));
  const Handle p(raw, &ksa_povm_free);
  const bool small = std::abs(a.psi) <= kSmallAngle && std::abs(a.theta) <= kSmallAngle;

  if (a.format == "json") {
    write_output(a.output, fetch_string([&](char* b, size_t c, size_t* n) {
                   return ksa_povm_json(p.get(), small ? 1 : 0, b, c, n);
                 }));
    return kExitOk;
  }

  std::size_t size = 0;
  check(ksa_povm_size(p.get(), &size));
  std::ostringstream os;
  os << "outcome,row,col,re,im";
  if (small) os << ",approx_re,approx_im,deviation";
  os << '\n';
  for (std::size_t i = 0; i < size; ++i) {
    const std::string label =
        fetch_string([&](char* b, size_t c, size_t* n) { return ksa_povm_label(p.get(), i, b, c, n); });
    double e[18];
    double s[18];
    double dev = 0.0;
    check(ksa_povm_element(p.get(), i, e));
    if (small) {
      check(ksa_povm_second_order(p.get(), i, s));
      check(ksa_povm_deviation(p.get(), i, &dev));
    }
    for (int k = 0; k < 9; ++k) {
      os << label << ',' << k / 3 << ',' << k % 3 << ',' << format_double(e[2 * k]) << ','
         << format_double(e[2 * k + 1]);
      if (small) os << ',' << format_double(s[2 * k]) << ',' << format_double(s[2 * k + 1]) << ',' << format_double(dev);
      os << '\n';
    }
  }
  write_output(a.output, os.str());
  return kExitOk;
}

int run_errors(const ErrorsArgs& a) {
  const std::vector<double> angles = parse_list(a.angles, "--angles");
  const std::vector<double> phis = parse_list(a.phis, "--phis");
  write_output(a.output, fetch_string([&](char* b, size_t c, size_t* n) {
                 return ksa_errors_grid_csv(angles.data(), angles.size(), phis.data(), phis.size(), a.model, b, c, n);
               }));
  return kExitOk;
}

int run_ks_check(const KsArgs& a) {
  if (a.set.empty() == a.file.empty()) throw Failure{kExitUsage, "give exactly one of --set or --file"};
  ksa_rayset* raw = nullptr;
  if (!a.set.empty()) {
    if (a.set != "peres33") throw Failure{kExitUsage, "unknown ray set '" + a.set + "' (known: peres33)"};
    check(ksa_rayset_peres(&raw));
  } else {
    check(ksa_rayset_load(a.file.c_str(), &raw));
  }
  const std::unique_ptr<ksa_rayset, decltype(&ksa_rayset_free)> rs(raw, &ksa_rayset_free);
  ksa_ks_result* rr = nullptr;
  check(ksa_ks_solve(rs.get(), a.tol, &rr));
  const std::unique_ptr<ksa_ks_result, decltype(&ksa_ks_result_free)> res(rr, &ksa_ks_result_free);

  std::size_t n = 0;
  std::size_t pairs = 0;
  std::size_t triads = 0;
  std::uint64_t nodes = 0;
  std::uint64_t contradictions = 0;
  int sat = 0;
  check(ksa_rayset_size(rs.get(), &n));
  check(ksa_ks_result_structure(res.get(), &pairs, &triads));
  check(ksa_ks_result_stats(res.get(), &nodes, &contradictions));
  check(ksa_ks_result_satisfiable(res.get(), &sat));

  std::ostringstream os;
  os << (sat ? "SAT" : "UNSAT") << '\n';
  os << "rays " << n << "\npairs " << pairs << "\ntriads " << triads << '\n';
  os << "nodes " << nodes << "\ncontradictions " << contradictions << '\n';
  if (sat) {
    os << "label,x,y,z,value\n";
    for (std::size_t i = 0; i < n; ++i) {
      double v[3];
      int value = 0;
      check(ksa_rayset_ray(rs.get(), i, v));
      check(ksa_ks_result_value(res.get(), i, &value));
      const std::string label =
          fetch_string([&](char* b, size_t c, size_t* k) { return ksa_rayset_label(rs.get(), i, b, c, k); });
      os << label << ',' << format_double(v[0]) << ',' << format_double(v[1]) << ',' << format_double(v[2]) << ','
         << value << '\n';
    }
  }
  write_output(a.output, os.str());
  return kExitOk;
}

int run_experiment(ExperimentArgs a) {
  const std::vector<double> amps = parse_list(a.state, "--state");
  if (amps.size() != 3) throw Failure{kExitUsage, "--state needs three real amplitudes"};
  const double norm = std::sqrt(amps[0] * amps[0] + amps[1] * amps[1] + amps[2] * amps[2]);
  if (!(norm > 0.0)) throw Failure{kExitUsage, "--state must be nonzero"};
  for (std::size_t i = 0; i < 3; ++i) {
    a.cfg.state[2 * i] = amps[i] / norm;
    a.cfg.state[2 * i + 1] = 0.0;
  }
  ksa_experiment* raw = nullptr;
  check(ksa_experiment_run(&a.cfg, &raw));
  const std::unique_ptr<ksa_experiment, decltype(&ksa_experiment_free)> e(raw, &ksa_experiment_free);
  if (!a.output.empty()) {
    write_output(a.output, fetch_string([&](char* b, size_t c, size_t* n) {
                   return ksa_experiment_trials_csv(e.get(), b, c, n);
                 }));
  }
  write_output(a.summary, fetch_string([&](char* b, size_t c, size_t* n) {
                 return ksa_experiment_summary_json(e.get(), b, c, n);
               }));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate joint spin-1 measurements and Kochen-Specker colourability"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(ksa_version()));

  const auto add_config = [](CLI::App* sub) {
    // Handled before parsing; registered so it appears in --help.
    sub->add_option("--config", "Flat key = value file; command-line flags take precedence");
  };

  PovmArgs povm_args;
  CLI::App* povm = app.add_subcommand("povm", "Exact POVM of the triad measurement and its lowest-order expansion");
  povm->add_option("--psi", povm_args.psi, "Angle psi (radians)")->required();
  povm->add_option("--theta", povm_args.theta, "Angle theta (radians)")->required();
  povm->add_option("--phi", povm_args.phi, "Angle phi (radians)")->required();
  povm->add_option("--model", povm_args.model, "sequential | contemporaneous")
      ->transform(CLI::CheckedTransformer(kModels, CLI::ignore_case));
  povm->add_option("--format", povm_args.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  povm->add_option("--output", povm_args.output, "Output file (default stdout)");
  add_config(povm);

  ErrorsArgs errors_args;
  CLI::App* errors = app.add_subcommand("errors", "Retrodictive and predictive errors over an angle grid (CSV)");
  errors->add_option("--angles", errors_args.angles, "Comma-separated values used for psi = theta")
      ->capture_default_str();
  errors->add_option("--phis", errors_args.phis, "Comma-separated phi values")->capture_default_str();
  errors->add_option("--model", errors_args.model, "sequential | contemporaneous")
      ->transform(CLI::CheckedTransformer(kModels, CLI::ignore_case));
  errors->add_option("--output", errors_args.output, "Output file (default stdout)");
  add_config(errors);

  KsArgs ks_args;
  CLI::App* ks = app.add_subcommand("ks-check", "Kochen-Specker colourability of a ray set");
  ks->add_option("--set", ks_args.set, "Built-in ray set: peres33");
  ks->add_option("--file", ks_args.file, "Ray file: three numbers per line, '#' comments");
  ks->add_option("--tol", ks_args.tol, "Orthogonality tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
  ks->add_option("--output", ks_args.output, "Output file (default stdout)");
  add_config(ks);

  ExperimentArgs exp_args;
  ksa_experiment_config_init(&exp_args.cfg);
  CLI::App* exp = app.add_subcommand("experiment", "Hidden-valuation versus quantum illegal-outcome experiment");
  exp->add_option("--sigma", exp_args.cfg.sigma, "rms misalignment angle (radians)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  exp->add_option("--trials", exp_args.cfg.trials, "Number of trials")->check(CLI::PositiveNumber)->capture_default_str();
  exp->add_option("--samples", exp_args.cfg.samples, "Draws per axis for p(n)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  exp->add_option("--seed", exp_args.cfg.seed, "Random seed")->capture_default_str();
  exp->add_option("--mode", exp_args.cfg.mode, "independent | correlated")
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
  exp->add_option("--model", exp_args.cfg.model, "sequential | contemporaneous")
      ->transform(CLI::CheckedTransformer(kModels, CLI::ignore_case));
  exp->add_option("--removed-ray", exp_args.cfg.removed_ray, "Peres ray left out of the valuation")
      ->check(CLI::Range(0, 32))
      ->capture_default_str();
  exp->add_option("--state", exp_args.state, "Real amplitudes a,b,c of the state (normalized)")->capture_default_str();
  exp->add_option("--output", exp_args.output, "Per-trial CSV file");
  exp->add_option("--summary", exp_args.summary, "Summary JSON file (default stdout)");
  add_config(exp);

  CLI::App* active = nullptr;
  try {
    std::vector<std::string> args = expand_config(std::vector<std::string>(argv, argv + argc), app);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
      app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      for (CLI::App* s : {povm, errors, ks, exp}) {
        if (s->parsed()) active = s;
      }
      std::cerr << "error: " << e.what() << "\n\n" << (active ? active->help() : app.help());
      return kExitUsage;
    }
    if (povm->parsed()) return run_povm(povm_args);
    if (errors->parsed()) return run_errors(errors_args);
    if (ks->parsed()) return run_ks_check(ks_args);
    return run_experiment(exp_args);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
