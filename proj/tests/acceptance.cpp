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

// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ksa/contextsim.hpp"
#include "ksa/errmetrics.hpp"
#include "ksa/kscolor.hpp"
#include "ksa/measmodel.hpp"
#include "ksa/spin1.hpp"
#include "test_support.hpp"

using namespace ksa;
using namespace ksa::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Accumulates a verdict and the first few failure notes.
struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (notes.size() < 4) notes.push_back(what);
  }
  Outcome finish(const std::string& summary) const {
    std::string d = summary;
    for (const auto& n : notes) d += "; " + n;
    return {pass, d};
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

const std::vector<double> kPhis{0.0, std::numbers::pi / 4, std::numbers::pi / 2, 2.0};

double max_deviation(double eps, double phi) {
  const Povm p = povm(sequential_unitary(triad_from_angles(eps, eps, phi)));
  const std::vector<ComplexMatrix> approx = second_order_povm(eps, eps, phi);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, operator_norm(p.elements[i] - approx[i]));
  return worst;
}

ErrorPair povm_errors(const Triad& t, std::size_t r, JointModel kind = JointModel::kSequential) {
  const Povm p = povm(joint_measurement(t, kind));
  const ComplexMatrix a = squared_projection(t[r - 1]);
  return {retrodictive_error_povm(p, r, a), predictive_error_povm(p, r, a)};
}

/// Right-handed triad whose axes are perturbed independently by up to `spread` radians.
Triad skewed_triad(double spread, Rng& rng) {
  const Triad base = rotated_canonical_triad(rng);
  std::normal_distribution<double> g(0.0, spread / 2.0);
  std::array<UnitVector3, 3> axes{base[0], base[1], base[2]};
  for (auto& e : axes) e = UnitVector3::normalize({e.x() + g(rng), e.y() + g(rng), e.z() + g(rng)});
  return Triad::any_handedness(axes[0], axes[1], axes[2]);
}

Outcome pvm_reduction() {
  Verdict v;
  const std::array<std::pair<const char*, std::size_t>, 3> legal{{{"110", 2}, {"101", 1}, {"011", 0}}};
  for (double phi : kPhis) {
    const Triad t = triad_from_angles(0.0, 0.0, phi);
    const Povm p = povm(sequential_unitary(t));
    for (std::size_t i = 0; i < p.size(); ++i) {
      ComplexMatrix expect(3);
      for (const auto& [label, axis] : legal) {
        if (p.label(i) == label) expect = ComplexMatrix::identity(3) - reference_projection(t[axis].vec());
      }
      // 1 - P_r with P_r = (e_r.L)^2 = 1 - e_r e_r^T.
      const double d = max_abs_diff(p.elements[i], expect);
      v.require(d <= 1e-12, "outcome " + p.label(i) + " differs by " + fmt(d));
    }
  }
  return v.finish("4 values of phi, 8 outcomes each");
}

Outcome second_order() {
  Verdict v;
  double worst01 = 0.0;
  double min_ratio = 1e300;
  for (double phi : kPhis) {
    const double d01 = max_deviation(0.01, phi);
    const double d003 = max_deviation(0.003, phi);
    worst01 = std::max(worst01, d01);
    min_ratio = std::min(min_ratio, d01 / d003);
    v.require(d01 <= 1e-4, "phi " + fmt(phi) + ": deviation " + fmt(d01));
    v.require(d01 / d003 >= 10.0, "phi " + fmt(phi) + ": shrink " + fmt(d01 / d003));
  }
  return v.finish("max deviation at 0.01 = " + fmt(worst01) + ", min shrink 0.01->0.003 = " + fmt(min_ratio));
}

Outcome exact_zeros() {
  Verdict v;
  Rng rng(301);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Triad t = random_small_triad(0.05, rng);
    const double ei1 = povm_errors(t, 1).delta_ei;
    const double ef3 = povm_errors(t, 3).delta_ef;
    worst = std::max({worst, ei1, ef3});
    v.require(ei1 <= 1e-12 && ef3 <= 1e-12, "triad " + std::to_string(k) + ": " + fmt(ei1) + ", " + fmt(ef3));
  }
  return v.finish("20 triads, largest = " + fmt(worst));
}

Outcome closed_form() {
  Verdict v;
  std::ostringstream ranges;
  for (const auto& [eps, lo, hi] : {std::tuple{0.01, 0.9, 1.1}, std::tuple{0.003, 0.97, 1.03}}) {
    std::array<double, 4> rmin{1e300, 1e300, 1e300, 1e300};
    std::array<double, 4> rmax{0.0, 0.0, 0.0, 0.0};
    for (double phi : kPhis) {
      const Triad t = triad_from_angles(eps, eps, phi);
      const ErrorPair e1 = povm_errors(t, 1);
      const ErrorPair e2 = povm_errors(t, 2);
      const ErrorPair e3 = povm_errors(t, 3);
      std::vector<std::pair<std::size_t, double>> ratios{
          {0, e2.delta_ei / eps}, {1, e3.delta_ei / eps},
          {2, e1.delta_ef / std::sqrt(2.0 * (eps * eps + eps * eps * std::cos(phi) * std::cos(phi)))}};
      const double denom = std::abs(std::sqrt(2.0) * eps * std::sin(phi));
      if (denom > 1e-15) ratios.push_back({3, e2.delta_ef / denom});
      for (const auto& [k, ratio] : ratios) {
        rmin[k] = std::min(rmin[k], ratio);
        rmax[k] = std::max(rmax[k], ratio);
        static const char* names[] = {"ei P2/|psi|", "ei P3/|theta|", "ef P1", "ef P2"};
        v.require(ratio >= lo && ratio <= hi, std::string(names[k]) + " = " + fmt(ratio) + " at " + fmt(eps));
      }
    }
    ranges << " at " << eps << ": [";
    for (std::size_t k = 0; k < 4; ++k) ranges << (k ? ", " : "") << fmt(rmin[k]) << ".." << fmt(rmax[k]);
    ranges << "]";
  }
  return v.finish("ratios" + ranges.str());
}

Outcome oracle_equivalence() {
  Verdict v;
  Rng rng(501);
  double worst = 0.0;
  int models = 0;
  for (int k = 0; k < 30; ++k, ++models) {
    const Triad t = k % 2 == 0 ? skewed_triad(0.3, rng) : random_small_triad(0.3, rng);
    const JointModel kind = k % 3 == 0 ? JointModel::kContemporaneous : JointModel::kSequential;
    const MeasurementModel m = joint_measurement(t, kind);
    const Povm p = povm(m);
    for (std::size_t r = 1; r <= 3; ++r) {
      const ComplexMatrix a = squared_projection(t[r - 1]);
      const ErrorPair h = errors_heisenberg(m, a, m.pointers.observable(r));
      const double d = std::max(std::abs(h.delta_ei - retrodictive_error_povm(p, r, a)),
                                std::abs(h.delta_ef - predictive_error_povm(p, r, a)));
      worst = std::max(worst, d);
      v.require(d <= 1e-9, "triad model " + std::to_string(k) + " r=" + std::to_string(r) + ": " + fmt(d));
    }
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed, ++models) {
    const ComplexMatrix h = random_hermitian(3, rng);
    const MeasurementModel m = perturbed_single_measurement(h, 0.1, seed);
    const Povm p = povm(m);
    const ErrorPair e = errors_heisenberg(m, h, m.pointers.observable(1));
    const double d = std::max(std::abs(e.delta_ei - retrodictive_error_povm(p, 1, h)),
                              std::abs(e.delta_ef - predictive_error_povm(p, 1, h)));
    worst = std::max(worst, d);
    v.require(d <= 1e-9, "perturbed model " + std::to_string(seed) + ": " + fmt(d));
  }
  return v.finish(std::to_string(models) + " models, largest difference = " + fmt(worst));
}

Outcome completeness_positivity() {
  Verdict v;
  Rng rng(601);
  double worst_sum = 0.0;
  double worst_neg = 0.0;
  double max_defect = 0.0;
  for (int k = 0; k < 100;) {
    const Triad t = skewed_triad(0.35, rng);
    const double defect = orthonormality_defect(t);
    if (defect > 0.3) continue;
    ++k;
    max_defect = std::max(max_defect, defect);
    for (JointModel kind : {JointModel::kSequential, JointModel::kContemporaneous}) {
      const Povm p = povm(joint_measurement(t, kind));
      ComplexMatrix sum(3);
      for (const auto& e : p.elements) {
        sum += e;
        const double low = std::min(0.0, hermitian_eig(e).values.front());
        worst_neg = std::max(worst_neg, -low);
      }
      worst_sum = std::max(worst_sum, max_abs_diff(sum, ComplexMatrix::identity(3)));
    }
  }
  v.require(worst_sum <= 1e-10, "completeness " + fmt(worst_sum));
  v.require(worst_neg <= 1e-10, "negative eigenvalue " + fmt(-worst_neg));
  return v.finish("100 triads (defect up to " + fmt(max_defect) + "), completeness " + fmt(worst_sum) +
                  ", most negative eigenvalue " + fmt(-worst_neg));
}

Outcome ks_solver() {
  Verdict v;
  const RaySet peres = peres_rays();
  const auto start = std::chrono::steady_clock::now();
  const ColoringResult res = find_legal_coloring(ortho_structure(peres), peres.size());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(!res.satisfiable(), "Peres set reported colourable");
  v.require(secs < 10.0, "Peres search took " + fmt(secs) + " s");

  Rng rng(701);
  std::vector<std::size_t> idx(peres.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  int checked = 0;
  int sat = 0;
  for (int trial = 0; trial < 300; ++trial, ++checked) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 13);
    std::vector<UnitVector3> rays;
    for (std::size_t i = 0; i < n; ++i) rays.push_back(peres[idx[i]]);
    const RaySet rs(rays);
    const OrthoStructure os = ortho_structure(rs);
    const ColoringResult r = find_legal_coloring(os, rs.size());
    v.require(r.satisfiable() == brute_force_colourable(os, rs.size()), "verdict mismatch on subset " + std::to_string(trial));
    if (r.satisfiable()) {
      ++sat;
      v.require(check_coloring(os, *r.coloring).empty(), "invalid colouring on subset " + std::to_string(trial));
    }
  }
  // Abstract constraint structures on up to 14 nodes, dense enough to be unsatisfiable at times.
  int abstract_unsat = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial % 11);
    std::uniform_int_distribution<std::size_t> node(0, n - 1);
    OrthoStructure os;
    os.n_rays = n;
    std::set<std::array<std::size_t, 2>> pairs;
    for (int k = 0; k < 2 + trial % 9; ++k) {
      std::array<std::size_t, 3> t{node(rng), node(rng), node(rng)};
      std::sort(t.begin(), t.end());
      if (t[0] == t[1] || t[1] == t[2]) continue;
      os.triads.push_back(t);
      pairs.insert({t[0], t[1]});
      pairs.insert({t[0], t[2]});
      pairs.insert({t[1], t[2]});
    }
    for (int k = 0; k < trial % 7; ++k) {
      std::array<std::size_t, 2> q{node(rng), node(rng)};
      std::sort(q.begin(), q.end());
      if (q[0] != q[1]) pairs.insert(q);
    }
    os.pairs.assign(pairs.begin(), pairs.end());
    const ColoringResult r = find_legal_coloring(os, n);
    v.require(r.satisfiable() == brute_force_colourable(os, n), "verdict mismatch on structure " + std::to_string(trial));
    if (r.satisfiable()) {
      v.require(check_coloring(os, *r.coloring).empty(), "invalid colouring on structure " + std::to_string(trial));
    } else {
      ++abstract_unsat;
    }
  }
  // Colourable inputs with structure: the Peres set without each single ray.
  int reduced_sat = 0;
  for (std::size_t i = 0; i < peres.size(); ++i) {
    const RaySet rs = remove_ray(peres, i);
    const OrthoStructure os = ortho_structure(rs);
    const ColoringResult r = find_legal_coloring(os, rs.size());
    if (r.satisfiable()) {
      ++reduced_sat;
      v.require(check_coloring(os, *r.coloring).empty(), "invalid colouring without ray " + std::to_string(i));
    }
  }
  return v.finish("Peres UNSAT in " + fmt(secs) + " s (" + std::to_string(res.stats.nodes) + " nodes); " +
                  std::to_string(checked) + " random subsets match enumeration (" + std::to_string(sat) +
                  " colourable); 400 abstract structures match (" +
                  std::to_string(abstract_unsat) + " uncolourable); " + std::to_string(reduced_sat) + "/33 single-ray removals colourable and verified");
}

Ket uniform_state() {
  const double a = 1.0 / std::sqrt(3.0);
  return Ket{a, a, a};
}

Outcome contextuality_gap() {
  Verdict v;
  // Enumeration check of the implication behind the hidden-side bound.
  Rng rng(801);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int k = 0; k < 2000; ++k) {
    for (std::size_t pattern : illegal_outcomes()) {
      std::array<double, 3> q{};
      for (std::size_t r = 0; r < 3; ++r) {
        const double m = u(rng);
        q[r] = ((pattern >> (2 - r)) & 1U) ? m : 1.0 - m;
      }
      v.require(illegal_probability(q) >= 0.5 - 1e-12, "enumeration bound fails for pattern " + std::to_string(pattern));
    }
  }

  const AlignmentDistribution d{AlignmentMode::kIndependent, 0.01, 0};
  const ValuationStrategy f = default_valuation();
  ExperimentOptions opt;
  opt.trials = 10000;
  const auto triad = find_illegal_triad(f, d, peres_rays(), opt.samples);
  if (!triad) return {false, "no illegal triad found"};
  const ExperimentReport rep = contextuality_experiment(triad->triad, f, d, uniform_state(), opt);
  const bool matched = rep.all_match_at_least(0.5);
  v.require(matched, "a per-axis match probability is below 0.5");
  if (matched) v.require(rep.hidden_illegal_exact >= 0.5, "hidden illegal " + fmt(rep.hidden_illegal_exact));
  v.require(rep.quantum_illegal_mean <= 1e-3, "quantum illegal " + fmt(rep.quantum_illegal_mean));
  v.require(rep.empirical_within(4.0), "empirical " + fmt(rep.hidden_illegal_empirical) + " vs exact " +
                                           fmt(rep.hidden_illegal_exact));
  return v.finish("triad " + triad->labels[0] + " " + triad->labels[1] + " " + triad->labels[2] + " induces " +
                  triad->combination() + "; match " + fmt(rep.match[0]) + "/" + fmt(rep.match[1]) + "/" +
                  fmt(rep.match[2]) + "; hidden exact " + fmt(rep.hidden_illegal_exact) + ", empirical " +
                  fmt(rep.hidden_illegal_empirical) + " (SE " + fmt(rep.hidden_std_error) + "); quantum " +
                  fmt(rep.quantum_illegal_mean));
}

Outcome correlated_mode() {
  Verdict v;
  const AlignmentDistribution d{AlignmentMode::kCorrelatedOrthonormal, 0.01, 0};
  const ValuationStrategy f = default_valuation();
  ExperimentOptions opt;
  opt.trials = 10000;
  const auto triad = find_illegal_triad(f, d, peres_rays(), opt.samples);
  if (!triad) return {false, "no illegal triad found"};
  const ExperimentReport rep = contextuality_experiment(triad->triad, f, d, uniform_state(), opt);
  double worst = 0.0;
  for (const auto& t : rep.records) worst = std::max(worst, t.quantum_mass);
  v.require(worst <= 1e-10, "largest quantum illegal probability " + fmt(worst));
  return v.finish(std::to_string(rep.trials) + " trials, largest quantum illegal probability " + fmt(worst) +
                  ", operator-norm bound " + fmt(rep.quantum_bound_max));
}

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  const std::string cmd = std::string("\"") + KSA_CLI_PATH + "\" " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("ksa_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string data = KSA_TEST_DATA_DIR;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"povm", "povm --psi 0.01 --theta 0.02 --phi 0.7"},
      {"povm-csv", "povm --psi 0.01 --theta 0.02 --phi 0.7 --format csv --model contemporaneous"},
      {"errors", "errors"},
      {"ks-check", "ks-check --set peres33"},
      {"ks-check-file", "ks-check --file \"" + data + "/triad.txt\""},
      {"experiment", "experiment --config \"" + data + "/experiment.cfg\" --output \"" + (dir / "OUT.csv").string() + "\""},
      {"experiment-correlated", "experiment --mode correlated --trials 500 --seed 9 --output \"" + (dir / "OUT.csv").string() + "\""},
  };
  for (const auto& [name, args] : commands) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      std::string a = args;
      const std::string file = (dir / ("run" + std::to_string(run) + ".csv")).string();
      if (const auto pos = a.find((dir / "OUT.csv").string()); pos != std::string::npos)
        a.replace(pos, (dir / "OUT.csv").string().size(), file);
      const CliRun r = cli(a);
      v.require(r.exit_code == 0, name + " exited with " + std::to_string(r.exit_code));
      outputs[run] = r.out + (fs::exists(file) ? slurp(file) : "");
    }
    v.require(outputs[0] == outputs[1], name + " output differs between runs");
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return v.finish(std::to_string(commands.size()) + " invocations, byte-identical");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"PVM reduction", pvm_reduction},
      {"second-order POVM", second_order},
      {"exact zeros", exact_zeros},
      {"closed-form errors", closed_form},
      {"Heisenberg/POVM equivalence", oracle_equivalence},
      {"completeness and positivity", completeness_positivity},
      {"KS solver", ks_solver},
      {"contextuality gap", contextuality_gap},
      {"correlated mode", correlated_mode},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << " [" << fmt(secs)
              << " s]: " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
