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

// Hidden-variable valuations under random analyzer misalignment, compared
// with the outcome statistics of the approximate joint measurement.
//
// A valuation f assigns 0/1 to actual alignments. For a target direction n,
// p(n) is the probability that the actual alignment n' has f(n') = 1, and the
// induced valuation is f~(n) = [p(n) >= 0.5]. Over a KS-uncolourable set of
// targets some triad must f~-evaluate to an illegal combination; the
// experiment then measures how often f reads illegally on the actual
// alignments versus how often the quantum measurement does.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ksa/kscolor.hpp"
#include "ksa/measmodel.hpp"

namespace ksa {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream).
Rng make_rng(std::uint64_t seed, std::uint64_t stream);

/// splitmix64 finalizer.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

enum class AlignmentMode {
  kIndependent,            // each axis perturbed independently
  kCorrelatedOrthonormal,  // one random rotation for the whole triad
};

struct AlignmentDistribution {
  AlignmentMode mode = AlignmentMode::kIndependent;
  double sigma = 0.01;  // rms angular deviation of an axis, radians
  std::uint64_t seed = 0;
};

// Valuation strategies --------------------------------------------------------------

/// f(n) = colour of the nearest ray (largest |n . r|, lowest index on ties).
struct NearestRayValuation {
  RaySet rays;
  Coloring colors;
};

struct DeterministicRule {
  enum class Kind {
    kConstant,    // f = value
    kHemisphere,  // f(n) = [n . axis >= 0]
    kPolarCap,    // f(n) = 0 iff the angle between n and +-axis is < half_angle
  } kind = Kind::kConstant;
  std::uint8_t value = 1;
  Vec3 axis{0.0, 0.0, 1.0};
  double half_angle = 0.0;
};

/// Pseudo-random bit per cell of a direction grid of the given angular
/// resolution; n and -n share a cell.
struct SeededRandomValuation {
  std::uint64_t seed = 0;
  double resolution = 1e-3;
};

using ValuationStrategy = std::variant<NearestRayValuation, DeterministicRule, SeededRandomValuation>;

std::uint8_t evaluate(const ValuationStrategy& f, const UnitVector3& n);

/// Nearest-ray valuation over the Peres set without ray `removed`, coloured by
/// find_legal_coloring.
ValuationStrategy default_valuation(std::size_t removed = 2);

std::string describe(const ValuationStrategy& f);

// Sampling ------------------------------------------------------------------------

UnitVector3 sample_actual_axis(const UnitVector3& target, const AlignmentDistribution& d, Rng& rng);

Triad sample_actual_triad(const Triad& target, const AlignmentDistribution& d, Rng& rng);

struct Estimate {
  double p = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo estimate of p(n) from `samples` single-axis draws on stream `stream` of d.seed.
Estimate estimate_p(const ValuationStrategy& f, const UnitVector3& n, const AlignmentDistribution& d,
                    std::size_t samples, std::uint64_t stream = 0);

/// f~(n) = 1 iff p >= 0.5.
std::uint8_t induced_value(double p);

std::uint8_t induced_valuation(const ValuationStrategy& f, const UnitVector3& n, const AlignmentDistribution& d,
                               std::size_t samples, std::uint64_t stream = 0);

struct IllegalTriad {
  Triad triad;                          // right handed; axes in measurement order
  std::array<std::string, 3> labels;    // ray labels; "completion" for a cross product
  std::array<double, 3> p{};            // estimated p(e_r)
  std::array<std::uint8_t, 3> induced{};
  bool from_pair = false;               // third axis completes an orthogonal pair

  std::string combination() const;
};

/// Scans the complete triads of `rays`, then the orthogonal pairs outside any
/// complete triad (completed by their cross product), and returns the first
/// whose induced values form an illegal combination.
std::optional<IllegalTriad> find_illegal_triad(const ValuationStrategy& f, const AlignmentDistribution& d,
                                               const RaySet& rays, std::size_t samples,
                                               double tol = kTol.orthogonality);

// Experiment ----------------------------------------------------------------------

struct ExperimentOptions {
  std::size_t trials = 10000;
  std::size_t samples = 20000;  // per-axis draws for p(e_r)
  JointModel model = JointModel::kSequential;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  std::array<Vec3, 3> actual{};
  std::array<std::uint8_t, 3> values{};
  bool illegal = false;
  double quantum_mass = 0.0;   // <psi|E_illegal|psi>
  double quantum_bound = 0.0;  // ||E_illegal||
};

struct ExperimentReport {
  std::array<Vec3, 3> target{};
  std::array<std::string, 3> labels;
  AlignmentDistribution distribution;
  JointModel model = JointModel::kSequential;
  std::array<Estimate, 3> p{};
  std::array<std::uint8_t, 3> induced{};
  std::array<double, 3> match{};  // P(f(e'_r) = f~(e_r))
  double hidden_illegal_exact = 0.0;
  double hidden_illegal_empirical = 0.0;
  double hidden_std_error = 0.0;
  double quantum_illegal_mean = 0.0;
  double quantum_illegal_max = 0.0;
  double quantum_bound_max = 0.0;
  std::size_t trials = 0;
  std::vector<TrialRecord> records;

  double gap() const { return hidden_illegal_exact - quantum_illegal_mean; }
  bool all_match_at_least(double q) const;
  /// |empirical - exact| within `k` binomial standard errors.
  bool empirical_within(double k) const;
};

/// Probability that three independent bits with P(bit_r = 1) = q[r] form an
/// illegal combination; enumerates the eight outcomes.
double illegal_probability(const std::array<double, 3>& q);

/// Hidden side: per trial, f on a sampled actual triad, plus the exact illegal
/// probability from the per-axis marginals. Quantum side: the illegal mass of
/// the joint-measurement POVM of the same actual triad, for state psi and as
/// the state-independent operator norm.
/// Throws kNotNormalized (psi) or kInvalidArgument (trials == 0 or samples == 0).
ExperimentReport contextuality_experiment(const Triad& target, const ValuationStrategy& f,
                                          const AlignmentDistribution& d, const Ket& psi,
                                          const ExperimentOptions& options);

void write_trials_csv(std::ostream& os, const ExperimentReport& report);
nlohmann::json summary_json(const ExperimentReport& report);

}  // namespace ksa
