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

#include "ksa/contextsim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ksa/format.hpp"

namespace ksa {

namespace {

constexpr std::uint64_t kTrialStream = std::uint64_t{1} << 32;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vec3 scale_add(const Vec3& a, double s, const Vec3& b) { return {a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]}; }

/// Orthonormal pair spanning the plane orthogonal to n.
std::array<Vec3, 2> tangent_basis(const UnitVector3& n) {
  const Vec3& v = n.vec();
  const std::size_t smallest = static_cast<std::size_t>(
      std::min_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }) -
      v.begin());
  Vec3 helper{0.0, 0.0, 0.0};
  helper[smallest] = 1.0;
  const Vec3 t1 = UnitVector3::normalize(cross(v, helper)).vec();
  return {t1, cross(v, t1)};
}

using Rotation = std::array<Vec3, 3>;

Vec3 rotate(const Rotation& r, const Vec3& v) { return {dot(r[0], v), dot(r[1], v), dot(r[2], v)}; }

/// Rotation by a random rotation vector with rms angle sigma.
Rotation random_rotation(double sigma, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, sigma / std::sqrt(3.0));
  const Vec3 w{gauss(rng), gauss(rng), gauss(rng)};
  const double angle = norm(w);
  Rotation r{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  if (angle == 0.0) return r;
  const Vec3 k{w[0] / angle, w[1] / angle, w[2] / angle};
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  // Rodrigues: R = c I + s [k]x + t k k^T
  r[0] = {c + t * k[0] * k[0], t * k[0] * k[1] - s * k[2], t * k[0] * k[2] + s * k[1]};
  r[1] = {t * k[1] * k[0] + s * k[2], c + t * k[1] * k[1], t * k[1] * k[2] - s * k[0]};
  r[2] = {t * k[2] * k[0] - s * k[1], t * k[2] * k[1] + s * k[0], c + t * k[2] * k[2]};
  return r;
}

UnitVector3 perturb_independent(const UnitVector3& target, double sigma, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, sigma / std::sqrt(2.0));
  const auto [t1, t2] = tangent_basis(target);
  const double a = gauss(rng);
  const double b = gauss(rng);
  return UnitVector3::normalize(scale_add(scale_add(target.vec(), a, t1), b, t2));
}

Vec3 canonical_sign(const Vec3& v) {
  for (double c : v) {
    if (std::abs(c) > 1e-12) return c < 0 ? Vec3{-v[0], -v[1], -v[2]} : v;
  }
  return v;
}

std::uint8_t eval_rule(const DeterministicRule& rule, const UnitVector3& n) {
  switch (rule.kind) {
    case DeterministicRule::Kind::kConstant:
      return rule.value;
    case DeterministicRule::Kind::kHemisphere:
      return dot(n.vec(), rule.axis) >= 0.0 ? 1 : 0;
    case DeterministicRule::Kind::kPolarCap: {
      const double c = std::abs(dot(n.vec(), rule.axis)) / norm(rule.axis);
      return c > std::cos(rule.half_angle) ? 0 : 1;
    }
  }
  return 1;
}

std::uint8_t eval_nearest(const NearestRayValuation& f, const UnitVector3& n) {
  std::size_t best = 0;
  double best_overlap = -1.0;
  for (std::size_t i = 0; i < f.rays.size(); ++i) {
    const double overlap = std::abs(dot(n, f.rays[i]));
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = i;
    }
  }
  return f.colors.values.at(best);
}

std::uint8_t eval_random(const SeededRandomValuation& f, const UnitVector3& n) {
  const Vec3 v = canonical_sign(n.vec());
  std::uint64_t h = splitmix64(f.seed);
  for (double c : v) {
    const auto cell = static_cast<std::int64_t>(std::floor(c / f.resolution));
    h = splitmix64(h ^ static_cast<std::uint64_t>(cell));
  }
  return static_cast<std::uint8_t>(h >> 63);
}

/// Stream shared by every estimate of p at the same projective direction.
std::uint64_t direction_stream(const UnitVector3& n) {
  const Vec3 v = canonical_sign(n.vec());
  std::uint64_t h = 0x5d1f3a2bULL;
  for (double c : v) h = splitmix64(h ^ static_cast<std::uint64_t>(std::llround(c * 1e9)));
  return h;
}

Triad oriented(const UnitVector3& a, const UnitVector3& b, const UnitVector3& c,
               std::array<std::size_t, 3>& order) {
  order = {0, 1, 2};
  if (dot(a.vec(), cross(b.vec(), c.vec())) > 0.0) return Triad(a, b, c);
  order = {1, 0, 2};
  return Triad(b, a, c);
}

double polar_angle(const Vec3& v) { return std::acos(std::clamp(v[2], -1.0, 1.0)); }
double azimuth(const Vec3& v) { return std::atan2(v[1], v[0]); }

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) { return Rng(mix_seed(seed, stream)); }

// Valuations ---------------------------------------------------------------------

std::uint8_t evaluate(const ValuationStrategy& f, const UnitVector3& n) {
  return std::visit(
      [&n](const auto& v) -> std::uint8_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NearestRayValuation>) return eval_nearest(v, n);
        else if constexpr (std::is_same_v<T, DeterministicRule>) return eval_rule(v, n);
        else return eval_random(v, n);
      },
      f);
}

ValuationStrategy default_valuation(std::size_t removed) {
  const RaySet rays = remove_ray(peres_rays(), removed);
  ColoringResult result = find_legal_coloring(ortho_structure(rays), rays.size());
  if (!result.satisfiable()) {
    throw Error(ErrorCode::kInvalidArgument, "Peres set without ray " + std::to_string(removed) + " is not colourable");
  }
  return NearestRayValuation{rays, std::move(*result.coloring)};
}

std::string describe(const ValuationStrategy& f) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NearestRayValuation>) {
          return "nearest-ray(" + std::to_string(v.rays.size()) + " rays)";
        } else if constexpr (std::is_same_v<T, DeterministicRule>) {
          switch (v.kind) {
            case DeterministicRule::Kind::kConstant: return "constant(" + std::to_string(v.value) + ")";
            case DeterministicRule::Kind::kHemisphere: return "hemisphere";
            case DeterministicRule::Kind::kPolarCap: return "polar-cap(" + format_double(v.half_angle) + ")";
          }
          return "rule";
        } else {
          return "seeded-random(" + std::to_string(v.seed) + ")";
        }
      },
      f);
}

// Sampling -----------------------------------------------------------------------

UnitVector3 sample_actual_axis(const UnitVector3& target, const AlignmentDistribution& d, Rng& rng) {
  if (!(d.sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  if (d.sigma == 0.0) return target;
  if (d.mode == AlignmentMode::kIndependent) return perturb_independent(target, d.sigma, rng);
  return UnitVector3::normalize(rotate(random_rotation(d.sigma, rng), target.vec()));
}

Triad sample_actual_triad(const Triad& target, const AlignmentDistribution& d, Rng& rng) {
  if (!(d.sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  if (d.sigma == 0.0) return target;
  if (d.mode == AlignmentMode::kIndependent) {
    const UnitVector3 a = perturb_independent(target[0], d.sigma, rng);
    const UnitVector3 b = perturb_independent(target[1], d.sigma, rng);
    const UnitVector3 c = perturb_independent(target[2], d.sigma, rng);
    return Triad::any_handedness(a, b, c);
  }
  const Rotation r = random_rotation(d.sigma, rng);
  return Triad::any_handedness(UnitVector3::normalize(rotate(r, target[0].vec())),
                               UnitVector3::normalize(rotate(r, target[1].vec())),
                               UnitVector3::normalize(rotate(r, target[2].vec())));
}

Estimate estimate_p(const ValuationStrategy& f, const UnitVector3& n, const AlignmentDistribution& d,
                    std::size_t samples, std::uint64_t stream) {
  if (samples == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one sample");
  Rng rng = make_rng(d.seed, stream);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < samples; ++i) ones += evaluate(f, sample_actual_axis(n, d, rng));
  Estimate e;
  e.samples = samples;
  e.p = static_cast<double>(ones) / static_cast<double>(samples);
  e.std_error = std::sqrt(e.p * (1.0 - e.p) / static_cast<double>(samples));
  return e;
}

std::uint8_t induced_value(double p) { return p >= 0.5 ? 1 : 0; }

std::uint8_t induced_valuation(const ValuationStrategy& f, const UnitVector3& n, const AlignmentDistribution& d,
                               std::size_t samples, std::uint64_t stream) {
  return induced_value(estimate_p(f, n, d, samples, stream).p);
}

std::string IllegalTriad::combination() const {
  std::string s;
  for (std::uint8_t v : induced) s += static_cast<char>('0' + v);
  return s;
}

std::optional<IllegalTriad> find_illegal_triad(const ValuationStrategy& f, const AlignmentDistribution& d,
                                               const RaySet& rays, std::size_t samples, double tol) {
  const OrthoStructure os = ortho_structure(rays, tol);
  std::vector<std::optional<double>> p(rays.size());
  const auto p_of = [&](std::size_t i) {
    if (!p[i]) p[i] = estimate_p(f, rays[i], d, samples, direction_stream(rays[i])).p;
    return *p[i];
  };
  const auto illegal = [](const std::array<std::uint8_t, 3>& v) { return v[0] + v[1] + v[2] != 2; };

  for (const auto& t : os.triads) {
    const std::array<std::uint8_t, 3> induced{induced_value(p_of(t[0])), induced_value(p_of(t[1])),
                                              induced_value(p_of(t[2]))};
    if (!illegal(induced)) continue;
    std::array<std::size_t, 3> order{};
    Triad triad = oriented(rays[t[0]], rays[t[1]], rays[t[2]], order);
    IllegalTriad out{std::move(triad), {}, {}, {}, false};
    for (std::size_t r = 0; r < 3; ++r) {
      const std::size_t idx = t[order[r]];
      out.labels[r] = rays.label(idx);
      out.p[r] = p_of(idx);
      out.induced[r] = induced_value(out.p[r]);
    }
    return out;
  }

  std::vector<bool> in_triad(os.pairs.size(), false);
  for (std::size_t k = 0; k < os.pairs.size(); ++k) {
    const auto& pr = os.pairs[k];
    in_triad[k] = std::any_of(os.triads.begin(), os.triads.end(), [&](const auto& t) {
      return std::count(t.begin(), t.end(), pr[0]) && std::count(t.begin(), t.end(), pr[1]);
    });
  }
  for (std::size_t k = 0; k < os.pairs.size(); ++k) {
    if (in_triad[k]) continue;
    const auto [i, j] = os.pairs[k];
    const UnitVector3 c = UnitVector3::normalize(cross(rays[i].vec(), rays[j].vec()));
    const double pc = estimate_p(f, c, d, samples, direction_stream(c)).p;
    const std::array<std::uint8_t, 3> induced{induced_value(p_of(i)), induced_value(p_of(j)), induced_value(pc)};
    if (!illegal(induced)) continue;
    IllegalTriad out{Triad(rays[i], rays[j], c), {rays.label(i), rays.label(j), "completion"},
                     {p_of(i), p_of(j), pc}, induced, true};
    return out;
  }
  return std::nullopt;
}

// Experiment ---------------------------------------------------------------------

double illegal_probability(const std::array<double, 3>& q) {
  double total = 0.0;
  for (std::size_t bits = 0; bits < 8; ++bits) {
    if (!is_illegal_combination(bits)) continue;
    double prob = 1.0;
    for (std::size_t r = 0; r < 3; ++r) {
      const bool one = (bits >> (2 - r)) & 1U;
      prob *= one ? q[r] : 1.0 - q[r];
    }
    total += prob;
  }
  return total;
}

bool ExperimentReport::all_match_at_least(double q) const {
  return std::all_of(match.begin(), match.end(), [q](double m) { return m >= q; });
}

bool ExperimentReport::empirical_within(double k) const {
  return std::abs(hidden_illegal_empirical - hidden_illegal_exact) <= k * hidden_std_error;
}

ExperimentReport contextuality_experiment(const Triad& target, const ValuationStrategy& f,
                                          const AlignmentDistribution& d, const Ket& psi,
                                          const ExperimentOptions& options) {
  if (options.trials == 0) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (options.samples == 0) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 1");
  if (psi.dim() != 3) throw Error(ErrorCode::kDimensionMismatch, "spin-1 state must have dimension 3");
  if (!psi.normalized()) throw Error(ErrorCode::kNotNormalized, "state is not normalized");

  ExperimentReport rep;
  rep.distribution = d;
  rep.model = options.model;
  rep.trials = options.trials;
  std::array<double, 3> q{};
  for (std::size_t r = 0; r < 3; ++r) {
    rep.target[r] = target[r].vec();
    rep.p[r] = estimate_p(f, target[r], d, options.samples, direction_stream(target[r]));
    q[r] = rep.p[r].p;
    rep.induced[r] = induced_value(q[r]);
    rep.match[r] = rep.induced[r] ? q[r] : 1.0 - q[r];
  }
  rep.hidden_illegal_exact = illegal_probability(q);

  rep.records.reserve(options.trials);
  std::size_t illegal_count = 0;
  double mass_sum = 0.0;
  for (std::size_t t = 0; t < options.trials; ++t) {
    TrialRecord rec;
    rec.seed = mix_seed(d.seed, kTrialStream + t);
    Rng rng(rec.seed);
    const Triad actual = sample_actual_triad(target, d, rng);
    for (std::size_t r = 0; r < 3; ++r) {
      rec.actual[r] = actual[r].vec();
      rec.values[r] = evaluate(f, actual[r]);
    }
    rec.illegal = rec.values[0] + rec.values[1] + rec.values[2] != 2;

    const ComplexMatrix e_illegal = illegal_element(povm(joint_measurement(actual, options.model)));
    rec.quantum_mass = psi.expectation(e_illegal).real();
    rec.quantum_bound = operator_norm(e_illegal);

    illegal_count += rec.illegal ? 1 : 0;
    mass_sum += rec.quantum_mass;
    rep.quantum_illegal_max = std::max(rep.quantum_illegal_max, rec.quantum_mass);
    rep.quantum_bound_max = std::max(rep.quantum_bound_max, rec.quantum_bound);
    rep.records.push_back(rec);
  }
  const auto n = static_cast<double>(options.trials);
  rep.hidden_illegal_empirical = static_cast<double>(illegal_count) / n;
  rep.quantum_illegal_mean = mass_sum / n;
  // Binomial standard error at the exact value, floored at one count so that
  // exact values of 0 or 1 still admit a single-count discrepancy.
  const double pe = std::clamp(rep.hidden_illegal_exact, 1.0 / n, 1.0 - 1.0 / n);
  rep.hidden_std_error = std::sqrt(pe * (1.0 - pe) / n);
  return rep;
}

void write_trials_csv(std::ostream& os, const ExperimentReport& report) {
  os << "trial,seed,e1_polar,e1_azimuth,e2_polar,e2_azimuth,e3_polar,e3_azimuth,f1,f2,f3,illegal,"
        "quantum_illegal_mass,quantum_illegal_bound\n";
  for (std::size_t t = 0; t < report.records.size(); ++t) {
    const TrialRecord& rec = report.records[t];
    os << t << ',' << rec.seed;
    for (const Vec3& v : rec.actual) os << ',' << format_double(polar_angle(v)) << ',' << format_double(azimuth(v));
    for (std::uint8_t v : rec.values) os << ',' << static_cast<int>(v);
    os << ',' << (rec.illegal ? 1 : 0) << ',' << format_double(rec.quantum_mass) << ','
       << format_double(rec.quantum_bound) << '\n';
  }
}

nlohmann::json summary_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["trials"] = report.trials;
  j["seed"] = report.distribution.seed;
  j["sigma"] = report.distribution.sigma;
  j["mode"] = report.distribution.mode == AlignmentMode::kIndependent ? "independent" : "correlated";
  j["model"] = report.model == JointModel::kSequential ? "sequential" : "contemporaneous";
  nlohmann::json axes = nlohmann::json::array();
  for (std::size_t r = 0; r < 3; ++r) {
    axes.push_back({{"label", report.labels[r]},
                    {"target", report.target[r]},
                    {"p", report.p[r].p},
                    {"p_std_error", report.p[r].std_error},
                    {"induced", report.induced[r]},
                    {"match_probability", report.match[r]}});
  }
  j["axes"] = std::move(axes);
  j["hidden_illegal_exact"] = report.hidden_illegal_exact;
  j["hidden_illegal_empirical"] = report.hidden_illegal_empirical;
  j["hidden_std_error"] = report.hidden_std_error;
  j["quantum_illegal_probability"] = report.quantum_illegal_mean;
  j["quantum_illegal_max"] = report.quantum_illegal_max;
  j["quantum_illegal_bound"] = report.quantum_bound_max;
  j["gap"] = report.gap();
  return j;
}

}  // namespace ksa
