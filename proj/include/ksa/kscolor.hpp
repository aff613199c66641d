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

// Kochen-Specker colourability of finite ray sets in R^3.
//
// A colouring assigns f(n) = 1 when (n.L)^2 takes the value 1. Since the three
// squared projections of an orthonormal triad sum to 2, every complete triad
// must read two 1s and one 0, and no orthogonal pair may read (0, 0).

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ksa/spin1.hpp"

namespace ksa {

/// Finite set of rays; r and -r denote the same ray.
class RaySet {
 public:
  RaySet() = default;
  /// Throws kInvalidArgument on duplicate rays (up to sign) or a label count mismatch.
  RaySet(std::vector<UnitVector3> rays, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return rays_.size(); }
  const UnitVector3& operator[](std::size_t i) const { return rays_.at(i); }
  const std::vector<UnitVector3>& rays() const noexcept { return rays_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  /// Index of the ray parallel or antiparallel to v, if present.
  std::optional<std::size_t> find(const Vec3& v, double tol = 1e-9) const;

 private:
  std::vector<UnitVector3> rays_;
  std::vector<std::string> labels_;
};

struct OrthoStructure {
  std::size_t n_rays = 0;
  std::vector<std::array<std::size_t, 2>> pairs;   // i < j
  std::vector<std::array<std::size_t, 3>> triads;  // i < j < k, pairwise orthogonal
};

struct Coloring {
  std::vector<std::uint8_t> values;  // one entry per ray, 0 or 1
};

struct SearchStats {
  std::uint64_t nodes = 0;           // branching decisions
  std::uint64_t contradictions = 0;  // propagation failures
};

struct ColoringResult {
  std::optional<Coloring> coloring;  // empty: unsatisfiable
  SearchStats stats;

  bool satisfiable() const noexcept { return coloring.has_value(); }
};

struct Violation {
  enum class Kind { kTriad, kPair } kind;
  std::array<std::size_t, 3> rays{};  // pair violations use the first two entries
  std::string combination;            // e.g. "111" or "00"
};

/// The 33-ray Peres set: coordinate axes and the rays of the forms
/// (0,1,+-1), (0,1,+-sqrt2) and (1,+-1,+-sqrt2) under coordinate permutations.
RaySet peres_rays();

/// Pairs with |r_i . r_j| <= tol and all triads built from them.
OrthoStructure ortho_structure(const RaySet& rs, double tol = kTol.orthogonality);

/// Exhaustive backtracking with unit propagation. Rays are branched in input
/// order, value 0 first, so the result is deterministic.
ColoringResult find_legal_coloring(const OrthoStructure& os, std::size_t n_rays);

/// Every triad not reading {0,1,1} and every orthogonal pair reading (0,0).
/// Throws kIncompleteColoring if the colouring does not cover every ray.
std::vector<Violation> check_coloring(const OrthoStructure& os, const Coloring& c);

/// Ray file: one ray per line as three reals; '#' starts a comment. Rays are
/// normalized on load. Throws kParse (with the line number) or kIo.
RaySet parse_ray_file(std::istream& in);
RaySet load_ray_file(const std::filesystem::path& path);

/// Copy without ray i (triads and pairs through it disappear with it).
RaySet remove_ray(const RaySet& rs, std::size_t i);

/// Apply a rotation matrix (rows) to every ray.
RaySet rotated(const RaySet& rs, const std::array<Vec3, 3>& rotation);

}  // namespace ksa
