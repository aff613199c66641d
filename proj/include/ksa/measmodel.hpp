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

// Measurement models on system (x) apparatus, their Kraus operators and POVMs.
//
// Conventions:
//  * product-space index is (system index) * apparatus_dim + (apparatus index);
//  * pointer r is numbered from 1; in a pointer basis label the digit of
//    pointer 1 is the most significant ("011" means a1 = 0, a2 = 1, a3 = 1);
//  * two-level pointers read 0 or 1; a k-level pointer reads a caller-supplied
//    value per level (the eigenvalues of the measured observable).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ksa/matrixcore.hpp"
#include "ksa/spin1.hpp"

namespace ksa {

class PointerSpace {
 public:
  /// n two-level pointers with readings {0, 1}.
  static PointerSpace bits(std::size_t n_pointers);
  /// One pointer whose level l reads values[l].
  static PointerSpace single(std::vector<double> values);

  std::size_t n_pointers() const noexcept { return n_pointers_; }
  std::size_t levels() const noexcept { return values_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Level of pointer r (1-based) in apparatus basis state `index`.
  std::size_t level(std::size_t index, std::size_t r) const;
  /// Reading of pointer r in apparatus basis state `index`.
  double reading(std::size_t index, std::size_t r) const { return values_[level(index, r)]; }
  std::size_t index_of(const std::vector<std::size_t>& levels) const;
  /// Digit string, pointer 1 first.
  std::string label(std::size_t index) const;
  /// Parses a label produced by label(); throws kInvalidArgument.
  std::size_t index_of_label(const std::string& label) const;

  /// Pointer observable alpha_r: diagonal in the pointer basis with entries reading(., r).
  ComplexMatrix observable(std::size_t r) const;

  void check_pointer(std::size_t r) const;

 private:
  PointerSpace(std::size_t n, std::vector<double> values);

  std::size_t n_pointers_;
  std::vector<double> values_;
  std::size_t dim_;
};

struct MeasurementModel {
  MeasurementModel(std::size_t sys_dim, PointerSpace pointers, Ket phi0, ComplexMatrix u);

  std::size_t sys_dim;
  PointerSpace pointers;
  Ket phi0;
  ComplexMatrix u;
};

/// Outcome-indexed POVM. elements[i] and kraus[i] belong to apparatus basis
/// state i of `pointers`.
struct Povm {
  PointerSpace pointers;
  std::vector<ComplexMatrix> elements;
  std::vector<ComplexMatrix> kraus;

  std::size_t size() const noexcept { return elements.size(); }
  std::size_t sys_dim() const { return elements.front().dim(); }
  std::string label(std::size_t i) const { return pointers.label(i); }
  const ComplexMatrix& element(const std::string& label) const;
};

/// sigma_r on n two-level pointers: sigma|0> = -i|1>, sigma|1> = i|0> on bit r.
ComplexMatrix pointer_sigma(std::size_t r, const PointerSpace& pointers);

/// (1 - P) (x) 1 + i P (x) sigma_r. Throws kNotProjector.
ComplexMatrix single_ideal_unitary(const ComplexMatrix& p, std::size_t r, const PointerSpace& pointers);

/// U3 U2 U1 with U_r = single_ideal_unitary((e_r.L)^2, r); ready state |000>.
MeasurementModel sequential_unitary(const Triad& t);

/// exp(i pi/2 sum_r (e_r.L)^2 (x) sigma_r); ready state |000>.
MeasurementModel contemporaneous_unitary(const Triad& t);

enum class JointModel { kSequential, kContemporaneous };

MeasurementModel joint_measurement(const Triad& t, JointModel kind);

/// T_a = (1 (x) <a|) U (1 (x) |phi0>), one per apparatus basis state.
std::vector<ComplexMatrix> kraus_operators(const MeasurementModel& m);

/// E_a = T_a^dagger T_a.
Povm povm(const MeasurementModel& m);

struct BinaryMarginal {
  ComplexMatrix zero;
  ComplexMatrix one;
};

/// Marginal of pointer r over the other readings; two-level pointers only.
BinaryMarginal marginal_povm(const Povm& p, std::size_t r);

/// <psi|E_a|psi> per outcome. Throws kNotNormalized.
std::vector<double> outcome_probabilities(const Povm& p, const Ket& psi);

/// Outcomes 111, 100, 010, 001, 000: the readings that are not two 1s and one 0.
bool is_illegal_combination(std::size_t bits3);
std::vector<std::size_t> illegal_outcomes();

/// Sum of the POVM elements on illegal outcomes (three-pointer POVMs only).
ComplexMatrix illegal_element(const Povm& p);

/// Closed-form second-order expansion of the sequential POVM in (psi, theta),
/// indexed like povm(sequential_unitary(triad_from_angles(psi, theta, phi))).
std::vector<ComplexMatrix> second_order_povm(double psi, double theta, double phi);

/// Single-observable measurement of a non-degenerate Hermitian A: the ideal
/// model |a>|phi0> -> |a>|a> with a pointer of one level per eigenvalue, plus
/// random amplitudes eps_{a,bd} (uniform on the complex disc of radius
/// `strength`) on the ready-state columns, re-unitarized by polar
/// decomposition. strength = 0 gives the ideal model exactly.
MeasurementModel perturbed_single_measurement(const ComplexMatrix& a, double strength, std::uint64_t seed);

}  // namespace ksa
