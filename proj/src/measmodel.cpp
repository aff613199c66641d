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

#include "ksa/measmodel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace ksa {

// PointerSpace ---------------------------------------------------------------

PointerSpace::PointerSpace(std::size_t n, std::vector<double> values)
    : n_pointers_(n), values_(std::move(values)), dim_(1) {
  if (n_pointers_ == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one pointer");
  if (values_.size() < 2) throw Error(ErrorCode::kInvalidArgument, "a pointer needs at least two levels");
  for (std::size_t r = 0; r < n_pointers_; ++r) dim_ *= values_.size();
}

PointerSpace PointerSpace::bits(std::size_t n_pointers) { return PointerSpace(n_pointers, {0.0, 1.0}); }

PointerSpace PointerSpace::single(std::vector<double> values) { return PointerSpace(1, std::move(values)); }

void PointerSpace::check_pointer(std::size_t r) const {
  if (r < 1 || r > n_pointers_) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "pointer index " + std::to_string(r) + " outside 1.." + std::to_string(n_pointers_));
  }
}

std::size_t PointerSpace::level(std::size_t index, std::size_t r) const {
  check_pointer(r);
  if (index >= dim_) throw Error(ErrorCode::kIndexOutOfRange, "apparatus basis index out of range");
  std::size_t stride = 1;
  for (std::size_t s = n_pointers_; s > r; --s) stride *= levels();
  return (index / stride) % levels();
}

std::size_t PointerSpace::index_of(const std::vector<std::size_t>& levels_in) const {
  if (levels_in.size() != n_pointers_) throw Error(ErrorCode::kDimensionMismatch, "wrong number of pointer levels");
  std::size_t index = 0;
  for (std::size_t l : levels_in) {
    if (l >= levels()) throw Error(ErrorCode::kIndexOutOfRange, "pointer level out of range");
    index = index * levels() + l;
  }
  return index;
}

std::string PointerSpace::label(std::size_t index) const {
  std::string out;
  for (std::size_t r = 1; r <= n_pointers_; ++r) {
    const std::size_t l = level(index, r);
    out += l < 10 ? std::to_string(l) : "(" + std::to_string(l) + ")";
  }
  return out;
}

std::size_t PointerSpace::index_of_label(const std::string& text) const {
  for (std::size_t i = 0; i < dim_; ++i)
    if (label(i) == text) return i;
  throw Error(ErrorCode::kInvalidArgument, "unknown outcome label '" + text + "'");
}

ComplexMatrix PointerSpace::observable(std::size_t r) const {
  check_pointer(r);
  ComplexMatrix a(dim_);
  for (std::size_t i = 0; i < dim_; ++i) a(i, i) = reading(i, r);
  return a;
}

// MeasurementModel / Povm -----------------------------------------------------

MeasurementModel::MeasurementModel(std::size_t sys_dim_in, PointerSpace pointers_in, Ket phi0_in,
                                   ComplexMatrix u_in)
    : sys_dim(sys_dim_in), pointers(std::move(pointers_in)), phi0(std::move(phi0_in)), u(std::move(u_in)) {
  if (phi0.dim() != pointers.dim()) throw Error(ErrorCode::kDimensionMismatch, "ready state has wrong dimension");
  if (u.dim() != sys_dim * pointers.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "unitary does not act on system (x) apparatus");
  }
  if (!phi0.normalized()) throw Error(ErrorCode::kNotNormalized, "ready state is not normalized");
  if (!u.unitary()) throw Error(ErrorCode::kInvalidArgument, "measurement operator is not unitary");
}

const ComplexMatrix& Povm::element(const std::string& text) const {
  return elements.at(pointers.index_of_label(text));
}

// Unitaries -------------------------------------------------------------------

ComplexMatrix pointer_sigma(std::size_t r, const PointerSpace& pointers) {
  pointers.check_pointer(r);
  if (pointers.levels() != 2) throw Error(ErrorCode::kInvalidArgument, "sigma needs two-level pointers");
  ComplexMatrix s(pointers.dim());
  std::size_t stride = 1;
  for (std::size_t k = pointers.n_pointers(); k > r; --k) stride *= 2;
  for (std::size_t i = 0; i < pointers.dim(); ++i) {
    const bool bit = pointers.level(i, r) == 1;
    const std::size_t j = bit ? i - stride : i + stride;
    // column i maps to row j: sigma|0> = -i|1>, sigma|1> = i|0>
    s(j, i) = bit ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
  }
  return s;
}

ComplexMatrix single_ideal_unitary(const ComplexMatrix& p, std::size_t r, const PointerSpace& pointers) {
  if (!p.projector()) throw Error(ErrorCode::kNotProjector, "observable is not a projector");
  const ComplexMatrix one_sys = ComplexMatrix::identity(p.dim());
  const ComplexMatrix one_ap = ComplexMatrix::identity(pointers.dim());
  return tensor(one_sys - p, one_ap) + Complex(0.0, 1.0) * tensor(p, pointer_sigma(r, pointers));
}

namespace {

Ket ready_state(const PointerSpace& pointers) { return Ket::basis(pointers.dim(), 0); }

}  // namespace

MeasurementModel sequential_unitary(const Triad& t) {
  const PointerSpace pointers = PointerSpace::bits(3);
  ComplexMatrix u = ComplexMatrix::identity(3 * pointers.dim());
  for (std::size_t r = 1; r <= 3; ++r) {
    u = single_ideal_unitary(squared_projection(t[r - 1]), r, pointers) * u;
  }
  return MeasurementModel(3, pointers, ready_state(pointers), std::move(u));
}

MeasurementModel contemporaneous_unitary(const Triad& t) {
  const PointerSpace pointers = PointerSpace::bits(3);
  ComplexMatrix h(3 * pointers.dim());
  for (std::size_t r = 1; r <= 3; ++r) {
    h += tensor(squared_projection(t[r - 1]), pointer_sigma(r, pointers));
  }
  h *= std::numbers::pi / 2.0;
  return MeasurementModel(3, pointers, ready_state(pointers), exp_i(h));
}

MeasurementModel joint_measurement(const Triad& t, JointModel kind) {
  return kind == JointModel::kSequential ? sequential_unitary(t) : contemporaneous_unitary(t);
}

// Kraus / POVM ------------------------------------------------------------------

std::vector<ComplexMatrix> kraus_operators(const MeasurementModel& m) {
  const std::size_t ap = m.pointers.dim();
  std::vector<ComplexMatrix> out;
  out.reserve(ap);
  for (std::size_t a = 0; a < ap; ++a) {
    ComplexMatrix t(m.sys_dim);
    for (std::size_t i = 0; i < m.sys_dim; ++i)
      for (std::size_t j = 0; j < m.sys_dim; ++j) {
        Complex sum = 0.0;
        for (std::size_t b = 0; b < ap; ++b) {
          if (m.phi0[b] == Complex(0.0)) continue;
          sum += m.u(i * ap + a, j * ap + b) * m.phi0[b];
        }
        t(i, j) = sum;
      }
    out.push_back(std::move(t));
  }
  return out;
}

Povm povm(const MeasurementModel& m) {
  Povm p{m.pointers, {}, kraus_operators(m)};
  p.elements.reserve(p.kraus.size());
  for (const ComplexMatrix& t : p.kraus) p.elements.push_back(t.adjoint() * t);
  return p;
}

BinaryMarginal marginal_povm(const Povm& p, std::size_t r) {
  p.pointers.check_pointer(r);
  if (p.pointers.levels() != 2) throw Error(ErrorCode::kInvalidArgument, "binary marginal needs two-level pointers");
  BinaryMarginal out{ComplexMatrix(p.sys_dim()), ComplexMatrix(p.sys_dim())};
  for (std::size_t i = 0; i < p.size(); ++i) {
    (p.pointers.level(i, r) == 1 ? out.one : out.zero) += p.elements[i];
  }
  return out;
}

std::vector<double> outcome_probabilities(const Povm& p, const Ket& psi) {
  if (!psi.normalized()) throw Error(ErrorCode::kNotNormalized, "state is not normalized");
  std::vector<double> probs;
  probs.reserve(p.size());
  for (const ComplexMatrix& e : p.elements) probs.push_back(psi.expectation(e).real());
  return probs;
}

bool is_illegal_combination(std::size_t bits3) {
  const int ones = static_cast<int>((bits3 & 1U) + ((bits3 >> 1) & 1U) + ((bits3 >> 2) & 1U));
  return ones != 2;
}

std::vector<std::size_t> illegal_outcomes() { return {7, 4, 2, 1, 0}; }

ComplexMatrix illegal_element(const Povm& p) {
  if (p.pointers.n_pointers() != 3 || p.pointers.levels() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "illegal combinations are defined for three binary pointers");
  }
  ComplexMatrix sum(p.sys_dim());
  for (std::size_t i : illegal_outcomes()) sum += p.elements[i];
  return sum;
}

std::vector<ComplexMatrix> second_order_povm(double psi, double theta, double phi) {
  const AngularMomentum& l = angular_momentum_ops();
  const ComplexMatrix one = ComplexMatrix::identity(3);
  const ComplexMatrix q1 = one - l.l1 * l.l1;
  const ComplexMatrix q2 = one - l.l2 * l.l2;
  const ComplexMatrix q3 = one - l.l3 * l.l3;
  const ComplexMatrix anti = l.l2 * l.l3 + l.l3 * l.l2;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double p2 = psi * psi;
  const double t2 = theta * theta;
  const double tpc = theta * psi * c;

  std::vector<ComplexMatrix> e(8, ComplexMatrix(3));
  e[0b111] = Complex(p2) * q2 + Complex(t2) * q3 - Complex(tpc) * anti;
  e[0b110] = Complex(1.0 - t2) * q3 + Complex(tpc) * anti;
  e[0b101] = Complex(1.0 - t2 * s * s - p2) * q2;
  e[0b011] = Complex(1.0 - t2 * c * c - p2) * q1;
  e[0b100] = Complex(t2 * s * s) * q2;
  e[0b010] = Complex(t2 * c * c) * q1;
  e[0b001] = Complex(p2) * q1;
  return e;
}

// Perturbed single-observable model ----------------------------------------------

MeasurementModel perturbed_single_measurement(const ComplexMatrix& a, double strength, std::uint64_t seed) {
  if (!(strength >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "perturbation strength must be >= 0");
  const HermitianEig eig = hermitian_eig(a);
  const std::size_t k = eig.values.size();
  for (std::size_t i = 1; i < k; ++i) {
    if (eig.values[i] - eig.values[i - 1] <= 1e-9) {
      throw Error(ErrorCode::kDegenerateSpectrum, "observable has a degenerate spectrum");
    }
  }

  const PointerSpace pointers = PointerSpace::single(eig.values);
  const std::size_t n = k * k;

  // Everything is first built in the eigenbasis of A, then rotated.
  ComplexMatrix w(n);
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t d = 0; d < k; ++d) w(s * k + (d + s) % k, s * k + d) = 1.0;

  if (strength > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t s = 0; s < k; ++s)        // input eigenstate a, ready pointer 0
      for (std::size_t row = 0; row < n; ++row) {  // output |b, d>
        const double radius = strength * std::sqrt(unif(rng));
        const double angle = 2.0 * std::numbers::pi * unif(rng);
        w(row, s * k) += std::polar(radius, angle);
      }
    w = polar_unitary(w);
  }

  ComplexMatrix v(k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i) v(i, j) = eig.vectors[j][i];
  const ComplexMatrix rot = tensor(v, ComplexMatrix::identity(k));
  return MeasurementModel(k, pointers, ready_state(pointers), rot * w * rot.adjoint());
}

}  // namespace ksa
