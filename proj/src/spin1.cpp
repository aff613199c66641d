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

#include "ksa/spin1.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ksa {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

UnitVector3::UnitVector3(double x, double y, double z) : v_{x, y, z} {
  const double n2 = dot(v_, v_);
  if (!(std::abs(n2 - 1.0) <= kTol.unit_vector)) {
    throw Error(ErrorCode::kNonUnitVector, "vector is not unit length (|v|^2 = " + std::to_string(n2) + ")");
  }
}

UnitVector3 UnitVector3::normalize(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::kNonUnitVector, "cannot normalize a zero vector");
  return UnitVector3(Vec3{v[0] / n, v[1] / n, v[2] / n}, Trusted{});
}

Triad::Triad(UnitVector3 e1, UnitVector3 e2, UnitVector3 e3, std::optional<TriadAngles> angles)
    : e_{e1, e2, e3}, angles_(angles) {
  if (!(determinant() > 0.0)) {
    throw Error(ErrorCode::kLeftHanded, "triad is not right handed (det = " + std::to_string(determinant()) + ")");
  }
}

Triad Triad::any_handedness(UnitVector3 e1, UnitVector3 e2, UnitVector3 e3) {
  return Triad(e1, e2, e3, Unchecked{});
}

double Triad::determinant() const { return dot(e_[0].vec(), cross(e_[1].vec(), e_[2].vec())); }

const ComplexMatrix& AngularMomentum::operator[](std::size_t k) const {
  switch (k) {
    case 0: return l1;
    case 1: return l2;
    case 2: return l3;
  }
  throw Error(ErrorCode::kIndexOutOfRange, "angular momentum component must be 0, 1 or 2");
}

namespace {

double levi_civita(int i, int j, int k) {
  return static_cast<double>((i - j) * (j - k) * (k - i)) / 2.0;
}

AngularMomentum make_ops() {
  const auto component = [](int k) {
    ComplexMatrix m(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = Complex(0.0, -levi_civita(k, i, j));
    return m;
  };
  return {component(0), component(1), component(2)};
}

}  // namespace

const AngularMomentum& angular_momentum_ops() {
  static const AngularMomentum ops = make_ops();
  return ops;
}

ComplexMatrix spin_component(const UnitVector3& n) {
  const AngularMomentum& l = angular_momentum_ops();
  return Complex(n.x()) * l.l1 + Complex(n.y()) * l.l2 + Complex(n.z()) * l.l3;
}

ComplexMatrix squared_projection(const UnitVector3& n) {
  const ComplexMatrix nl = spin_component(n);
  return nl * nl;
}

ComplexMatrix squared_projection_closed_form(const UnitVector3& n) {
  ComplexMatrix p = ComplexMatrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) p(i, j) -= n[i] * n[j];
  return p;
}

Triad triad_from_angles(double psi, double theta, double phi) {
  const UnitVector3 e1 = UnitVector3::normalize({1.0, 0.0, 0.0});
  const UnitVector3 e2 = UnitVector3::normalize({std::sin(psi), std::cos(psi), 0.0});
  const UnitVector3 e3 = UnitVector3::normalize(
      {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
  return Triad(e1, e2, e3, TriadAngles{psi, theta, phi});
}

double orthonormality_defect(const Triad& t) {
  return std::max({std::abs(dot(t[0], t[1])), std::abs(dot(t[0], t[2])), std::abs(dot(t[1], t[2]))});
}

ComplexMatrix spherical_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  // columns: -(x + iy)/sqrt2, z, (x - iy)/sqrt2
  return ComplexMatrix{{Complex(-s, 0.0), 0.0, Complex(s, 0.0)},
                       {Complex(0.0, -s), 0.0, Complex(0.0, -s)},
                       {0.0, 1.0, 0.0}};
}

ComplexMatrix to_l3_basis(const ComplexMatrix& m) {
  const ComplexMatrix v = spherical_basis();
  return v.adjoint() * m * v;
}

}  // namespace ksa
