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

// Spin-1 operators in the Cartesian (adjoint) representation,
// (L_k)_{ij} = -i eps_{kij}, where (n.L)^2 = 1 - n n^T.

#pragma once

#include <array>
#include <optional>

#include "ksa/matrixcore.hpp"

namespace ksa {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

/// Direction in R^3; x^2 + y^2 + z^2 = 1 within kTol.unit_vector.
class UnitVector3 {
 public:
  /// Throws kNonUnitVector if (x, y, z) is not unit length.
  UnitVector3(double x, double y, double z);
  explicit UnitVector3(const Vec3& v) : UnitVector3(v[0], v[1], v[2]) {}

  /// Normalizes any nonzero vector.
  static UnitVector3 normalize(const Vec3& v);

  double x() const noexcept { return v_[0]; }
  double y() const noexcept { return v_[1]; }
  double z() const noexcept { return v_[2]; }
  const Vec3& vec() const noexcept { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

  UnitVector3 operator-() const { return UnitVector3(Vec3{-v_[0], -v_[1], -v_[2]}, Trusted{}); }

 private:
  struct Trusted {};
  UnitVector3(const Vec3& v, Trusted) : v_(v) {}

  Vec3 v_;
};

inline double dot(const UnitVector3& a, const UnitVector3& b) { return dot(a.vec(), b.vec()); }

struct TriadAngles {
  double psi = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Three unit vectors, approximately (not necessarily exactly) orthonormal.
/// The constructor accepts only right-handed triads (det[e1 e2 e3] > 0).
class Triad {
 public:
  Triad(UnitVector3 e1, UnitVector3 e2, UnitVector3 e3,
        std::optional<TriadAngles> angles = std::nullopt);

  /// Actual analyzer alignments drawn at random carry no orientation; the
  /// squared projections do not depend on the sign of any axis.
  static Triad any_handedness(UnitVector3 e1, UnitVector3 e2, UnitVector3 e3);

  const UnitVector3& operator[](std::size_t r) const { return e_.at(r); }
  const std::array<UnitVector3, 3>& axes() const noexcept { return e_; }
  const std::optional<TriadAngles>& angles() const noexcept { return angles_; }
  double determinant() const;

 private:
  struct Unchecked {};
  Triad(UnitVector3 e1, UnitVector3 e2, UnitVector3 e3, Unchecked) : e_{e1, e2, e3} {}

  std::array<UnitVector3, 3> e_;
  std::optional<TriadAngles> angles_;
};

struct AngularMomentum {
  ComplexMatrix l1;
  ComplexMatrix l2;
  ComplexMatrix l3;

  const ComplexMatrix& operator[](std::size_t k) const;
};

/// (L_k)_{ij} = -i eps_{kij}.
const AngularMomentum& angular_momentum_ops();

/// n.L
ComplexMatrix spin_component(const UnitVector3& n);

/// P = (n.L)^2, a rank-2 projector.
ComplexMatrix squared_projection(const UnitVector3& n);

/// 1 - n n^T embedded as a complex matrix; closed form of (n.L)^2.
ComplexMatrix squared_projection_closed_form(const UnitVector3& n);

/// e1 = (1,0,0), e2 = (sin psi, cos psi, 0),
/// e3 = (sin theta cos phi, sin theta sin phi, cos theta).
Triad triad_from_angles(double psi, double theta, double phi);

/// max_{r != s} |e_r . e_s|
double orthonormality_defect(const Triad& t);

/// Unitary V whose columns are the L3 eigenvectors for m = +1, 0, -1 (Condon-Shortley
/// phases), so V^dagger L3 V = diag(1, 0, -1).
ComplexMatrix spherical_basis();

/// V^dagger M V: express a Cartesian-basis operator in the L3-diagonal basis.
ComplexMatrix to_l3_basis(const ComplexMatrix& m);

}  // namespace ksa
