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

// Random inputs and reference implementations that avoid the library code
// they check.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "ksa/kscolor.hpp"
#include "ksa/matrixcore.hpp"
#include "ksa/spin1.hpp"

namespace ksa::testing {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

inline ComplexMatrix random_matrix(std::size_t n, Rng& rng) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = random_complex(rng);
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = random_complex(rng).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = random_complex(rng);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline Ket random_ket(std::size_t n, Rng& rng) {
  Ket k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = random_complex(rng);
  return k.normalized_copy();
}

/// Naive triple loop product.
inline ComplexMatrix naive_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline ComplexMatrix naive_adjoint(const ComplexMatrix& a) {
  ComplexMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = std::conj(a(j, i));
  return c;
}

/// Unitary from modified Gram-Schmidt on the columns of a Gaussian matrix.
inline ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  ComplexMatrix m = random_matrix(n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(m(i, k)) * m(i, j);
      for (std::size_t i = 0; i < n; ++i) m(i, j) -= proj * m(i, k);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(m(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) m(i, j) /= nrm;
  }
  return m;
}

/// Largest |eigenvalue| of a Hermitian matrix by power iteration on M^2.
inline double power_iteration_norm(const ComplexMatrix& m, int iterations = 5000) {
  const std::size_t n = m.dim();
  std::vector<Complex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = Complex(1.0 + 0.1 * static_cast<double>(i), 0.3 * static_cast<double>(i % 3));
  const auto apply = [&](const std::vector<Complex>& x) {
    std::vector<Complex> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += m(i, j) * x[j];
    return y;
  };
  double lambda2 = 0.0;
  for (int it = 0; it < iterations; ++it) {
    std::vector<Complex> w = apply(apply(v));
    double nrm = 0.0;
    double vn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nrm += std::norm(w[i]);
      vn += std::norm(v[i]);
    }
    lambda2 = std::sqrt(nrm / vn);
    if (nrm == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / std::sqrt(nrm);
  }
  return std::sqrt(lambda2);
}

inline UnitVector3 random_unit(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return UnitVector3::normalize({g(rng), g(rng), g(rng)});
}

/// Real rotation matrix (rows) from a random unit quaternion.
inline std::array<Vec3, 3> random_rotation(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  double w = g(rng), x = g(rng), y = g(rng), z = g(rng);
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n, x /= n, y /= n, z /= n;
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
           {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
           {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

inline Triad rotated_canonical_triad(Rng& rng) {
  const auto r = random_rotation(rng);
  // Columns of a proper rotation form a right-handed orthonormal triad.
  return Triad(UnitVector3::normalize({r[0][0], r[1][0], r[2][0]}), UnitVector3::normalize({r[0][1], r[1][1], r[2][1]}),
               UnitVector3::normalize({r[0][2], r[1][2], r[2][2]}));
}

/// (psi, theta, phi) with |psi|, |theta| <= max_angle.
inline Triad random_small_triad(double max_angle, Rng& rng) {
  std::uniform_real_distribution<double> a(-max_angle, max_angle);
  std::uniform_real_distribution<double> p(0.0, 2.0 * std::numbers::pi);
  const double psi = a(rng);
  const double theta = a(rng);
  return triad_from_angles(psi, theta, p(rng));
}

/// (L_k)_{ij} = -i eps_{kij}, written out entry by entry.
inline std::array<ComplexMatrix, 3> reference_l() {
  const Complex i(0.0, 1.0);
  ComplexMatrix l1{{0.0, 0.0, 0.0}, {0.0, 0.0, -i}, {0.0, i, 0.0}};
  ComplexMatrix l2{{0.0, 0.0, i}, {0.0, 0.0, 0.0}, {-i, 0.0, 0.0}};
  ComplexMatrix l3{{0.0, -i, 0.0}, {i, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  return {l1, l2, l3};
}

/// 1 - n n^T.
inline ComplexMatrix reference_projection(const Vec3& n) {
  ComplexMatrix p(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) p(i, j) = (i == j ? 1.0 : 0.0) - n[i] * n[j];
  return p;
}

/// Colourability by enumerating every assignment.
inline bool brute_force_colourable(const OrthoStructure& os, std::size_t n) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const auto bit = [&](std::size_t i) { return static_cast<int>((mask >> i) & 1U); };
    bool ok = true;
    for (const auto& t : os.triads) {
      if (bit(t[0]) + bit(t[1]) + bit(t[2]) != 2) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (const auto& p : os.pairs) {
      if (bit(p[0]) == 0 && bit(p[1]) == 0) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace ksa::testing
