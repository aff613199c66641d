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

// Dense complex linear algebra for the small operator spaces used by the
// measurement models (system dimension 3, at most 24 on system+apparatus).

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ksa/error.hpp"

namespace ksa {

using Complex = std::complex<double>;

/// Numerical tolerances shared by the library and the acceptance suite.
struct Tolerances {
  double hermitian = 1e-10;
  double unitary = 1e-10;
  double psd = 1e-10;
  double projector = 1e-10;
  double normalized = 1e-12;
  double unit_vector = 1e-12;
  double singular = 1e-10;
  double eig_residual = 1e-9;
  double orthonormal = 1e-10;
  double completeness = 1e-10;
  double ray_duplicate = 1e-9;
  double orthogonality = 1e-9;
};

inline constexpr Tolerances kTol{};

class Ket;

/// Square complex matrix. The dimension is fixed at construction; entries
/// may be written through operator().
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t dim);
  explicit ComplexMatrix(Eigen::MatrixXcd m);
  /// Row-major initializer; must describe a square matrix.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix diagonal(std::initializer_list<double> d);
  /// |u><v|
  static ComplexMatrix outer(const Ket& u, const Ket& v);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }

  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  Complex& operator()(std::size_t i, std::size_t j) { return m_(i, j); }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  /// Largest absolute entry.
  double max_abs() const;
  double frobenius_norm() const;

  bool hermitian(double tol = kTol.hermitian) const;
  bool unitary(double tol = kTol.unitary) const;
  bool psd(double tol = kTol.psd) const;
  bool projector(double tol = kTol.projector) const;
  /// max |M_ij - M_ji^*|
  double hermiticity_defect() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator-(const ComplexMatrix& a);
  friend Ket operator*(const ComplexMatrix& a, const Ket& v);

  const Eigen::MatrixXcd& eigen() const noexcept { return m_; }

 private:
  void check_same_dim(const ComplexMatrix& o) const;

  Eigen::MatrixXcd m_;
};

/// Max absolute entry of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// State vector.
class Ket {
 public:
  explicit Ket(std::size_t dim);
  explicit Ket(Eigen::VectorXcd v);
  Ket(std::initializer_list<Complex> amps);

  static Ket basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
  Complex operator[](std::size_t i) const { return v_(i); }
  Complex& operator[](std::size_t i) { return v_(i); }

  double norm() const { return v_.norm(); }
  bool normalized(double tol = kTol.normalized) const;
  Ket normalized_copy() const;

  /// <this|o>
  Complex inner(const Ket& o) const;
  /// <this|M|this>
  Complex expectation(const ComplexMatrix& m) const;

  friend Ket operator+(const Ket& a, const Ket& b);
  friend Ket operator-(const Ket& a, const Ket& b);
  friend Ket operator*(Complex s, const Ket& a);

  const Eigen::VectorXcd& eigen() const noexcept { return v_; }

 private:
  Eigen::VectorXcd v_;
};

struct HermitianEig {
  std::vector<double> values;  // ascending
  std::vector<Ket> vectors;    // orthonormal, vectors[i] pairs with values[i]
};

/// Eigendecomposition of a Hermitian matrix. Throws kNotHermitian when the
/// symmetry defect exceeds `tol`.
HermitianEig hermitian_eig(const ComplexMatrix& m, double tol = kTol.hermitian);

/// Operator (spectral) norm of a Hermitian matrix: max |lambda_i|.
double operator_norm(const ComplexMatrix& m);

/// Largest eigenvalue of a Hermitian matrix.
double max_eigenvalue(const ComplexMatrix& m);

/// exp(iH) for Hermitian H.
ComplexMatrix exp_i(const ComplexMatrix& h);

/// f(H) = sum_i f(lambda_i) v_i v_i^dagger for Hermitian H.
template <typename F>
ComplexMatrix spectral_apply(const ComplexMatrix& h, F&& f) {
  const HermitianEig eig = hermitian_eig(h);
  ComplexMatrix out(h.dim());
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    out += Complex(f(eig.values[i])) * ComplexMatrix::outer(eig.vectors[i], eig.vectors[i]);
  }
  return out;
}

/// Kronecker product; index of (i, j) is i * dim(b) + j.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
Ket tensor(const Ket& a, const Ket& b);

/// Unitary factor of the polar decomposition, M (M^dagger M)^{-1/2}.
/// Throws kSingular when the smallest singular value is below `tol`.
ComplexMatrix polar_unitary(const ComplexMatrix& m, double tol = kTol.singular);

}  // namespace ksa
