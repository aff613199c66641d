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

#include "ksa/matrixcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ksa {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kSingular: return "Singular";
    case ErrorCode::kNotProjector: return "NotProjector";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::kNonUnitVector: return "NonUnitVector";
    case ErrorCode::kLeftHanded: return "LeftHanded";
    case ErrorCode::kIncompleteColoring: return "IncompleteColoring";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

// ComplexMatrix ------------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t dim) : m_(Eigen::MatrixXcd::Zero(dim, dim)) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "matrix dimension must be positive");
}

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix must be square and non-empty");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : ComplexMatrix(rows.size()) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "initializer rows must form a square matrix");
    }
    std::size_t j = 0;
    for (const Complex& z : row) m_(i, j++) = z;
    ++i;
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  return ComplexMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.m_(i, i) = d[i];
  return out;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

ComplexMatrix ComplexMatrix::outer(const Ket& u, const Ket& v) {
  return ComplexMatrix(Eigen::MatrixXcd(u.eigen() * v.eigen().adjoint()));
}

ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(Eigen::MatrixXcd(m_.adjoint())); }

Complex ComplexMatrix::trace() const { return m_.trace(); }

double ComplexMatrix::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

double ComplexMatrix::frobenius_norm() const { return m_.norm(); }

double ComplexMatrix::hermiticity_defect() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }

bool ComplexMatrix::hermitian(double tol) const { return hermiticity_defect() <= tol; }

bool ComplexMatrix::unitary(double tol) const {
  const Eigen::MatrixXcd d = m_.adjoint() * m_ - Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

bool ComplexMatrix::psd(double tol) const {
  if (!hermitian(tol)) return false;
  const HermitianEig eig = hermitian_eig(*this, tol);
  return eig.values.front() >= -tol;
}

bool ComplexMatrix::projector(double tol) const {
  if (!hermitian(tol)) return false;
  return (m_ * m_ - m_).cwiseAbs().maxCoeff() <= tol;
}

void ComplexMatrix::check_same_dim(const ComplexMatrix& o) const {
  if (dim() != o.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dimension mismatch: " + std::to_string(dim()) + " vs " + std::to_string(o.dim()));
  }
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  check_same_dim(o);
  m_ += o.m_;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  check_same_dim(o);
  m_ -= o.m_;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.check_same_dim(b);
  return ComplexMatrix(Eigen::MatrixXcd(a.m_ * b.m_));
}

ComplexMatrix operator-(const ComplexMatrix& a) { return ComplexMatrix(Eigen::MatrixXcd(-a.m_)); }

Ket operator*(const ComplexMatrix& a, const Ket& v) {
  if (a.dim() != v.dim()) throw Error(ErrorCode::kDimensionMismatch, "matrix/vector dimension mismatch");
  return Ket(Eigen::VectorXcd(a.m_ * v.eigen()));
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

// Ket ----------------------------------------------------------------------

Ket::Ket(std::size_t dim) : v_(Eigen::VectorXcd::Zero(dim)) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "ket dimension must be positive");
}

Ket::Ket(Eigen::VectorXcd v) : v_(std::move(v)) {
  if (v_.size() == 0) throw Error(ErrorCode::kInvalidArgument, "ket dimension must be positive");
}

Ket::Ket(std::initializer_list<Complex> amps) : Ket(amps.size()) {
  std::size_t i = 0;
  for (const Complex& z : amps) v_(i++) = z;
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorCode::kIndexOutOfRange, "basis index out of range");
  Ket k(dim);
  k.v_(index) = 1.0;
  return k;
}

bool Ket::normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

Ket Ket::normalized_copy() const {
  const double n = norm();
  if (n == 0.0) throw Error(ErrorCode::kNotNormalized, "cannot normalize the zero vector");
  return Ket(Eigen::VectorXcd(v_ / n));
}

Complex Ket::inner(const Ket& o) const {
  if (dim() != o.dim()) throw Error(ErrorCode::kDimensionMismatch, "ket dimension mismatch");
  return v_.dot(o.v_);  // Eigen's dot conjugates the left operand
}

Complex Ket::expectation(const ComplexMatrix& m) const { return inner(m * *this); }

Ket operator+(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kDimensionMismatch, "ket dimension mismatch");
  return Ket(Eigen::VectorXcd(a.v_ + b.v_));
}

Ket operator-(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kDimensionMismatch, "ket dimension mismatch");
  return Ket(Eigen::VectorXcd(a.v_ - b.v_));
}

Ket operator*(Complex s, const Ket& a) { return Ket(Eigen::VectorXcd(s * a.v_)); }

// Decompositions ------------------------------------------------------------

HermitianEig hermitian_eig(const ComplexMatrix& m, double tol) {
  const double defect = m.hermiticity_defect();
  if (defect > tol) {
    throw Error(ErrorCode::kNotHermitian, "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  // Symmetrize so round-off in the lower triangle is not silently ignored.
  const Eigen::MatrixXcd h = 0.5 * (m.eigen() + m.eigen().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotHermitian, "eigendecomposition did not converge");
  }
  HermitianEig out;
  const auto n = static_cast<std::size_t>(h.rows());
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values.push_back(solver.eigenvalues()(i));
    out.vectors.emplace_back(Eigen::VectorXcd(solver.eigenvectors().col(i)));
  }
  return out;
}

double operator_norm(const ComplexMatrix& m) {
  const HermitianEig eig = hermitian_eig(m);
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

double max_eigenvalue(const ComplexMatrix& m) { return hermitian_eig(m).values.back(); }

ComplexMatrix exp_i(const ComplexMatrix& h) {
  return spectral_apply(h, [](double lambda) { return std::exp(Complex(0.0, lambda)); });
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0)) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

Ket tensor(const Ket& a, const Ket& b) {
  Ket out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < b.dim(); ++k) out[i * b.dim() + k] = a[i] * b[k];
  return out;
}

ComplexMatrix polar_unitary(const ComplexMatrix& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.eigen(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= tol) {
    throw Error(ErrorCode::kSingular,
                "polar decomposition of a singular matrix (smallest singular value " +
                    std::to_string(s(s.size() - 1)) + ")");
  }
  return ComplexMatrix(Eigen::MatrixXcd(svd.matrixU() * svd.matrixV().adjoint()));
}

}  // namespace ksa
