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

#include "ksa/errmetrics.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "ksa/format.hpp"

namespace ksa {

namespace {

/// Largest singular value of a tall matrix.
double sigma_max(const Eigen::MatrixXcd& stacked) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
  return svd.singularValues()(0);
}

/// Columns of X (1 (x) |phi0>): the product-space vectors X|m, phi0>.
Eigen::MatrixXcd apply_to_ready(const ComplexMatrix& x, const MeasurementModel& m) {
  const std::size_t ap = m.pointers.dim();
  Eigen::MatrixXcd embed = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m.sys_dim * ap),
                                                  static_cast<Eigen::Index>(m.sys_dim));
  for (std::size_t s = 0; s < m.sys_dim; ++s)
    for (std::size_t b = 0; b < ap; ++b) embed(s * ap + b, s) = m.phi0[b];
  return x.eigen() * embed;
}

void check_model_dims(const MeasurementModel& m, const ComplexMatrix& a_r, const ComplexMatrix& alpha_r) {
  if (a_r.dim() != m.sys_dim) throw Error(ErrorCode::kDimensionMismatch, "system observable has wrong dimension");
  if (alpha_r.dim() != m.pointers.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "pointer observable has wrong dimension");
  }
}

void check_povm_dims(const Povm& p, std::size_t r, const ComplexMatrix& a_r) {
  p.pointers.check_pointer(r);
  if (a_r.dim() != p.sys_dim()) throw Error(ErrorCode::kDimensionMismatch, "observable has wrong dimension");
  if (!a_r.hermitian()) throw Error(ErrorCode::kNotHermitian, "observable is not Hermitian");
}

std::string fmt_or_empty(const std::optional<TriadAngles>& a, double TriadAngles::*field) {
  return a ? format_double(*a.*field) : std::string();
}

}  // namespace

ErrorPair errors_heisenberg(const MeasurementModel& m, const ComplexMatrix& a_r, const ComplexMatrix& alpha_r) {
  check_model_dims(m, a_r, alpha_r);
  const ComplexMatrix one_sys = ComplexMatrix::identity(m.sys_dim);
  const ComplexMatrix one_ap = ComplexMatrix::identity(m.pointers.dim());
  const ComplexMatrix u_dag = m.u.adjoint();
  const ComplexMatrix alpha_f = u_dag * tensor(one_sys, alpha_r) * m.u;
  const ComplexMatrix a_i = tensor(a_r, one_ap);
  const ComplexMatrix a_f = u_dag * a_i * m.u;
  // <m,phi0| eps^2 |m',phi0> = (eps|m,phi0>)^+ (eps|m',phi0>) for Hermitian eps
  return {sigma_max(apply_to_ready(alpha_f - a_i, m)), sigma_max(apply_to_ready(alpha_f - a_f, m))};
}

double retrodictive_error_povm(const Povm& p, std::size_t r, const ComplexMatrix& a_r) {
  check_povm_dims(p, r, a_r);
  // sum_a (A - a) E^(r)_a (A - a) = sum_alpha K^+ K with K = T_alpha (A - alpha_r)
  const auto n = static_cast<Eigen::Index>(p.sys_dim());
  Eigen::MatrixXcd stacked(n * static_cast<Eigen::Index>(p.size()), n);
  const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p.pointers.reading(i, r);
    stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = p.kraus[i].eigen() * (a_r.eigen() - a * one);
  }
  return sigma_max(stacked);
}

double predictive_error_povm(const Povm& p, std::size_t r, const ComplexMatrix& a_r) {
  check_povm_dims(p, r, a_r);
  const auto n = static_cast<Eigen::Index>(p.sys_dim());
  Eigen::MatrixXcd stacked(n * static_cast<Eigen::Index>(p.size()), n);
  const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p.pointers.reading(i, r);
    stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = (a_r.eigen() - a * one) * p.kraus[i].eigen();
  }
  return sigma_max(stacked);
}

SpreadBound spread_bound(const MeasurementModel& m, const Ket& psi, std::size_t r, const ComplexMatrix& a_r,
                         const ComplexMatrix& alpha_r) {
  check_model_dims(m, a_r, alpha_r);
  m.pointers.check_pointer(r);
  if (!psi.normalized()) throw Error(ErrorCode::kNotNormalized, "state is not normalized");
  const double mean = psi.expectation(a_r).real();
  const ComplexMatrix one_sys = ComplexMatrix::identity(m.sys_dim);
  const ComplexMatrix one_ap = ComplexMatrix::identity(m.pointers.dim());

  const Ket initial = tensor(psi, m.phi0);
  const Ket after = m.u * initial;
  // (alpha_f - mean)|Psi> = U^+ (alpha - mean) U |Psi>, and U^+ preserves norms
  const Ket shifted = tensor(one_sys, alpha_r) * after - Complex(mean) * after;
  const double uncertainty = (a_r * psi - Complex(mean) * psi).norm();

  SpreadBound out;
  out.lhs = shifted.norm();
  out.rhs = errors_heisenberg(m, a_r, alpha_r).delta_ei + uncertainty;
  return out;
}

ErrorPair closed_form_errors(double psi, double theta, double phi, std::size_t r) {
  switch (r) {
    case 1:
      return {0.0, std::sqrt(2.0 * (psi * psi + theta * theta * std::cos(phi) * std::cos(phi)))};
    case 2:
      return {std::abs(psi), std::abs(std::sqrt(2.0) * theta * std::sin(phi))};
    case 3:
      return {std::abs(theta), 0.0};
  }
  throw Error(ErrorCode::kIndexOutOfRange, "observable index must be 1, 2 or 3");
}

std::vector<ErrorReport> triad_error_reports(const Triad& t, JointModel kind) {
  const Povm p = povm(joint_measurement(t, kind));
  std::vector<ErrorReport> out;
  for (std::size_t r = 1; r <= 3; ++r) {
    const ComplexMatrix a = squared_projection(t[r - 1]);
    out.push_back({"P" + std::to_string(r),
                   {retrodictive_error_povm(p, r, a), predictive_error_povm(p, r, a)},
                   t.angles()});
  }
  return out;
}

void write_error_csv_header(std::ostream& os) { os << "psi,theta,phi,observable,delta_ei,delta_ef\n"; }

void write_error_csv_row(std::ostream& os, const ErrorReport& report) {
  os << fmt_or_empty(report.angles, &TriadAngles::psi) << ',' << fmt_or_empty(report.angles, &TriadAngles::theta)
     << ',' << fmt_or_empty(report.angles, &TriadAngles::phi) << ',' << report.observable << ','
     << format_double(report.errors.delta_ei) << ',' << format_double(report.errors.delta_ef) << '\n';
}

}  // namespace ksa
