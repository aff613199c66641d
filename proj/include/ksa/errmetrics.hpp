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

// Maximal rms errors of retrodiction and prediction.
//
// The supremum over system states is the largest eigenvalue of a positive
// operator of the form sum_k K_k^dagger K_k; it is evaluated as the square
// of the largest singular value of the stacked K_k, so that errors which
// vanish algebraically come out at round-off level instead of sqrt(round-off).

#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "ksa/measmodel.hpp"

namespace ksa {

struct ErrorPair {
  double delta_ei = 0.0;  // retrodictive
  double delta_ef = 0.0;  // predictive
};

/// Heisenberg-picture definitions: eps_i = U^+(1 (x) alpha)U - A (x) 1 and
/// eps_f = U^+(1 (x) alpha)U - U^+(A (x) 1)U, compressed onto the ready state.
ErrorPair errors_heisenberg(const MeasurementModel& m, const ComplexMatrix& a_r, const ComplexMatrix& alpha_r);

/// sqrt || sum_a (A - a) E^(r)_a (A - a) ||
double retrodictive_error_povm(const Povm& p, std::size_t r, const ComplexMatrix& a_r);

/// sqrt || sum_alpha T_alpha^+ (A - alpha_r)^2 T_alpha ||
double predictive_error_povm(const Povm& p, std::size_t r, const ComplexMatrix& a_r);

struct SpreadBound {
  double lhs = 0.0;  // rms spread of alpha_r,f about the initial mean of A_r
  double rhs = 0.0;  // Delta_ei A_r + Delta A_r
};

SpreadBound spread_bound(const MeasurementModel& m, const Ket& psi, std::size_t r, const ComplexMatrix& a_r,
                         const ComplexMatrix& alpha_r);

/// Lowest-order closed forms for the sequential triad measurement, r = 1..3.
ErrorPair closed_form_errors(double psi, double theta, double phi, std::size_t r);

struct ErrorReport {
  std::string observable;
  ErrorPair errors;
  std::optional<TriadAngles> angles;
};

/// Errors for P_r = (e_r.L)^2, r = 1..3, computed from the POVM formulas.
std::vector<ErrorReport> triad_error_reports(const Triad& t, JointModel kind);

/// "psi,theta,phi,observable,delta_ei,delta_ef"
void write_error_csv_header(std::ostream& os);
void write_error_csv_row(std::ostream& os, const ErrorReport& report);

}  // namespace ksa
