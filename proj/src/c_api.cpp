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

#include "ksa/ksa.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "ksa/contextsim.hpp"
#include "ksa/errmetrics.hpp"
#include "ksa/format.hpp"
#include "ksa/kscolor.hpp"
#include "ksa/measmodel.hpp"

struct ksa_povm {
  double psi;
  double theta;
  double phi;
  ksa_model model;
  ksa::Povm povm;
  std::vector<ksa::ComplexMatrix> expansion;
};

struct ksa_rayset {
  ksa::RaySet rays;
};

struct ksa_ks_result {
  ksa::OrthoStructure structure;
  ksa::ColoringResult result;
};

struct ksa_experiment {
  ksa::IllegalTriad triad;
  ksa::ExperimentReport report;
  std::string description;
};

namespace {

thread_local std::string g_last_error;

ksa_status fail(ksa_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

ksa_status from_code(ksa::ErrorCode code) { return static_cast<ksa_status>(static_cast<int>(code)); }

/// Runs body, translating exceptions to status codes.
template <typename F>
ksa_status guarded(F&& body) noexcept {
  try {
    return body();
  } catch (const ksa::Error& e) {
    return fail(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(KSA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(KSA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KSA_ERR_INTERNAL, "unknown error");
  }
}

ksa_status null_arg(const char* name) { return fail(KSA_ERR_NULL_POINTER, std::string(name) + " is NULL"); }

ksa_status copy_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed == nullptr) return null_arg("needed");
  *needed = s.size() + 1;
  if (buf == nullptr || cap < *needed) {
    return fail(KSA_ERR_BUFFER_TOO_SMALL, "buffer of " + std::to_string(cap) + " bytes, need " +
                                              std::to_string(*needed));
  }
  std::memcpy(buf, s.c_str(), *needed);
  return KSA_OK;
}

void copy_matrix(const ksa::ComplexMatrix& m, double* out) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      out[k++] = m(i, j).real();
      out[k++] = m(i, j).imag();
    }
  }
}

ksa::JointModel to_model(ksa_model m) {
  switch (m) {
    case KSA_MODEL_SEQUENTIAL: return ksa::JointModel::kSequential;
    case KSA_MODEL_CONTEMPORANEOUS: return ksa::JointModel::kContemporaneous;
  }
  throw ksa::Error(ksa::ErrorCode::kInvalidArgument, "unknown model");
}

ksa::AlignmentMode to_mode(ksa_alignment_mode m) {
  switch (m) {
    case KSA_MODE_INDEPENDENT: return ksa::AlignmentMode::kIndependent;
    case KSA_MODE_CORRELATED: return ksa::AlignmentMode::kCorrelatedOrthonormal;
  }
  throw ksa::Error(ksa::ErrorCode::kInvalidArgument, "unknown alignment mode");
}

void check_index(std::size_t i, std::size_t n, const char* what) {
  if (i >= n) {
    throw ksa::Error(ksa::ErrorCode::kIndexOutOfRange,
                     std::string(what) + " index " + std::to_string(i) + " out of range [0, " + std::to_string(n) + ")");
  }
}

std::size_t check_r(int r) {
  if (r < 1 || r > 3) throw ksa::Error(ksa::ErrorCode::kIndexOutOfRange, "r must be 1, 2 or 3");
  return static_cast<std::size_t>(r);
}

ksa::Ket state_from(const double* s6) {
  return ksa::Ket{ksa::Complex(s6[0], s6[1]), ksa::Complex(s6[2], s6[3]), ksa::Complex(s6[4], s6[5])};
}

}  // namespace

extern "C" {

const char* ksa_version(void) { return "0.1.0"; }

const char* ksa_status_string(ksa_status status) {
  switch (status) {
    case KSA_OK: return "ok";
    case KSA_ERR_NOT_FOUND: return "not found";
    case KSA_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case KSA_ERR_NULL_POINTER: return "null pointer";
    case KSA_ERR_INTERNAL: return "internal error";
    default: break;
  }
  const int v = static_cast<int>(status);
  if (v >= static_cast<int>(ksa::ErrorCode::kInvalidArgument) && v <= static_cast<int>(ksa::ErrorCode::kIo)) {
    return ksa::to_string(static_cast<ksa::ErrorCode>(v));
  }
  return "unknown status";
}

const char* ksa_last_error(void) { return g_last_error.c_str(); }

// POVM --------------------------------------------------------------------------

ksa_status ksa_povm_create(double psi, double theta, double phi, ksa_model model, ksa_povm** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    if (!std::isfinite(psi) || !std::isfinite(theta) || !std::isfinite(phi)) {
      return fail(KSA_ERR_INVALID_ARGUMENT, "angles must be finite");
    }
    const ksa::Triad t = ksa::triad_from_angles(psi, theta, phi);
    auto p = std::make_unique<ksa_povm>(ksa_povm{psi, theta, phi, model,
                                                 ksa::povm(ksa::joint_measurement(t, to_model(model))),
                                                 ksa::second_order_povm(psi, theta, phi)});
    *out = p.release();
    return KSA_OK;
  });
}

void ksa_povm_free(ksa_povm* p) { delete p; }

ksa_status ksa_povm_size(const ksa_povm* p, size_t* out) {
  if (p == nullptr) return null_arg("povm");
  if (out == nullptr) return null_arg("out");
  *out = p->povm.size();
  return KSA_OK;
}

ksa_status ksa_povm_label(const ksa_povm* p, size_t i, char* buf, size_t cap, size_t* needed) {
  if (p == nullptr) return null_arg("povm");
  return guarded([&] {
    check_index(i, p->povm.size(), "outcome");
    return copy_string(p->povm.label(i), buf, cap, needed);
  });
}

ksa_status ksa_povm_element(const ksa_povm* p, size_t i, double* out18) {
  if (p == nullptr) return null_arg("povm");
  if (out18 == nullptr) return null_arg("out");
  return guarded([&] {
    check_index(i, p->povm.size(), "outcome");
    copy_matrix(p->povm.elements[i], out18);
    return KSA_OK;
  });
}

ksa_status ksa_povm_kraus(const ksa_povm* p, size_t i, double* out18) {
  if (p == nullptr) return null_arg("povm");
  if (out18 == nullptr) return null_arg("out");
  return guarded([&] {
    check_index(i, p->povm.size(), "outcome");
    copy_matrix(p->povm.kraus[i], out18);
    return KSA_OK;
  });
}

ksa_status ksa_povm_second_order(const ksa_povm* p, size_t i, double* out18) {
  if (p == nullptr) return null_arg("povm");
  if (out18 == nullptr) return null_arg("out");
  return guarded([&] {
    check_index(i, p->expansion.size(), "outcome");
    copy_matrix(p->expansion[i], out18);
    return KSA_OK;
  });
}

ksa_status ksa_povm_deviation(const ksa_povm* p, size_t i, double* out) {
  if (p == nullptr) return null_arg("povm");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    check_index(i, p->povm.size(), "outcome");
    *out = ksa::operator_norm(p->povm.elements[i] - p->expansion[i]);
    return KSA_OK;
  });
}

ksa_status ksa_povm_illegal_bound(const ksa_povm* p, double* out) {
  if (p == nullptr) return null_arg("povm");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = ksa::operator_norm(ksa::illegal_element(p->povm));
    return KSA_OK;
  });
}

ksa_status ksa_povm_probability(const ksa_povm* p, size_t i, const double* state6, double* out) {
  if (p == nullptr) return null_arg("povm");
  if (state6 == nullptr) return null_arg("state");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    check_index(i, p->povm.size(), "outcome");
    *out = ksa::outcome_probabilities(p->povm, state_from(state6))[i];
    return KSA_OK;
  });
}

ksa_status ksa_povm_json(const ksa_povm* p, int with_expansion, char* buf, size_t cap, size_t* needed) {
  if (p == nullptr) return null_arg("povm");
  return guarded([&] {
    nlohmann::ordered_json j;
    j["psi"] = p->psi;
    j["theta"] = p->theta;
    j["phi"] = p->phi;
    j["model"] = p->model == KSA_MODEL_SEQUENTIAL ? "sequential" : "contemporaneous";
    const nlohmann::json body = ksa::povm_to_json(p->povm);
    for (const char* key : {"pointers", "levels", "outcomes", "elements", "kraus"}) j[key] = body.at(key);
    j["illegal_bound"] = ksa::operator_norm(ksa::illegal_element(p->povm));
    if (with_expansion != 0) {
      nlohmann::ordered_json approx;
      nlohmann::ordered_json dev;
      double max_dev = 0.0;
      for (std::size_t i = 0; i < p->povm.size(); ++i) {
        const std::string label = p->povm.label(i);
        approx[label] = ksa::matrix_to_json(p->expansion[i]);
        const double d = ksa::operator_norm(p->povm.elements[i] - p->expansion[i]);
        dev[label] = d;
        max_dev = std::max(max_dev, d);
      }
      j["second_order"] = std::move(approx);
      j["deviations"] = std::move(dev);
      j["max_deviation"] = max_dev;
    }
    return copy_string(j.dump(2) + "\n", buf, cap, needed);
  });
}

// Errors ------------------------------------------------------------------------

ksa_status ksa_triad_errors(double psi, double theta, double phi, ksa_model model, int r, double* delta_ei,
                            double* delta_ef) {
  if (delta_ei == nullptr || delta_ef == nullptr) return null_arg("out");
  return guarded([&] {
    const std::size_t rr = check_r(r);
    const ksa::Triad t = ksa::triad_from_angles(psi, theta, phi);
    const ksa::Povm p = ksa::povm(ksa::joint_measurement(t, to_model(model)));
    const ksa::ComplexMatrix a = ksa::squared_projection(t[rr - 1]);
    *delta_ei = ksa::retrodictive_error_povm(p, rr, a);
    *delta_ef = ksa::predictive_error_povm(p, rr, a);
    return KSA_OK;
  });
}

ksa_status ksa_triad_errors_heisenberg(double psi, double theta, double phi, ksa_model model, int r,
                                       double* delta_ei, double* delta_ef) {
  if (delta_ei == nullptr || delta_ef == nullptr) return null_arg("out");
  return guarded([&] {
    const std::size_t rr = check_r(r);
    const ksa::Triad t = ksa::triad_from_angles(psi, theta, phi);
    const ksa::MeasurementModel m = ksa::joint_measurement(t, to_model(model));
    const ksa::ErrorPair e =
        ksa::errors_heisenberg(m, ksa::squared_projection(t[rr - 1]), m.pointers.observable(rr));
    *delta_ei = e.delta_ei;
    *delta_ef = e.delta_ef;
    return KSA_OK;
  });
}

ksa_status ksa_closed_form_errors(double psi, double theta, double phi, int r, double* delta_ei, double* delta_ef) {
  if (delta_ei == nullptr || delta_ef == nullptr) return null_arg("out");
  return guarded([&] {
    const ksa::ErrorPair e = ksa::closed_form_errors(psi, theta, phi, check_r(r));
    *delta_ei = e.delta_ei;
    *delta_ef = e.delta_ef;
    return KSA_OK;
  });
}

ksa_status ksa_errors_grid_csv(const double* angles, size_t n_angles, const double* phis, size_t n_phis,
                               ksa_model model, char* buf, size_t cap, size_t* needed) {
  if ((angles == nullptr && n_angles > 0) || (phis == nullptr && n_phis > 0)) return null_arg("grid");
  return guarded([&] {
    const auto rel = [](double value, double closed) {
      return closed == 0.0 ? std::string("nan") : ksa::format_double((value - closed) / closed);
    };
    std::ostringstream os;
    os << "psi,theta,phi,r,delta_ei,delta_ef,closed_ei,closed_ef,rel_dev_ei,rel_dev_ef\n";
    for (std::size_t a = 0; a < n_angles; ++a) {
      for (std::size_t b = 0; b < n_phis; ++b) {
        const double ang = angles[a];
        const ksa::Triad t = ksa::triad_from_angles(ang, ang, phis[b]);
        const ksa::Povm p = ksa::povm(ksa::joint_measurement(t, to_model(model)));
        for (std::size_t r = 1; r <= 3; ++r) {
          const ksa::ComplexMatrix op = ksa::squared_projection(t[r - 1]);
          const double ei = ksa::retrodictive_error_povm(p, r, op);
          const double ef = ksa::predictive_error_povm(p, r, op);
          const ksa::ErrorPair c = ksa::closed_form_errors(ang, ang, phis[b], r);
          os << ksa::format_double(ang) << ',' << ksa::format_double(ang) << ',' << ksa::format_double(phis[b])
             << ',' << r << ',' << ksa::format_double(ei) << ',' << ksa::format_double(ef) << ','
             << ksa::format_double(c.delta_ei) << ',' << ksa::format_double(c.delta_ef) << ','
             << rel(ei, c.delta_ei) << ',' << rel(ef, c.delta_ef) << '\n';
        }
      }
    }
    return copy_string(os.str(), buf, cap, needed);
  });
}

// Ray sets ------------------------------------------------------------------------

ksa_status ksa_rayset_peres(ksa_rayset** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ksa_rayset{ksa::peres_rays()};
    return KSA_OK;
  });
}

ksa_status ksa_rayset_load(const char* path, ksa_rayset** out) {
  if (path == nullptr) return null_arg("path");
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ksa_rayset{ksa::load_ray_file(path)};
    return KSA_OK;
  });
}

ksa_status ksa_rayset_parse(const char* text, ksa_rayset** out) {
  if (text == nullptr) return null_arg("text");
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    std::istringstream in(text);
    *out = new ksa_rayset{ksa::parse_ray_file(in)};
    return KSA_OK;
  });
}

void ksa_rayset_free(ksa_rayset* rs) { delete rs; }

ksa_status ksa_rayset_size(const ksa_rayset* rs, size_t* out) {
  if (rs == nullptr) return null_arg("rayset");
  if (out == nullptr) return null_arg("out");
  *out = rs->rays.size();
  return KSA_OK;
}

ksa_status ksa_rayset_ray(const ksa_rayset* rs, size_t i, double* out3) {
  if (rs == nullptr) return null_arg("rayset");
  if (out3 == nullptr) return null_arg("out");
  return guarded([&] {
    check_index(i, rs->rays.size(), "ray");
    const ksa::Vec3& v = rs->rays[i].vec();
    std::copy(v.begin(), v.end(), out3);
    return KSA_OK;
  });
}

ksa_status ksa_rayset_label(const ksa_rayset* rs, size_t i, char* buf, size_t cap, size_t* needed) {
  if (rs == nullptr) return null_arg("rayset");
  return guarded([&] {
    check_index(i, rs->rays.size(), "ray");
    return copy_string(rs->rays.label(i), buf, cap, needed);
  });
}

ksa_status ksa_ks_solve(const ksa_rayset* rs, double tol, ksa_ks_result** out) {
  if (rs == nullptr) return null_arg("rayset");
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    if (!(tol >= 0.0)) return fail(KSA_ERR_INVALID_ARGUMENT, "tolerance must be >= 0");
    ksa::OrthoStructure os = ksa::ortho_structure(rs->rays, tol);
    ksa::ColoringResult res = ksa::find_legal_coloring(os, rs->rays.size());
    *out = new ksa_ks_result{std::move(os), std::move(res)};
    return KSA_OK;
  });
}

void ksa_ks_result_free(ksa_ks_result* res) { delete res; }

ksa_status ksa_ks_result_satisfiable(const ksa_ks_result* res, int* out) {
  if (res == nullptr) return null_arg("result");
  if (out == nullptr) return null_arg("out");
  *out = res->result.satisfiable() ? 1 : 0;
  return KSA_OK;
}

ksa_status ksa_ks_result_stats(const ksa_ks_result* res, uint64_t* nodes, uint64_t* contradictions) {
  if (res == nullptr) return null_arg("result");
  if (nodes == nullptr || contradictions == nullptr) return null_arg("out");
  *nodes = res->result.stats.nodes;
  *contradictions = res->result.stats.contradictions;
  return KSA_OK;
}

ksa_status ksa_ks_result_structure(const ksa_ks_result* res, size_t* n_pairs, size_t* n_triads) {
  if (res == nullptr) return null_arg("result");
  if (n_pairs == nullptr || n_triads == nullptr) return null_arg("out");
  *n_pairs = res->structure.pairs.size();
  *n_triads = res->structure.triads.size();
  return KSA_OK;
}

ksa_status ksa_ks_result_value(const ksa_ks_result* res, size_t i, int* out) {
  if (res == nullptr) return null_arg("result");
  if (out == nullptr) return null_arg("out");
  if (!res->result.satisfiable()) return fail(KSA_ERR_NOT_FOUND, "ray set is not colourable");
  return guarded([&] {
    check_index(i, res->result.coloring->values.size(), "ray");
    *out = res->result.coloring->values[i];
    return KSA_OK;
  });
}

ksa_status ksa_ks_result_violations(const ksa_ks_result* res, size_t* out) {
  if (res == nullptr) return null_arg("result");
  if (out == nullptr) return null_arg("out");
  if (!res->result.satisfiable()) return fail(KSA_ERR_NOT_FOUND, "ray set is not colourable");
  return guarded([&] {
    *out = ksa::check_coloring(res->structure, *res->result.coloring).size();
    return KSA_OK;
  });
}

// Experiment ----------------------------------------------------------------------

void ksa_experiment_config_init(ksa_experiment_config* cfg) {
  if (cfg == nullptr) return;
  const double s = 1.0 / std::sqrt(3.0);
  *cfg = ksa_experiment_config{0.01, 10000, 20000, 0, KSA_MODE_INDEPENDENT, KSA_MODEL_SEQUENTIAL, 2,
                               {s, 0.0, s, 0.0, s, 0.0}};
}

ksa_status ksa_experiment_run(const ksa_experiment_config* cfg, ksa_experiment** out) {
  if (cfg == nullptr) return null_arg("config");
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    if (!(cfg->sigma >= 0.0) || !std::isfinite(cfg->sigma)) return fail(KSA_ERR_INVALID_ARGUMENT, "sigma must be >= 0");
    if (cfg->trials == 0) return fail(KSA_ERR_INVALID_ARGUMENT, "trials must be >= 1");
    if (cfg->samples == 0) return fail(KSA_ERR_INVALID_ARGUMENT, "samples must be >= 1");
    const ksa::RaySet peres = ksa::peres_rays();
    if (cfg->removed_ray >= peres.size()) return fail(KSA_ERR_INDEX_OUT_OF_RANGE, "removed ray must be < 33");
    const ksa::ValuationStrategy f = ksa::default_valuation(cfg->removed_ray);
    const ksa::AlignmentDistribution d{to_mode(cfg->mode), cfg->sigma, cfg->seed};
    std::optional<ksa::IllegalTriad> triad = ksa::find_illegal_triad(f, d, peres, cfg->samples);
    if (!triad) return fail(KSA_ERR_NOT_FOUND, "no triad of the Peres set evaluates illegally");
    const ksa::ExperimentOptions options{cfg->trials, cfg->samples, to_model(cfg->model)};
    ksa::ExperimentReport rep = ksa::contextuality_experiment(triad->triad, f, d, state_from(cfg->state), options);
    rep.labels = triad->labels;
    *out = new ksa_experiment{std::move(*triad), std::move(rep),
                              ksa::describe(f) + " without " + peres.label(cfg->removed_ray)};
    return KSA_OK;
  });
}

void ksa_experiment_free(ksa_experiment* e) { delete e; }

ksa_status ksa_experiment_get_summary(const ksa_experiment* e, ksa_experiment_summary* out) {
  if (e == nullptr) return null_arg("experiment");
  if (out == nullptr) return null_arg("out");
  const ksa::ExperimentReport& r = e->report;
  for (std::size_t i = 0; i < 3; ++i) {
    out->p[i] = r.p[i].p;
    out->match[i] = r.match[i];
    out->induced[i] = r.induced[i];
  }
  out->hidden_illegal_exact = r.hidden_illegal_exact;
  out->hidden_illegal_empirical = r.hidden_illegal_empirical;
  out->hidden_std_error = r.hidden_std_error;
  out->quantum_illegal_mean = r.quantum_illegal_mean;
  out->quantum_illegal_max = r.quantum_illegal_max;
  out->quantum_illegal_bound = r.quantum_bound_max;
  out->gap = r.gap();
  out->trials = r.trials;
  return KSA_OK;
}

ksa_status ksa_experiment_summary_json(const ksa_experiment* e, char* buf, size_t cap, size_t* needed) {
  if (e == nullptr) return null_arg("experiment");
  return guarded([&] {
    nlohmann::json j = ksa::summary_json(e->report);
    j["valuation"] = e->description;
    j["triad_from_pair"] = e->triad.from_pair;
    j["induced_combination"] = e->triad.combination();
    return copy_string(j.dump(2) + "\n", buf, cap, needed);
  });
}

ksa_status ksa_experiment_trials_csv(const ksa_experiment* e, char* buf, size_t cap, size_t* needed) {
  if (e == nullptr) return null_arg("experiment");
  return guarded([&] {
    std::ostringstream os;
    ksa::write_trials_csv(os, e->report);
    return copy_string(os.str(), buf, cap, needed);
  });
}

}  // extern "C"
