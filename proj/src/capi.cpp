#include "mml.h"

#include "mml/equilibrium.hpp"
#include "mml/error.hpp"
#include "mml/gap.hpp"
#include "mml/kernel.hpp"
#include "mml/loggas.hpp"
#include "mml/orthopoly.hpp"
#include "mml/parallel.hpp"
#include "mml/potential.hpp"
#include "mml/serialize.hpp"
#include "mml/universality.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>
#include <utility>

struct mml_potential {
  mml::Potential v;
};
struct mml_equilibrium {
  mml::EquilibriumMeasure v;
};
struct mml_recurrence {
  mml::RecurrenceTable v;
};
struct mml_kernel {
  mml::KernelField v;
};
struct mml_sample {
  mml::GasConfig cfg;
  mml::EnsembleSample v;
};

namespace {

thread_local std::string g_last_error;

mml_status map_code(mml::errc c) {
  switch (c) {
    case mml::errc::invalid_argument: return MML_INVALID_ARGUMENT;
    case mml::errc::unsupported_derivative: return MML_UNSUPPORTED_DERIVATIVE;
    case mml::errc::multi_cut_unsupported: return MML_MULTI_CUT_UNSUPPORTED;
    case mml::errc::resolution: return MML_RESOLUTION;
    case mml::errc::io: return MML_IO;
    case mml::errc::internal: return MML_INTERNAL;
  }
  return MML_INTERNAL;
}

template <typename F>
mml_status guarded(F&& f) noexcept {
  try {
    f();
    g_last_error.clear();
    return MML_OK;
  } catch (const mml::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MML_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return MML_INTERNAL;
  }
}

// Evaluators report failure as NaN instead of a status code.
template <typename F>
double guarded_eval(F&& f) noexcept {
  try {
    const double v = f();
    g_last_error.clear();
    return v;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return std::numeric_limits<double>::quiet_NaN();
  } catch (...) {
    g_last_error = "unknown failure";
    return std::numeric_limits<double>::quiet_NaN();
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) mml::fail(mml::errc::internal, "out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require_handle(const void* h, const char* what) {
  mml::require(h != nullptr, mml::errc::invalid_argument, std::string("null ") + what);
}

mml::io::json validation_to_json(const mml::ValidationReport& r) {
  mml::io::json j;
  j["all_pass"] = r.all_pass();
  j["checks"] = mml::io::json::array();
  for (const auto& c : r.checks) {
    mml::io::json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["worst_point"] = c.worst_point;
    e["margin"] = c.margin;
    e["detail"] = c.detail;
    j["checks"].push_back(e);
  }
  return j;
}

} // namespace

extern "C" {

const char* mml_version(void) { return "0.1.0"; }

const char* mml_last_error(void) { return g_last_error.c_str(); }

void mml_free_string(char* s) { std::free(s); }

void mml_set_threads(int k) { mml::set_threads(k); }

/* ---- potential ---------------------------------------------------------- */

mml_status mml_potential_create_gaussian(mml_potential** out) {
  return guarded([&] {
    require_handle(out, "output pointer");
    *out = new mml_potential{mml::Potential::gaussian()};
  });
}

mml_status mml_potential_create_quartic(double g, double t, mml_potential** out) {
  return guarded([&] {
    require_handle(out, "output pointer");
    *out = new mml_potential{mml::Potential::quartic(g, t)};
  });
}

mml_status mml_potential_create_from_json(const char* json_text, mml_potential** out) {
  return guarded([&] {
    require_handle(json_text, "JSON text");
    require_handle(out, "output pointer");
    *out = new mml_potential{mml::io::potential_from_json(mml::io::parse(json_text))};
  });
}

mml_status mml_potential_to_json(const mml_potential* p, char** out) {
  return guarded([&] {
    require_handle(p, "potential");
    require_handle(out, "output pointer");
    *out = copy_string(mml::io::to_json(p->v).dump(2));
  });
}

mml_status mml_potential_validate(const mml_potential* p, int* all_pass, char** report_out) {
  return guarded([&] {
    require_handle(p, "potential");
    require_handle(all_pass, "all_pass pointer");
    const mml::ValidationReport r = p->v.validate();
    *all_pass = r.all_pass() ? 1 : 0;
    if (report_out) *report_out = copy_string(validation_to_json(r).dump(2));
  });
}

double mml_potential_eval(const mml_potential* p, double lambda, int order) {
  return guarded_eval([&] {
    require_handle(p, "potential");
    return p->v.eval(lambda, order);
  });
}

void mml_potential_free(mml_potential* p) { delete p; }

/* ---- equilibrium --------------------------------------------------------- */

mml_status mml_equilibrium_solve(const mml_potential* p, size_t grid_order,
                                 mml_equilibrium** out) {
  return guarded([&] {
    require_handle(p, "potential");
    require_handle(out, "output pointer");
    *out = new mml_equilibrium{
        grid_order == 0 ? mml::solve_equilibrium(p->v) : mml::solve_equilibrium(p->v, grid_order)};
  });
}

double mml_equilibrium_a(const mml_equilibrium* m) {
  return guarded_eval([&] {
    require_handle(m, "equilibrium");
    return m->v.a;
  });
}

double mml_equilibrium_b(const mml_equilibrium* m) {
  return guarded_eval([&] {
    require_handle(m, "equilibrium");
    return m->v.b;
  });
}

double mml_equilibrium_u_star(const mml_equilibrium* m) {
  return guarded_eval([&] {
    require_handle(m, "equilibrium");
    return m->v.u_star;
  });
}

double mml_equilibrium_density(const mml_equilibrium* m, double lambda) {
  return guarded_eval([&] {
    require_handle(m, "equilibrium");
    return m->v.density(lambda);
  });
}

double mml_equilibrium_cdf(const mml_equilibrium* m, double lambda) {
  return guarded_eval([&] {
    require_handle(m, "equilibrium");
    return m->v.cdf(lambda);
  });
}

double mml_equilibrium_log_potential(const mml_equilibrium* m, double lambda) {
  return guarded_eval([&] {
    require_handle(m, "equilibrium");
    return m->v.log_potential(lambda);
  });
}

double mml_effective_potential(const mml_potential* p, const mml_equilibrium* m, double lambda) {
  return guarded_eval([&] {
    require_handle(p, "potential");
    require_handle(m, "equilibrium");
    return mml::effective_potential(p->v, m->v, lambda);
  });
}

double mml_equilibrium_energy(const mml_potential* p, const mml_equilibrium* m) {
  return guarded_eval([&] {
    require_handle(p, "potential");
    require_handle(m, "equilibrium");
    return mml::energy(p->v, m->v);
  });
}

mml_status mml_equilibrium_to_json(const mml_equilibrium* m, char** out) {
  return guarded([&] {
    require_handle(m, "equilibrium");
    require_handle(out, "output pointer");
    *out = copy_string(mml::io::to_json(m->v).dump(2));
  });
}

void mml_equilibrium_free(mml_equilibrium* m) { delete m; }

/* ---- recurrence ----------------------------------------------------------- */

mml_status mml_recurrence_build(const mml_potential* p, size_t n, mml_recurrence** out) {
  return guarded([&] {
    require_handle(p, "potential");
    require_handle(out, "output pointer");
    *out = new mml_recurrence{mml::build_recurrence(p->v, n)};
  });
}

size_t mml_recurrence_n(const mml_recurrence* t) { return t ? t->v.n : 0; }

mml_status mml_recurrence_copy(const mml_recurrence* t, double* off_diag, double* diag,
                               double* log_gamma) {
  return guarded([&] {
    require_handle(t, "recurrence");
    if (off_diag)
      std::memcpy(off_diag, t->v.off_diag.data(), t->v.off_diag.size() * sizeof(double));
    if (diag) std::memcpy(diag, t->v.diag.data(), t->v.diag.size() * sizeof(double));
    if (log_gamma)
      std::memcpy(log_gamma, t->v.log_gamma.data(), t->v.log_gamma.size() * sizeof(double));
  });
}

double mml_free_energy(const mml_recurrence* t) {
  return guarded_eval([&] {
    require_handle(t, "recurrence");
    return mml::free_energy(t->v);
  });
}

mml_status mml_recurrence_to_json(const mml_recurrence* t, char** out) {
  return guarded([&] {
    require_handle(t, "recurrence");
    require_handle(out, "output pointer");
    *out = copy_string(mml::io::to_json(t->v).dump(2));
  });
}

void mml_recurrence_free(mml_recurrence* t) { delete t; }

/* ---- kernel --------------------------------------------------------------- */

mml_status mml_kernel_create(const mml_potential* p, size_t n, mml_kernel** out) {
  return guarded([&] {
    require_handle(p, "potential");
    require_handle(out, "output pointer");
    *out = new mml_kernel{mml::KernelField(p->v, n)};
  });
}

size_t mml_kernel_n(const mml_kernel* f) { return f ? f->v.n() : 0; }

double mml_kernel_eval(const mml_kernel* f, double lambda, double mu) {
  return guarded_eval([&] {
    require_handle(f, "kernel");
    return f->v.kernel(lambda, mu);
  });
}

double mml_kernel_density(const mml_kernel* f, double lambda) {
  return guarded_eval([&] {
    require_handle(f, "kernel");
    return f->v.density(lambda);
  });
}

double mml_kernel_rescaled(const mml_kernel* f, double lambda0, double x, double y) {
  return guarded_eval([&] {
    require_handle(f, "kernel");
    return f->v.rescaled(lambda0, x, y);
  });
}

mml_status mml_kernel_marginal(const mml_kernel* f, const double* points, size_t l,
                               double* out) {
  return guarded([&] {
    require_handle(f, "kernel");
    require_handle(points, "points");
    require_handle(out, "output pointer");
    *out = f->v.marginal(std::vector<double>(points, points + l));
  });
}

mml_status mml_kernel_bulk_window(const mml_kernel* f, double* lo, double* hi) {
  return guarded([&] {
    require_handle(f, "kernel");
    require_handle(lo, "lo pointer");
    require_handle(hi, "hi pointer");
    const auto w = f->v.bulk_window();
    *lo = w.first;
    *hi = w.second;
  });
}

mml_status mml_kernel_identities_json(const mml_kernel* f, char** out) {
  return guarded([&] {
    require_handle(f, "kernel");
    require_handle(out, "output pointer");
    *out = copy_string(mml::io::to_json(f->v.cd_identities()).dump(2));
  });
}

void mml_kernel_free(mml_kernel* f) { delete f; }

/* ---- gap ------------------------------------------------------------------ */

mml_status mml_gap_sine(double s, size_t order, double* value, double* error_estimate) {
  return guarded([&] {
    require_handle(value, "value pointer");
    const auto r = mml::fredholm_det(
        [](double x, double y) { return mml::sine_kernel(x - y); }, 0.0, s,
        order == 0 ? 64 : order);
    *value = r.value;
    if (error_estimate) *error_estimate = r.richardson_error_estimate;
  });
}

mml_status mml_gap_hole(const mml_kernel* f, double lambda0, double s, size_t order,
                        double* value, double* error_estimate) {
  return guarded([&] {
    require_handle(f, "kernel");
    require_handle(value, "value pointer");
    const auto r = mml::hole_probability(f->v, lambda0, s, order == 0 ? 64 : order);
    *value = r.value;
    if (error_estimate) *error_estimate = r.richardson_error_estimate;
  });
}

/* ---- log-gas -------------------------------------------------------------- */

mml_status mml_sample_run(const mml_potential* p, size_t n, double beta,
                          double proposal_scale, uint64_t seed, size_t burn_in,
                          size_t thin, size_t n_samples, mml_sample** out) {
  return guarded([&] {
    require_handle(p, "potential");
    require_handle(out, "output pointer");
    mml::GasConfig cfg;
    cfg.n = n;
    cfg.beta = beta;
    cfg.potential = p->v;
    if (proposal_scale > 0.0) cfg.proposal_scale = proposal_scale;
    cfg.seed = seed;
    cfg.burn_in = burn_in;
    cfg.thin = thin;
    mml::EnsembleSample s = mml::sample(cfg, n_samples);
    *out = new mml_sample{std::move(cfg), std::move(s)};
  });
}

size_t mml_sample_count(const mml_sample* s) { return s ? s->v.configurations.size() : 0; }

size_t mml_sample_n(const mml_sample* s) { return s ? s->cfg.n : 0; }

double mml_sample_acceptance_rate(const mml_sample* s) {
  return guarded_eval([&] {
    require_handle(s, "sample");
    return s->v.acceptance_rate;
  });
}

double mml_sample_tuned_scale(const mml_sample* s) {
  return guarded_eval([&] {
    require_handle(s, "sample");
    return s->v.tuned_scale;
  });
}

int mml_sample_acceptance_in_band(const mml_sample* s) {
  return s && s->v.acceptance_in_band ? 1 : 0;
}

mml_status mml_sample_configuration(const mml_sample* s, size_t index, double* out) {
  return guarded([&] {
    require_handle(s, "sample");
    require_handle(out, "output pointer");
    mml::require(index < s->v.configurations.size(), mml::errc::invalid_argument,
                 "configuration index out of range");
    const auto& conf = s->v.configurations[index];
    std::memcpy(out, conf.data(), conf.size() * sizeof(double));
  });
}

mml_status mml_sample_ncm_json(const mml_sample* s, const mml_equilibrium* m, char** out) {
  return guarded([&] {
    require_handle(s, "sample");
    require_handle(m, "equilibrium");
    require_handle(out, "output pointer");
    *out = copy_string(mml::io::to_json(mml::ncm_statistics(s->cfg, s->v, m->v)).dump(2));
  });
}

void mml_sample_free(mml_sample* s) { delete s; }

/* ---- universality ---------------------------------------------------------- */

mml_status mml_universality_run(const char* run_config_json, char** report_json) {
  return guarded([&] {
    require_handle(run_config_json, "run config");
    require_handle(report_json, "output pointer");
    const mml::RunConfig cfg =
        mml::io::run_config_from_json(mml::io::parse(run_config_json));
    *report_json = copy_string(mml::io::to_json(mml::run_suite(cfg)).dump(2));
  });
}

mml_status mml_fourier_diagnostic_json(const mml_kernel* f, double lambda0, double window,
                                       char** out) {
  return guarded([&] {
    require_handle(f, "kernel");
    require_handle(out, "output pointer");
    *out = copy_string(mml::io::to_json(mml::fourier_diagnostic(f->v, lambda0, window)).dump(2));
  });
}

} /* extern "C" */
