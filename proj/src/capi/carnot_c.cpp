#include "carnot/carnot.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "carnot/diffusion.hpp"
#include "carnot/group_io.hpp"
#include "carnot/heat_kernel.hpp"
#include "carnot/report.hpp"

struct carnot_group {
  carnot::GroupSpec spec;
};

struct carnot_kernel {
  carnot::KernelEvaluator eval;
};

struct carnot_batch {
  carnot::SampleBatch batch;
};

namespace {

thread_local std::string last_error;

carnot_status status_of(carnot::ErrorCode code) {
  using carnot::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return CARNOT_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidSpec: return CARNOT_ERR_INVALID_SPEC;
    case ErrorCode::UnsupportedStep: return CARNOT_ERR_UNSUPPORTED_STEP;
    case ErrorCode::UnsupportedGroup: return CARNOT_ERR_UNSUPPORTED_GROUP;
    case ErrorCode::DimensionMismatch: return CARNOT_ERR_DIMENSION_MISMATCH;
    case ErrorCode::QuadratureNotConverged: return CARNOT_ERR_QUADRATURE_NOT_CONVERGED;
    case ErrorCode::NumericalUnderflow: return CARNOT_ERR_NUMERICAL_UNDERFLOW;
    case ErrorCode::SchemeUnsupported: return CARNOT_ERR_SCHEME_UNSUPPORTED;
    case ErrorCode::ExcessiveRejection: return CARNOT_ERR_EXCESSIVE_REJECTION;
    case ErrorCode::DimensionTooLarge: return CARNOT_ERR_DIMENSION_TOO_LARGE;
    case ErrorCode::MinimizationFailed: return CARNOT_ERR_MINIMIZATION_FAILED;
    case ErrorCode::Io: return CARNOT_ERR_IO;
  }
  return CARNOT_ERR_INTERNAL;
}

template <class F>
carnot_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return CARNOT_OK;
  } catch (const carnot::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("malformed JSON: ") + e.what();
    return CARNOT_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CARNOT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CARNOT_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) carnot::fail(carnot::ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::span<const double> point(const carnot::GroupSpec& spec, const double* g) {
  return {g, static_cast<std::size_t>(spec.dim())};
}

}  // namespace

extern "C" {

const char* carnot_version(void) { return "0.1.0"; }

const char* carnot_status_name(carnot_status status) {
  switch (status) {
    case CARNOT_OK: return "ok";
    case CARNOT_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CARNOT_ERR_INVALID_SPEC: return "invalid-spec";
    case CARNOT_ERR_UNSUPPORTED_STEP: return "unsupported-step";
    case CARNOT_ERR_UNSUPPORTED_GROUP: return "unsupported-group";
    case CARNOT_ERR_DIMENSION_MISMATCH: return "dimension-mismatch";
    case CARNOT_ERR_QUADRATURE_NOT_CONVERGED: return "quadrature-not-converged";
    case CARNOT_ERR_NUMERICAL_UNDERFLOW: return "numerical-underflow";
    case CARNOT_ERR_SCHEME_UNSUPPORTED: return "scheme-unsupported";
    case CARNOT_ERR_EXCESSIVE_REJECTION: return "excessive-rejection";
    case CARNOT_ERR_DIMENSION_TOO_LARGE: return "dimension-too-large";
    case CARNOT_ERR_MINIMIZATION_FAILED: return "minimization-failed";
    case CARNOT_ERR_IO: return "io";
    case CARNOT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* carnot_last_error(void) { return last_error.c_str(); }

void carnot_free_string(char* s) { std::free(s); }

carnot_status carnot_preset_names(char** json_out) {
  return guarded([&] {
    require(json_out, "null output pointer");
    *json_out = dup_string(carnot::Json(carnot::presets::names()).dump());
  });
}

carnot_status carnot_group_create(const char* name_or_path, carnot_group** out) {
  return guarded([&] {
    require(name_or_path && out, "null argument");
    *out = new carnot_group{carnot::resolve_group(name_or_path)};
  });
}

carnot_status carnot_group_from_json(const char* json_text, carnot_group** out) {
  return guarded([&] {
    require(json_text && out, "null argument");
    *out = new carnot_group{carnot::parse_group_json(json_text)};
  });
}

void carnot_group_free(carnot_group* group) { delete group; }

const char* carnot_group_name(const carnot_group* group) { return group ? group->spec.name().c_str() : ""; }
int carnot_group_dim(const carnot_group* group) { return group ? group->spec.dim() : 0; }
int carnot_group_horizontal_dim(const carnot_group* group) { return group ? group->spec.horizontal_dim() : 0; }
int carnot_group_step(const carnot_group* group) { return group ? group->spec.step() : 0; }
int carnot_group_homogeneous_dim(const carnot_group* group) {
  return group ? group->spec.homogeneous_dim() : 0;
}

carnot_status carnot_group_product(const carnot_group* group, const double* a, const double* b, double* out) {
  return guarded([&] {
    require(group && a && b && out, "null argument");
    const auto& spec = group->spec;
    const carnot::Point p = carnot::product(spec, point(spec, a), point(spec, b));
    std::copy(p.begin(), p.end(), out);
  });
}

carnot_status carnot_kernel_create(const carnot_group* group, carnot_kernel** out) {
  return guarded([&] {
    require(group && out, "null argument");
    *out = new carnot_kernel{carnot::KernelEvaluator(group->spec)};
  });
}

void carnot_kernel_free(carnot_kernel* kernel) { delete kernel; }

carnot_status carnot_kernel_value(const carnot_kernel* kernel, double t, const double* g, double* value_out) {
  return guarded([&] {
    require(kernel && g && value_out, "null argument");
    *value_out = kernel->eval.kernel(t, point(kernel->eval.spec(), g));
  });
}

carnot_status carnot_kernel_log_gradient(const carnot_kernel* kernel, double t, const double* g, double* out) {
  return guarded([&] {
    require(kernel && g && out, "null argument");
    const auto v = kernel->eval.log_gradient_right(t, point(kernel->eval.spec(), g));
    std::copy(v.begin(), v.end(), out);
  });
}

carnot_status carnot_kernel_pde_residual(const carnot_kernel* kernel, double t, const double* g,
                                         double* residual_out) {
  return guarded([&] {
    require(kernel && g && residual_out, "null argument");
    *residual_out = kernel->eval.kernel_pde_residual(t, point(kernel->eval.spec(), g));
  });
}

void carnot_mc_options_default(carnot_mc_options* opt) {
  if (!opt) return;
  const carnot::MCConfig c;
  opt->seed = c.seed;
  opt->samples = c.n_samples;
  opt->substeps = c.substeps;
  opt->scheme = 0;
  opt->threads = c.threads;
}

carnot_status carnot_simulate(const carnot_group* group, double t, const carnot_mc_options* opt,
                              carnot_batch** out) {
  return guarded([&] {
    require(group && out, "null argument");
    carnot_mc_options o;
    carnot_mc_options_default(&o);
    if (opt) o = *opt;
    require(o.scheme == 0 || o.scheme == 1, "scheme must be 0 or 1");
    carnot::MCConfig c;
    c.seed = o.seed;
    c.n_samples = o.samples;
    c.substeps = o.substeps;
    c.scheme = o.scheme == 1 ? carnot::Scheme::ExactStep2 : carnot::Scheme::StratonovichHeun;
    c.threads = o.threads;
    *out = new carnot_batch{carnot::sample_endpoint(group->spec, t, c)};
  });
}

void carnot_batch_free(carnot_batch* batch) { delete batch; }
size_t carnot_batch_size(const carnot_batch* batch) { return batch ? batch->batch.size() : 0; }
int carnot_batch_dim(const carnot_batch* batch) { return batch ? batch->batch.dim() : 0; }
const double* carnot_batch_data(const carnot_batch* batch) {
  return batch ? batch->batch.data().data() : nullptr;
}

carnot_status carnot_run(const char* command, const char* config_json, char** report_json,
                         carnot_verdict* verdict) {
  return guarded([&] {
    require(command && report_json && verdict, "null argument");
    const carnot::Json cfg = config_json ? carnot::Json::parse(config_json) : carnot::Json::object();
    const carnot::RunResult r = carnot::run_command(command, cfg);
    *report_json = dup_string(r.report.dump(2));
    *verdict = static_cast<carnot_verdict>(static_cast<int>(r.verdict));
  });
}

}  // extern "C"
