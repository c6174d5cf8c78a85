#include "pentakit/pentakit.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <variant>

#include "pentakit/banded.hpp"
#include "pentakit/batch.hpp"
#include "pentakit/error.hpp"
#include "pentakit/experiments.hpp"
#include "pentakit/flowmap.hpp"
#include "pentakit/lsw.hpp"
#include "pentakit/parallel.hpp"

struct pk_context {
  std::unique_ptr<pentakit::Executor> ex;
  std::string error;
};

struct pk_solver {
  std::size_t n = 0;
  std::variant<pentakit::BatchTriSolver, pentakit::BatchPentaSolver, pentakit::BatchCyclicSolver>
      impl;
};

namespace {

using pentakit::ErrorCode;

template <class F>
pk_status guard(pk_context* ctx, F&& body) {
  if (!ctx) return PK_INVALID_ARGUMENT;
  ctx->error.clear();
  try {
    body();
    return PK_OK;
  } catch (const pentakit::Error& e) {
    ctx->error = e.what();
    return static_cast<pk_status>(e.code());
  } catch (const nlohmann::json::exception& e) {
    ctx->error = std::string("invalid JSON: ") + e.what();
    return PK_CONFIG;
  } catch (const std::bad_alloc&) {
    ctx->error = "out of memory";
    return PK_INTERNAL;
  } catch (const std::exception& e) {
    ctx->error = e.what();
    return PK_INTERNAL;
  }
}

void need(bool ok, const char* what) {
  if (!ok) pentakit::raise(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pentakit::Json parse_overrides(const char* text) {
  if (!text || !*text) return pentakit::Json::object();
  return pentakit::Json::parse(text);
}

void solve_batch(const pk_solver& s, pentakit::BatchField& b, const pentakit::Executor& ex) {
  std::visit([&](const auto& impl) { impl.solve_inplace(b, ex); }, s.impl);
}

}  // namespace

extern "C" {

const char* pk_version(void) {
  static const std::string v = pentakit::version_string();
  return v.c_str();
}

const char* pk_status_name(pk_status status) {
  return pentakit::error_code_name(static_cast<ErrorCode>(status));
}

pk_status pk_context_create(unsigned workers, pk_context** out) {
  if (!out || workers == 0) return PK_INVALID_ARGUMENT;
  *out = nullptr;
  try {
    auto ctx = std::make_unique<pk_context>();
    ctx->ex = std::make_unique<pentakit::Executor>(workers);
    *out = ctx.release();
    return PK_OK;
  } catch (...) {
    return PK_INTERNAL;
  }
}

void pk_context_destroy(pk_context* ctx) { delete ctx; }

const char* pk_last_error(const pk_context* ctx) { return ctx ? ctx->error.c_str() : ""; }

pk_status pk_solver_create(pk_context* ctx, pk_matrix_kind kind, size_t n,
                           const double* const* bands, pk_solver** out) {
  return guard(ctx, [&] {
    need(out && bands, "null argument");
    *out = nullptr;
    const std::size_t nb = (kind == PK_TRI || kind == PK_CYCLIC_TRI) ? 3 : 5;
    for (std::size_t k = 0; k < nb; ++k) need(bands[k] != nullptr, "null band");
    auto vec = [&](std::size_t k) { return std::vector<double>(bands[k], bands[k] + n); };
    pk_solver* s = nullptr;
    switch (kind) {
      case PK_TRI: {
        pentakit::TriDiag m{vec(0), vec(1), vec(2)};
        s = new pk_solver{n, pentakit::BatchTriSolver(pentakit::SharedConstant<pentakit::TriDiag>{m})};
        break;
      }
      case PK_PENTA: {
        pentakit::PentaDiag m{vec(0), vec(1), vec(2), vec(3), vec(4)};
        s = new pk_solver{n,
                          pentakit::BatchPentaSolver(pentakit::SharedConstant<pentakit::PentaDiag>{m})};
        break;
      }
      case PK_CYCLIC_TRI:
        s = new pk_solver{n, pentakit::BatchCyclicSolver(
                                 pentakit::CyclicTri{n, *bands[0], *bands[1], *bands[2]})};
        break;
      case PK_CYCLIC_PENTA:
        s = new pk_solver{n, pentakit::BatchCyclicSolver(pentakit::CyclicPenta{
                                 n, *bands[0], *bands[1], *bands[2], *bands[3], *bands[4]})};
        break;
      default:
        pentakit::raise(ErrorCode::InvalidArgument, "unknown matrix kind");
    }
    *out = s;
  });
}

size_t pk_solver_size(const pk_solver* solver) { return solver ? solver->n : 0; }

pk_status pk_solver_solve(pk_context* ctx, const pk_solver* solver, const double* rhs, double* x) {
  return guard(ctx, [&] {
    need(solver && rhs && x, "null argument");
    pentakit::BatchField b(solver->n, 1);
    std::memcpy(b.data.data(), rhs, solver->n * sizeof(double));
    solve_batch(*solver, b, pentakit::Executor::serial());
    std::memcpy(x, b.data.data(), solver->n * sizeof(double));
  });
}

pk_status pk_solver_solve_batch(pk_context* ctx, const pk_solver* solver, size_t m, double* x) {
  return guard(ctx, [&] {
    need(solver && x && m > 0, "null argument or empty batch");
    pentakit::BatchField b(solver->n, m);
    std::memcpy(b.data.data(), x, b.data.size() * sizeof(double));
    solve_batch(*solver, b, *ctx->ex);
    std::memcpy(x, b.data.data(), b.data.size() * sizeof(double));
  });
}

void pk_solver_destroy(pk_solver* solver) { delete solver; }

pk_status pk_experiment_names(pk_context* ctx, char** names_json) {
  return guard(ctx, [&] {
    need(names_json, "null argument");
    *names_json = dup_string(pentakit::Json(pentakit::experiment_names()).dump());
  });
}

pk_status pk_experiment_defaults(pk_context* ctx, const char* name, char** config_json) {
  return guard(ctx, [&] {
    need(name && config_json, "null argument");
    *config_json = dup_string(pentakit::experiment_defaults(name).dump(2));
  });
}

pk_status pk_experiment_resolve(pk_context* ctx, const char* name, const char* overrides_json,
                                char** config_json) {
  return guard(ctx, [&] {
    need(name && config_json, "null argument");
    *config_json = dup_string(pentakit::resolve_config(name, parse_overrides(overrides_json)).dump(2));
  });
}

pk_status pk_experiment_run(pk_context* ctx, const char* name, const char* overrides_json,
                            const char* out_dir, char** summary_json) {
  return guard(ctx, [&] {
    need(name && out_dir, "null argument");
    const auto summary = pentakit::run_experiment(name, parse_overrides(overrides_json),
                                                  ctx->ex->workers(), out_dir);
    if (summary_json) *summary_json = dup_string(summary.dump(2));
  });
}

void pk_string_free(char* s) { std::free(s); }

pk_status pk_kmeans(pk_context* ctx, const double* points, size_t n, size_t d, size_t k,
                    uint64_t seed, size_t max_iter, size_t* labels, double* centroids,
                    double* inertia) {
  return guard(ctx, [&] {
    need(points != nullptr, "null points");
    pentakit::FeatureMatrix m;
    m.n = n;
    m.d = d;
    m.values.assign(points, points + n * d);
    auto r = pentakit::kmeans(m, k, seed, max_iter);
    pentakit::canonicalize_labels(r);
    if (labels) std::copy(r.labels.begin(), r.labels.end(), labels);
    if (centroids) std::copy(r.centroids.begin(), r.centroids.end(), centroids);
    if (inertia) *inertia = r.inertia;
  });
}

pk_status pk_lsw_f(pk_context* ctx, double x, double* out) {
  return guard(ctx, [&] {
    need(out != nullptr, "null output");
    *out = pentakit::lsw_f(x);
  });
}

pk_status pk_p_alpha(pk_context* ctx, double a, double* out) {
  return guard(ctx, [&] {
    need(out != nullptr, "null output");
    *out = pentakit::p_alpha(a);
  });
}

}  // extern "C"
